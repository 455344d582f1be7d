"""Exact linear algebra over the rationals.

Everything in this package that looks like a number is a `fractions.Fraction`.
Matrices are small and dense, elimination always picks the first nonzero
entry as pivot (no magnitude pivoting, so results are deterministic), and a
subspace is represented by the reduced row echelon basis of its spanning set.
That representation is canonical: two subspaces are equal iff their stored
bases are equal entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction

QZERO = Q(0)
QONE = Q(1)


class DimensionMismatch(ValueError):
    """Shapes of the operands do not line up."""


class AmbientMismatch(ValueError):
    """Subspaces live in coordinate spaces of different dimensions."""


class NotASubspace(ValueError):
    """Raised by complement_in when the first space is not inside the second."""


def as_rational(value) -> Q:
    """Coerce an int, Fraction or 'p/q' string to a Fraction."""
    if isinstance(value, Q):
        return value
    if isinstance(value, int):
        return Q(value)
    if isinstance(value, str):
        return Q(value)
    raise TypeError(f"not a rational value: {value!r}")


def format_rational(value: Q) -> str:
    """Render p/q, or just p when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _freeze(rows: Iterable[Iterable[Q]]) -> tuple[tuple[Q, ...], ...]:
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix over Q, stored row major as nested tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[Q, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "RationalMatrix":
        data = _freeze([as_rational(v) for v in row] for row in rows)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise DimensionMismatch("ragged rows")
        return RationalMatrix(len(data), ncols, data)

    @staticmethod
    def zeros(rows: int, cols: int) -> "RationalMatrix":
        row = (QZERO,) * cols
        return RationalMatrix(rows, cols, (row,) * rows)

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        return RationalMatrix(
            n, n, _freeze([QONE if i == j else QZERO for j in range(n)] for i in range(n))
        )

    def row(self, i: int) -> tuple[Q, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Q, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, _freeze(zip(*self.entries)) if self.entries else ())

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.entries for v in r)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix addition shape mismatch")
        return RationalMatrix(
            self.rows,
            self.cols,
            _freeze(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(Q(-1))

    def scale(self, c) -> "RationalMatrix":
        c = as_rational(c)
        return RationalMatrix(
            self.rows, self.cols, _freeze(tuple(c * v for v in r) for r in self.entries)
        )

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product shape mismatch")
        cols = other.transpose().entries
        data = _freeze(
            tuple(sum((a * b for a, b in zip(row, col) if a), QZERO) for col in cols)
            for row in self.entries
        )
        return RationalMatrix(self.rows, other.cols, data)

    def apply(self, vec: Sequence) -> tuple[Q, ...]:
        """Matrix times column vector."""
        v = [as_rational(x) for x in vec]
        if len(v) != self.cols:
            raise DimensionMismatch("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(row, v) if a), QZERO) for row in self.entries)

    def to_lists(self) -> list[list[Q]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class RrefResult:
    matrix: RationalMatrix
    pivots: tuple[int, ...]
    rank: int


def _rref_rows(rows: list[list[Q]], cols: int) -> tuple[list[list[Q]], list[int]]:
    """In-place Gauss-Jordan on a list of row lists; returns (rows, pivot cols).

    The pivot in each column is the first row with a nonzero entry, never the
    entry of largest magnitude, so the computation is deterministic and the
    result canonical.
    """
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(cols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][c]
        if inv != 1:
            rows[r] = [v / inv for v in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                rows[i] = [v - f * p for v, p in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rref(matrix: RationalMatrix) -> RrefResult:
    """Reduced row echelon form with the pivot columns and the rank."""
    rows = [list(r) for r in matrix.entries]
    rows, pivots = _rref_rows(rows, matrix.cols)
    return RrefResult(
        RationalMatrix(matrix.rows, matrix.cols, _freeze(rows)), tuple(pivots), len(pivots)
    )


def nullspace(matrix: RationalMatrix) -> "Subspace":
    """Canonical basis of {v : Mv = 0} inside Q^cols."""
    res = rref(matrix)
    pivots = set(res.pivots)
    free = [c for c in range(matrix.cols) if c not in pivots]
    vectors = []
    for f in free:
        v = [QZERO] * matrix.cols
        v[f] = QONE
        for r, p in enumerate(res.pivots):
            v[p] = -res.matrix.entries[r][f]
        vectors.append(v)
    return Subspace.from_vectors(matrix.cols, vectors)


def solve_linear(matrix: RationalMatrix, rhs: Sequence) -> tuple[Q, ...] | None:
    """A particular solution of Mx = b, or None when none exists.

    None is returned exactly when rank([M|b]) exceeds rank(M).  The solution
    returned sets every free variable to zero.
    """
    b = [as_rational(v) for v in rhs]
    if len(b) != matrix.rows:
        raise DimensionMismatch("rhs length mismatch")
    rows = [list(r) + [bv] for r, bv in zip(matrix.entries, b)]
    if not rows:
        return ()
    rows, pivots = _rref_rows(rows, matrix.cols + 1)
    if pivots and pivots[-1] == matrix.cols:
        return None
    x = [QZERO] * matrix.cols
    for r, p in enumerate(pivots):
        x[p] = rows[r][matrix.cols]
    return tuple(x)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n held as its RREF basis (rows, no zero rows).

    Construction always goes through elimination, so any two equal subspaces
    carry the identical basis and dataclass equality is subspace equality.
    """

    ambient_dim: int
    basis: RationalMatrix

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = []
        for v in vectors:
            row = [as_rational(x) for x in v]
            if len(row) != ambient_dim:
                raise DimensionMismatch("vector does not live in the ambient space")
            rows.append(row)
        rows, pivots = _rref_rows(rows, ambient_dim)
        rows = rows[: len(pivots)]
        return Subspace(ambient_dim, RationalMatrix(len(rows), ambient_dim, _freeze(rows)))

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, RationalMatrix(0, ambient_dim, ()))

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, RationalMatrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def basis_vectors(self) -> tuple[tuple[Q, ...], ...]:
        return self.basis.entries

    def pivot_columns(self) -> tuple[int, ...]:
        cols = []
        for row in self.basis.entries:
            for c, v in enumerate(row):
                if v:
                    cols.append(c)
                    break
        return tuple(cols)

    def reduce(self, vector: Sequence) -> tuple[Q, ...]:
        """Residue of a vector after elimination against the basis."""
        v = [as_rational(x) for x in vector]
        if len(v) != self.ambient_dim:
            raise AmbientMismatch("vector/ambient mismatch")
        for row in self.basis.entries:
            p = next(c for c, e in enumerate(row) if e)
            f = v[p]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, vector: Sequence) -> bool:
        return all(v == 0 for v in self.reduce(vector))

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch("subspace ambient mismatch")
        return all(self.contains(row) for row in other.basis.entries)


def _check_ambient(s1: Subspace, s2: Subspace) -> None:
    if s1.ambient_dim != s2.ambient_dim:
        raise AmbientMismatch(
            f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}"
        )


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    _check_ambient(s1, s2)
    return Subspace.from_vectors(
        s1.ambient_dim, list(s1.basis.entries) + list(s2.basis.entries)
    )


def subspace_intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """Zassenhaus: eliminate [B1|B1; B2|0], read the intersection off the
    right block of rows whose left block became zero."""
    _check_ambient(s1, s2)
    n = s1.ambient_dim
    rows = []
    for r in s1.basis.entries:
        rows.append(list(r) + list(r))
    for r in s2.basis.entries:
        rows.append(list(r) + [QZERO] * n)
    rows, pivots = _rref_rows(rows, 2 * n)
    vectors = []
    for row in rows:
        left = row[:n]
        if any(left):
            continue
        right = row[n:]
        if any(right):
            vectors.append(right)
    return Subspace.from_vectors(n, vectors)


def complement_in(s1: Subspace, s2: Subspace) -> Subspace:
    """A deterministic T with s1 + T = s2 and s1 ∩ T = 0.

    Requires s1 ⊆ s2.  The basis rows of s2 are scanned in order and a row is
    kept whenever it enlarges the span, which extends the RREF basis of s1 by
    standard-order pivots.
    """
    _check_ambient(s1, s2)
    if not s2.contains_subspace(s1):
        raise NotASubspace("first space is not contained in the second")
    working = [list(r) for r in s1.basis.entries]
    taken = []
    rank = len(working)
    for row in s2.basis.entries:
        candidate = working + [list(row)]
        _, pivots = _rref_rows([r[:] for r in candidate], s1.ambient_dim)
        if len(pivots) > rank:
            working = candidate
            rank += 1
            taken.append(row)
    return Subspace.from_vectors(s1.ambient_dim, taken)


def combine(s1: Subspace, s2: Subspace, mode: str) -> Subspace:
    """Dispatch on mode: 'sum', 'intersect' or 'complement_in'."""
    if mode == "sum":
        return subspace_sum(s1, s2)
    if mode == "intersect":
        return subspace_intersect(s1, s2)
    if mode == "complement_in":
        return complement_in(s1, s2)
    raise ValueError(f"unknown combine mode: {mode!r}")


def restrict(space: Subspace, constraint_rows: Sequence[Sequence[Q]]) -> Subspace:
    """{v in space : C v = 0} for a list of constraint row vectors."""
    rows = list(constraint_rows)
    if not rows or space.dim == 0:
        return space
    basis = space.basis.entries
    # Constraints expressed in the coordinates of the basis: (C B^T) y = 0.
    small = []
    for c in rows:
        small.append([sum((a * b for a, b in zip(c, brow) if a), QZERO) for brow in basis])
    sol = nullspace(RationalMatrix(len(small), space.dim, _freeze(small)))
    vectors = []
    for y in sol.basis.entries:
        vec = [QZERO] * space.ambient_dim
        for coef, brow in zip(y, basis):
            if coef:
                for k, b in enumerate(brow):
                    if b:
                        vec[k] += coef * b
        vectors.append(vec)
    return Subspace.from_vectors(space.ambient_dim, vectors)
