"""Finite-dimensional Leibniz algebras over Q given by structure constants.

A (right) Leibniz algebra satisfies [x,[y,z]] = [[x,y],z] - [[x,z],y] on all
elements; brackets are not assumed anticommutative.  The structure constant
c[i][j][k] is the coefficient of e_{k+1} in [e_{i+1}, e_{j+1}] (indices are
0-based internally, 1-based in every public error message and document).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .exactlin import (
    Q,
    QZERO,
    RationalMatrix,
    Subspace,
    as_rational,
    complement_in,
    format_rational,
    solve_linear,
    subspace_intersect,
    _freeze,
    _rref_rows,
)

Vector = tuple[Q, ...]


class IndexOutOfRange(ValueError):
    """A 1-based basis index in a product list falls outside 1..dim."""


class NotAnIdeal(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


class NotNilpotent(ValueError):
    pass


class IdentityViolation(Exception):
    """The Leibniz identity fails on a triple of basis vectors.

    Carries the offending 1-based triple (i, j, k) together with both sides
    [e_i,[e_j,e_k]] and [[e_i,e_j],e_k] - [[e_i,e_k],e_j] in coordinates.
    """

    def __init__(self, i: int, j: int, k: int, lhs: Vector, rhs: Vector):
        self.i, self.j, self.k = i, j, k
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(
            f"Leibniz identity fails on (e{i},e{j},e{k}): "
            f"lhs={_coords_str(lhs)} rhs={_coords_str(rhs)}"
        )


def _coords_str(v: Sequence[Q]) -> str:
    terms = [
        f"{format_rational(c)}*e{k + 1}" for k, c in enumerate(v) if c
    ]
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class LeibnizAlgebra:
    dim: int
    constants: tuple[tuple[Vector, ...], ...]
    labels: tuple[str, ...] | None = None

    def label(self, k: int) -> str:
        """Display name of the (1-based) k-th basis vector."""
        if self.labels:
            return self.labels[k - 1]
        return f"e{k}"

    # -- construction -------------------------------------------------

    @staticmethod
    def build(
        dim: int,
        products: Mapping[tuple[int, int], Mapping[int, object]] | Sequence,
        check: str = "enforce",
        labels: Sequence[str] | None = None,
    ) -> "LeibnizAlgebra":
        """Build from a sparse list of basis products, 1-based indices.

        `products` maps (i, j) to {k: coefficient}; omitted pairs multiply to
        zero.  A sequence of (i, j, {k: coeff}) triples is also accepted.
        With check='enforce' the Leibniz identity is verified on every basis
        triple and IdentityViolation raised on the first failure; 'skip'
        trusts the caller.
        """
        if check not in ("enforce", "skip"):
            raise ValueError(f"unknown check mode: {check!r}")
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        table = [[[QZERO] * dim for _ in range(dim)] for _ in range(dim)]
        items = products.items() if isinstance(products, Mapping) else (
            ((i, j), c) for i, j, c in products
        )
        for (i, j), coeffs in items:
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise IndexOutOfRange(f"product index ({i},{j}) outside 1..{dim}")
            for k, v in coeffs.items():
                if not 1 <= k <= dim:
                    raise IndexOutOfRange(f"target index {k} outside 1..{dim}")
                table[i - 1][j - 1][k - 1] = table[i - 1][j - 1][k - 1] + as_rational(v)
        constants = tuple(tuple(tuple(row) for row in plane) for plane in table)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != dim:
                raise ValueError("label count differs from dimension")
        alg = LeibnizAlgebra(dim, constants, labels)
        if check == "enforce":
            alg.check_identity()
        return alg

    def check_identity(self) -> None:
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.product(self.basis_coords(i), self.constants[j][k])
                    rhs = tuple(
                        a - b
                        for a, b in zip(
                            self.product(self.constants[i][j], self.basis_coords(k)),
                            self.product(self.constants[i][k], self.basis_coords(j)),
                        )
                    )
                    if lhs != rhs:
                        raise IdentityViolation(i + 1, j + 1, k + 1, lhs, rhs)

    def basis_coords(self, i: int) -> Vector:
        """Coordinates of the 0-based i-th basis vector."""
        return tuple(Q(1) if k == i else QZERO for k in range(self.dim))

    # -- multiplication -----------------------------------------------

    def product(self, x: Sequence, y: Sequence) -> Vector:
        """[x, y] by bilinear extension of the structure constants."""
        n = self.dim
        out = [QZERO] * n
        for i, xi in enumerate(x):
            if not xi:
                continue
            plane = self.constants[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for k, v in enumerate(plane[j]):
                    if v:
                        out[k] += c * v
        return tuple(out)

    def right_mult(self, x: Sequence) -> RationalMatrix:
        """Matrix of y -> [y, x]; column j holds the coordinates of [e_j, x]."""
        n = self.dim
        cols = [self.product(self.basis_coords(j), x) for j in range(n)]
        return RationalMatrix(n, n, _freeze(zip(*cols)) if n else ())

    def left_mult(self, x: Sequence) -> RationalMatrix:
        """Matrix of y -> [x, y]; column j holds the coordinates of [x, e_j]."""
        n = self.dim
        cols = [self.product(x, self.basis_coords(j)) for j in range(n)]
        return RationalMatrix(n, n, _freeze(zip(*cols)) if n else ())

    def mult_matrix(self, x: Sequence, side: str) -> RationalMatrix:
        if side == "right":
            return self.right_mult(x)
        if side == "left":
            return self.left_mult(x)
        raise ValueError(f"unknown side: {side!r}")


# -- spans, series, annihilators --------------------------------------


def product_span(alg: LeibnizAlgebra, s1: Subspace, s2: Subspace) -> Subspace:
    """Span of [u, v] over basis vectors u of s1 and v of s2."""
    vectors = [
        alg.product(u, v)
        for u in s1.basis_vectors()
        for v in s2.basis_vectors()
    ]
    return Subspace.from_vectors(alg.dim, vectors)


@dataclass(frozen=True)
class SeriesReport:
    terms: tuple[Subspace, ...]
    nilindex: int | None
    nilpotent: bool
    null_filiform: bool
    filiform: bool

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(t.dim for t in self.terms)


def central_series(alg: LeibnizAlgebra) -> SeriesReport:
    """Lower central series L^1 = L, L^{k+1} = [L^k, L].

    Terms are listed until they stabilize; nilindex is the first s with
    L^s = 0, or None when the series stalls above zero.
    """
    full = Subspace.full(alg.dim)
    terms = [full]
    while True:
        nxt = product_span(alg, terms[-1], full)
        if nxt.dim == terms[-1].dim:
            # stabilized above zero (or both zero for the abelian case)
            if nxt.dim == 0:
                break
            terms.append(nxt)
            return SeriesReport(tuple(terms), None, False, False, False)
        terms.append(nxt)
        if nxt.dim == 0:
            break
    nilindex = len(terms)
    n = alg.dim
    dims = [t.dim for t in terms]
    null_filiform = all(
        (dims[i - 1] if i <= len(dims) else 0) == n + 1 - i for i in range(1, n + 2)
    )
    filiform = n >= 2 and all(
        (dims[i - 1] if i <= len(dims) else 0) == n - i for i in range(2, n + 1)
    )
    return SeriesReport(tuple(terms), nilindex, True, null_filiform, filiform)


@dataclass(frozen=True)
class Annihilators:
    ann_r: Subspace
    ann_l: Subspace
    center: Subspace


def annihilators(alg: LeibnizAlgebra) -> Annihilators:
    """Right annihilator {x : [L,x]=0}, left {x : [x,L]=0}, and their meet."""
    n = alg.dim
    right_rows = []
    left_rows = []
    for i in range(n):
        # [e_i, x] = left_mult(e_i) x and [x, e_i] = right_mult(e_i) x.
        right_rows.extend(alg.left_mult(alg.basis_coords(i)).entries)
        left_rows.extend(alg.right_mult(alg.basis_coords(i)).entries)
    from .exactlin import nullspace

    ann_r = nullspace(RationalMatrix(len(right_rows), n, _freeze(right_rows)))
    ann_l = nullspace(RationalMatrix(len(left_rows), n, _freeze(left_rows)))
    return Annihilators(ann_r, ann_l, subspace_intersect(ann_r, ann_l))


# -- quotients, sums, base change, grading -----------------------------


def _transition_inverse(columns: Sequence[Sequence[Q]], n: int) -> RationalMatrix:
    """Inverse of the matrix whose columns are the given n vectors."""
    rows = [[columns[j][i] for j in range(n)] for i in range(n)]
    aug = [rows[i] + [Q(1) if k == i else QZERO for k in range(n)] for i in range(n)]
    aug, pivots = _rref_rows(aug, 2 * n)
    if len(pivots) < n or any(p >= n for p in pivots):
        raise SingularMatrix("transition matrix is singular")
    return RationalMatrix(n, n, _freeze(row[n:] for row in aug))


def quotient(alg: LeibnizAlgebra, ideal: Subspace) -> tuple[LeibnizAlgebra, RationalMatrix]:
    """Quotient by a two-sided ideal, with the projection matrix.

    The quotient basis is the deterministic complement of the ideal inside L;
    the projection maps old coordinates to quotient coordinates.  Raises
    NotAnIdeal when [L,I] or [I,L] leaves I.
    """
    full = Subspace.full(alg.dim)
    if not ideal.contains_subspace(product_span(alg, full, ideal)):
        raise NotAnIdeal("[L, I] is not contained in I")
    if not ideal.contains_subspace(product_span(alg, ideal, full)):
        raise NotAnIdeal("[I, L] is not contained in I")
    comp = complement_in(ideal, full)
    m = comp.dim
    columns = list(ideal.basis_vectors()) + list(comp.basis_vectors())
    inv = _transition_inverse(columns, alg.dim)
    proj = RationalMatrix(m, alg.dim, inv.entries[ideal.dim :])
    products: dict[tuple[int, int], dict[int, Q]] = {}
    cb = comp.basis_vectors()
    for i in range(m):
        for j in range(m):
            w = proj.apply(alg.product(cb[i], cb[j]))
            coeffs = {k + 1: v for k, v in enumerate(w) if v}
            if coeffs:
                products[(i + 1, j + 1)] = coeffs
    return LeibnizAlgebra.build(m, products, check="enforce"), proj


def direct_sum(a: LeibnizAlgebra, b: LeibnizAlgebra) -> LeibnizAlgebra:
    """Block-diagonal sum; the factors do not interact."""
    n, m = a.dim, b.dim
    products: dict[tuple[int, int], dict[int, Q]] = {}
    for i in range(n):
        for j in range(n):
            coeffs = {k + 1: v for k, v in enumerate(a.constants[i][j]) if v}
            if coeffs:
                products[(i + 1, j + 1)] = coeffs
    for i in range(m):
        for j in range(m):
            coeffs = {n + k + 1: v for k, v in enumerate(b.constants[i][j]) if v}
            if coeffs:
                products[(n + i + 1, n + j + 1)] = coeffs
    labels = None
    if a.labels or b.labels:
        labels = tuple(
            (a.labels[i] if a.labels else f"e{i + 1}") for i in range(n)
        ) + tuple((b.labels[i] if b.labels else f"e{i + 1}") + "'" for i in range(m))
    return LeibnizAlgebra.build(n + m, products, check="skip", labels=labels)


def change_basis(alg: LeibnizAlgebra, p: RationalMatrix) -> LeibnizAlgebra:
    """Structure constants in the basis f_j = sum_i P[i][j] e_i.

    Raises SingularMatrix when P is not invertible.  The result is re-checked
    against the Leibniz identity (cheap insurance, the identity is basis
    independent).
    """
    n = alg.dim
    if (p.rows, p.cols) != (n, n):
        raise SingularMatrix("base change matrix has the wrong shape")
    cols = [p.col(j) for j in range(n)]
    inv = _transition_inverse(cols, n)
    products: dict[tuple[int, int], dict[int, Q]] = {}
    for i in range(n):
        for j in range(n):
            w = inv.apply(alg.product(cols[i], cols[j]))
            coeffs = {k + 1: v for k, v in enumerate(w) if v}
            if coeffs:
                products[(i + 1, j + 1)] = coeffs
    return LeibnizAlgebra.build(n, products, check="enforce")


def graded(alg: LeibnizAlgebra) -> LeibnizAlgebra:
    """Associated graded algebra of the lower central series filtration.

    Component i is a deterministic complement of L^{i+1} inside L^i; products
    are projected onto the component of the matching total degree.  Requires
    a nilpotent input.
    """
    series = central_series(alg)
    if not series.nilpotent:
        raise NotNilpotent("the lower central series does not reach zero")
    terms = list(series.terms)
    components = []
    degrees: list[int] = []
    for i in range(len(terms) - 1):
        comp = complement_in(terms[i + 1], terms[i])
        components.append(comp)
        degrees.extend([i + 1] * comp.dim)
    columns = [v for comp in components for v in comp.basis_vectors()]
    n = alg.dim
    if not columns:
        return LeibnizAlgebra.build(0, {}, check="skip")
    inv = _transition_inverse(columns, n)
    # block_of[d] = slice of new indices with degree d+1
    products: dict[tuple[int, int], dict[int, Q]] = {}
    for i in range(n):
        for j in range(n):
            w = inv.apply(alg.product(columns[i], columns[j]))
            target = degrees[i] + degrees[j]
            coeffs = {
                k + 1: v
                for k, v in enumerate(w)
                if v and degrees[k] == target
            }
            if coeffs:
                products[(i + 1, j + 1)] = coeffs
    return LeibnizAlgebra.build(n, products, check="enforce")


# -- JSON document form ------------------------------------------------


def to_json_dict(alg: LeibnizAlgebra) -> dict:
    """Sparse document form with 1-based indices and rationals as strings."""
    products = []
    for i in range(alg.dim):
        for j in range(alg.dim):
            coeffs = {
                str(k + 1): format_rational(v)
                for k, v in enumerate(alg.constants[i][j])
                if v
            }
            if coeffs:
                products.append({"i": i + 1, "j": j + 1, "c": coeffs})
    doc: dict = {"dim": alg.dim, "products": products}
    if alg.labels:
        doc["labels"] = list(alg.labels)
    return doc


def from_json_dict(doc: Mapping, check: str = "enforce") -> LeibnizAlgebra:
    """Inverse of to_json_dict; validates shape and index ranges strictly."""
    if not isinstance(doc, Mapping) or "dim" not in doc:
        raise ValueError("algebra document must be an object with a 'dim' field")
    unknown = set(doc) - {"dim", "labels", "products"}
    if unknown:
        raise ValueError(f"unknown fields in algebra document: {sorted(unknown)}")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise ValueError("'dim' must be a nonnegative integer")
    products: dict[tuple[int, int], dict[int, Q]] = {}
    for item in doc.get("products", []):
        if not isinstance(item, Mapping) or set(item) != {"i", "j", "c"}:
            raise ValueError(f"product entries need exactly the fields i, j, c: {item!r}")
        i, j = item["i"], item["j"]
        if not isinstance(i, int) or not isinstance(j, int):
            raise ValueError("product indices must be integers")
        try:
            coeffs = {int(k): as_rational(v) for k, v in item["c"].items()}
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad coefficient map in product ({i},{j}): {exc}") from exc
        key = (i, j)
        if key in products:
            raise ValueError(f"duplicate product entry for ({i},{j})")
        products[key] = coeffs
    labels = doc.get("labels")
    if labels is not None and (
        not isinstance(labels, Sequence)
        or isinstance(labels, str)
        or not all(isinstance(s, str) for s in labels)
    ):
        raise ValueError("'labels' must be a list of strings")
    return LeibnizAlgebra.build(dim, products, check=check, labels=labels)
