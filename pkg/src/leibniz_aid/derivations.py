"""Derivation towers of Leibniz algebras: Der, Inner, AID, RCAID, CAID.

A derivation d satisfies d([x,y]) = [d(x),y] + [x,d(y)].  Right
multiplications R_x(y) = [y,x] span the inner derivations.  An almost inner
derivation moves every element inside its own right ideal: D(x) in [x, L]
for all x.  Subspaces of endomorphisms live in the n^2-dimensional
coordinate space of matrices, vectorized row major; column j of a matrix is
the image of e_j.

Membership of a candidate D in AID is decided in three stages: a linear
upper bound from the per-basis-vector conditions, exact sampling refinement
over a deterministic grid plus seeded random points, and a symbolic
certificate pass that either proves D(x) in [x,L] for every rational x by
case-split elimination, or returns a concrete refuting x (verified by an
exact rank test), or gives up with an explicit inconclusive verdict.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Sequence

from ._poly import Poly
from .algebra import (
    Annihilators,
    LeibnizAlgebra,
    SeriesReport,
    _transition_inverse,
    annihilators,
    central_series,
    change_basis,
)
from .exactlin import (
    Q,
    QZERO,
    RationalMatrix,
    Subspace,
    _freeze,
    nullspace,
    restrict,
    solve_linear,
    subspace_intersect,
    subspace_sum,
    complement_in,
)

DEFAULT_SEED = 3141592653


class NotBracketClosed(ValueError):
    """The given endomorphism space is not closed under the commutator."""


class NotInCaid(ValueError):
    """No global x makes D - R_x land in the center."""


# ---------------------------------------------------------------------------
# vectorized endomorphisms


def endo_to_vec(m: RationalMatrix) -> tuple[Q, ...]:
    return tuple(v for row in m.entries for v in row)


def vec_to_endo(vec: Sequence[Q], n: int) -> RationalMatrix:
    return RationalMatrix(n, n, _freeze(vec[r * n : (r + 1) * n] for r in range(n)))


def matrix_unit(n: int, row: int, col: int) -> RationalMatrix:
    """The endomorphism sending e_col to e_row (1-based), all else to zero."""
    return RationalMatrix(
        n,
        n,
        _freeze(
            tuple(Q(1) if (r + 1 == row and c + 1 == col) else QZERO for c in range(n))
            for r in range(n)
        ),
    )


def endo_actions(alg: LeibnizAlgebra, m: RationalMatrix) -> list[str]:
    """Readable per-basis-vector description, e.g. 'e2 -> e4'."""
    from .algebra import _coords_str

    out = []
    for j in range(alg.dim):
        img = m.col(j)
        if any(img):
            out.append(f"{alg.label(j + 1)} -> {_coords_str(img)}")
    return out or ["0"]


# ---------------------------------------------------------------------------
# linear spaces of derivations


def derivation_space(alg: LeibnizAlgebra) -> Subspace:
    """Null space of the Leibniz-rule constraints in endomorphism space."""
    n = alg.dim
    c = alg.constants
    rows: list[list[Q]] = []
    seen: set[tuple[Q, ...]] = set()
    for i in range(n):
        for j in range(n):
            cij = c[i][j]
            for m in range(n):
                row = [QZERO] * (n * n)
                for k in range(n):
                    if cij[k]:
                        row[m * n + k] += cij[k]
                    if c[k][j][m]:
                        row[k * n + i] -= c[k][j][m]
                    if c[i][k][m]:
                        row[k * n + j] -= c[i][k][m]
                key = tuple(row)
                if any(row) and key not in seen:
                    seen.add(key)
                    rows.append(row)
    return nullspace(RationalMatrix(len(rows), n * n, _freeze(rows)))


def inner_space(alg: LeibnizAlgebra) -> Subspace:
    """Span of the right multiplications R_{e_j}."""
    n = alg.dim
    vectors = []
    for j in range(n):
        vectors.append(endo_to_vec(alg.right_mult(alg.basis_coords(j))))
    return Subspace.from_vectors(n * n, vectors)


def aid_basis_candidate(alg: LeibnizAlgebra, der: Subspace | None = None) -> Subspace:
    """Derivations whose column i lies in [e_i, L], for every i.

    This is only the basis-vector slice of the almost inner condition, hence
    an upper bound for AID that the sampling refinement then tightens.
    """
    n = alg.dim
    if der is None:
        der = derivation_space(alg)
    constraint_rows: list[list[Q]] = []
    for i in range(n):
        image = Subspace.from_vectors(n, [alg.constants[i][j] for j in range(n)])
        functionals = nullspace(image.basis)
        for f in functionals.basis_vectors():
            row = [QZERO] * (n * n)
            for m in range(n):
                if f[m]:
                    row[m * n + i] = f[m]
            constraint_rows.append(row)
    return restrict(der, constraint_rows)


# ---------------------------------------------------------------------------
# sampling refinement


@dataclass(frozen=True)
class AidConfig:
    seed: int = DEFAULT_SEED
    grid_radius: int | None = None
    random_bound: int = 10
    stall_limit: int = 25
    depth_limit: int | None = None
    max_rounds: int = 60
    node_budget: int = 4000


def refinement_grid(n: int, radius: int | None = None) -> Iterator[tuple[int, ...]]:
    """Deterministic sample points for the almost inner condition.

    Dimensions up to 5 get the full integer grid (radius 2 up to dimension 4,
    radius 1 at dimension 5); above that, all vectors supported on at most 3
    coordinates with entries in {-radius..radius}\\{0}.  Points that are
    scalar multiples of earlier ones impose the same constraint and are
    skipped.
    """
    if n == 0:
        return
    if n <= 5:
        r = radius if radius is not None else (2 if n <= 4 else 1)
        for point in itertools.product(range(-r, r + 1), repeat=n):
            if _primitive(point):
                yield point
    else:
        r = radius if radius is not None else 2
        values = [v for v in range(-r, r + 1) if v]
        for size in (1, 2, 3):
            for support in itertools.combinations(range(n), size):
                for vals in itertools.product(values, repeat=size):
                    point = [0] * n
                    for pos, v in zip(support, vals):
                        point[pos] = v
                    if _primitive(point):
                        yield tuple(point)


def _primitive(point: Sequence[int]) -> bool:
    g = 0
    first = 0
    for v in point:
        g = gcd(g, abs(v))
        if not first:
            first = v
    return g == 1 and first > 0


class _Echelon:
    """Incremental (non-reduced) row echelon basis for fast membership."""

    __slots__ = ("n", "rows", "pivots")

    def __init__(self, n: int):
        self.n = n
        self.rows: list[list[Q]] = []
        self.pivots: list[int] = []

    def residue(self, vec: Sequence[Q]) -> list[Q]:
        v = list(vec)
        for p, row in zip(self.pivots, self.rows):
            f = v[p]
            if f:
                for k in range(p, self.n):
                    if row[k]:
                        v[k] -= f * row[k]
        return v

    def insert(self, vec: Sequence[Q]) -> bool:
        v = self.residue(vec)
        for p, x in enumerate(v):
            if x:
                if x != 1:
                    v = [y / x for y in v]
                # keep rows sorted by pivot column
                pos = 0
                while pos < len(self.pivots) and self.pivots[pos] < p:
                    pos += 1
                self.rows.insert(pos, v)
                self.pivots.insert(pos, p)
                return True
        return False

    def contains(self, vec: Sequence[Q]) -> bool:
        return not any(self.residue(vec))


def _image_columns(alg: LeibnizAlgebra, x: Sequence[Q]) -> list[tuple[Q, ...]]:
    """Columns [x, e_j] of left multiplication by x."""
    n = alg.dim
    cols = []
    nz = [(i, xi) for i, xi in enumerate(x) if xi]
    for j in range(n):
        col = [QZERO] * n
        for i, xi in nz:
            row = alg.constants[i][j]
            for k in range(n):
                if row[k]:
                    col[k] += xi * row[k]
        cols.append(tuple(col))
    return cols


def _apply_matrix_vec(mat_vec: Sequence[Q], n: int, x: Sequence[Q]) -> list[Q]:
    """Vectorized endomorphism applied to x."""
    out = [QZERO] * n
    for k, xk in enumerate(x):
        if xk:
            for m in range(n):
                v = mat_vec[m * n + k]
                if v:
                    out[m] += xk * v
    return out


def _restrict_at_point(
    alg: LeibnizAlgebra, space: Subspace, x: Sequence[Q]
) -> tuple[Subspace, bool]:
    """Cut space down by the condition D(x) in [x, L]; reports whether it cut."""
    n = alg.dim
    ech = _Echelon(n)
    for col in _image_columns(alg, x):
        if any(col):
            ech.insert(col)
    basis = space.basis_vectors()
    images = [_apply_matrix_vec(b, n, x) for b in basis]
    if all(ech.contains(img) for img in images):
        return space, False
    image_space = Subspace.from_vectors(n, [tuple(r) for r in ech.rows])
    functionals = nullspace(image_space.basis)
    small = []
    for f in functionals.basis_vectors():
        small.append(
            [sum((fm * img[m] for m, fm in enumerate(f) if fm), QZERO) for img in images]
        )
    sol = nullspace(RationalMatrix(len(small), len(basis), _freeze(small)))
    vectors = []
    for y in sol.basis_vectors():
        vec = [QZERO] * (n * n)
        for coef, b in zip(y, basis):
            if coef:
                for k, v in enumerate(b):
                    if v:
                        vec[k] += coef * v
        vectors.append(vec)
    return Subspace.from_vectors(n * n, vectors), True


def aid_refine(
    alg: LeibnizAlgebra,
    space: Subspace,
    cfg: AidConfig = AidConfig(),
    floor: int | None = None,
) -> tuple[Subspace, int]:
    """Intersect a candidate space with sampled almost-inner conditions.

    Walks the deterministic grid, then seeded random points until
    cfg.stall_limit consecutive samples fail to shrink the space.  `floor`
    (normally dim Inner) allows an early exit: the result always contains
    the inner derivations, so reaching the floor means no sample can cut
    further.  Returns the refined space and the number of samples used.
    """
    n = alg.dim
    samples = 0
    if n == 0 or space.dim == 0:
        return space, samples
    for point in refinement_grid(n, cfg.grid_radius):
        if floor is not None and space.dim <= floor:
            break
        x = tuple(Q(v) for v in point)
        space, _ = _restrict_at_point(alg, space, x)
        samples += 1
    rng = random.Random(cfg.seed)
    stall = 0
    while stall < cfg.stall_limit and (floor is None or space.dim > floor):
        point = tuple(rng.randint(-cfg.random_bound, cfg.random_bound) for _ in range(n))
        if not any(point):
            continue
        x = tuple(Q(v) for v in point)
        space, cut = _restrict_at_point(alg, space, x)
        samples += 1
        stall = 0 if cut else stall + 1
    return space, samples


# ---------------------------------------------------------------------------
# symbolic certification


@dataclass(frozen=True)
class CertOutcome:
    kind: str  # 'proved' | 'refuted' | 'inconclusive'
    refuting_x: tuple[Q, ...] | None = None
    branch_log: tuple[str, ...] = ()


class _CertContext:
    __slots__ = ("alg", "dmat", "n", "budget", "log", "depth_limit")

    def __init__(self, alg, dmat, depth_limit, budget):
        self.alg = alg
        self.dmat = dmat
        self.n = alg.dim
        self.budget = budget
        self.depth_limit = depth_limit
        self.log: list[str] = []


def _strip_row(
    coeffs: list[Poly], rhs: Poly, nz_vars: set[int] = frozenset()
) -> tuple[list[Poly], Poly]:
    """Remove a safe common monomial and the rational content of a row.

    Dividing a whole row by a shared monomial is an equivalence only where
    the monomial cannot vanish, so only variables the current branch forces
    nonzero are divided out.  (Dividing by anything else can overconstrain a
    shared unknown on the vanishing locus: t2*w1 = 0 does not force w1 = 0 at
    t2 = 0.)  Rational content removal is always exact.
    """
    polys = [p for p in coeffs if not p.is_zero()]
    if not rhs.is_zero():
        polys.append(rhs)
    if not polys:
        return coeffs, rhs
    mono = polys[0].monomial_gcd()
    for p in polys[1:]:
        mono = tuple(min(a, b) for a, b in zip(mono, p.monomial_gcd()))
    mono = tuple(e if i in nz_vars else 0 for i, e in enumerate(mono))
    if any(mono):
        coeffs = [p.divide_monomial(mono) if not p.is_zero() else p for p in coeffs]
        rhs = rhs.divide_monomial(mono) if not rhs.is_zero() else rhs
    # divide by the first nonzero entry's content to keep coefficients small
    first = next((p for p in coeffs + [rhs] if not p.is_zero()), None)
    if first is not None:
        c = first.rational_content()
        if c != 1:
            coeffs = [p.scale(Q(1) / c) for p in coeffs]
            rhs = rhs.scale(Q(1) / c)
    return coeffs, rhs


def _verify_refutation(ctx: _CertContext, x: Sequence[Q]) -> bool:
    """Exact authority: rank([M_x | D x]) > rank(M_x)."""
    from .exactlin import rref

    n = ctx.n
    cols = _image_columns(ctx.alg, x)
    dx = ctx.dmat.apply(x)
    m_rows = [[cols[j][m] for j in range(n)] for m in range(n)]
    aug_rows = [row + [dx[m]] for m, row in enumerate(m_rows)]
    rank_m = rref(RationalMatrix(n, n, _freeze(m_rows))).rank
    rank_aug = rref(RationalMatrix(n, n + 1, _freeze(aug_rows))).rank
    return rank_aug > rank_m


def _search_refutation(
    ctx: _CertContext,
    residual: Poly,
    nonzero: list[Poly],
    subs: list[tuple[int, Poly]],
) -> tuple[Q, ...] | None:
    """Look for a small rational point where the branch residual is nonzero.

    Candidate points satisfy the branch conditions (recorded pivots nonzero)
    as a guide; each candidate is then verified with the exact rank test,
    which is the only thing that can declare a refutation.
    """
    n = ctx.n
    free = sorted(residual.variables())
    for _, repl in subs:
        free = sorted(set(free) | repl.variables())
    for p in nonzero:
        free = sorted(set(free) | p.variables())
    substituted = {k for k, _ in subs}
    free = [v for v in free if v not in substituted]
    if not free:
        free = [v for v in range(n) if v not in substituted][:1]
    checks = 0
    seen = 0
    prev = 0
    for radius in (1, 2, 3, 5, 7):
        for vals in itertools.product(range(-radius, radius + 1), repeat=len(free)):
            if vals and max(abs(v) for v in vals) <= prev:
                continue  # inner shells were already tried
            seen += 1
            if seen > 20000:
                return None
            point = [QZERO] * n
            for var, v in zip(free, vals):
                point[var] = Q(v)
            for var, repl in reversed(subs):
                point[var] = repl.evaluate(point)
            if residual.evaluate(point) == 0:
                continue
            if any(p.evaluate(point) == 0 for p in nonzero):
                continue
            checks += 1
            if _verify_refutation(ctx, point):
                return tuple(point)
            if checks > 50:
                return None
        prev = radius
    return None


def _linear_power(p: Poly) -> Poly | None:
    """A linear form l with p = c * l**k (k >= 2), or None.

    The zero set of such a pivot is the hyperplane l = 0, so a case split on
    l is exact even though the pivot itself is linear in no variable.  The
    coefficients of l are read off the leading terms and the factorization is
    then verified by exact multiplication, so a wrong guess returns None.
    """
    k = p.total_degree()
    if k < 2:
        return None
    variables = sorted(p.variables())
    if not variables:
        return None
    # every variable of c*l**k reaches the full degree k
    if any(p.degree_in(v) != k for v in variables):
        return None
    nvars = p.nvars
    v0 = variables[0]
    c = p.terms.get(tuple(k if i == v0 else 0 for i in range(nvars)))
    if not c:
        return None
    # normalize l to unit v0-coefficient; the t_v0^(k-1)*t_w coefficient of
    # c*l**k is then c*k*a_w, and the t_v0^(k-1) coefficient is c*k*a_0
    terms = {tuple(1 if i == v0 else 0 for i in range(nvars)): Q(1)}
    a0 = p.terms.get(tuple(k - 1 if i == v0 else 0 for i in range(nvars)), QZERO)
    if a0:
        terms[(0,) * nvars] = a0 / (c * k)
    for w in variables[1:]:
        mono = tuple(
            k - 1 if i == v0 else (1 if i == w else 0) for i in range(nvars)
        )
        aw = p.terms.get(mono, QZERO)
        if aw:
            terms[tuple(1 if i == w else 0 for i in range(nvars))] = aw / (c * k)
    ell = Poly(nvars, terms)
    power = ell
    for _ in range(k - 1):
        power = power * ell
    return ell if power.scale(c) == p else None


def _stack_entries(pivot: Poly) -> list[Poly]:
    """Branch conditions implied by pivot != 0, split as finely as possible.

    A nonzero monomial forces every variable in it to be nonzero, which later
    pivots can exploit one variable at a time.
    """
    if len(pivot.terms) == 1:
        (mono, _), = pivot.terms.items()
        entries = [Poly.var(pivot.nvars, i) for i, e in enumerate(mono) if e]
        if entries:
            return entries
    return [pivot]


def _nonzero_vars(nonzero: list[Poly]) -> set[int]:
    """Variables forced nonzero by some single-variable entry of the stack."""
    out: set[int] = set()
    for p in nonzero:
        if len(p.terms) == 1:
            (mono, _), = p.terms.items()
            support = [i for i, e in enumerate(mono) if e]
            if len(support) == 1:
                out.add(support[0])
    return out


def _pivot_choice(rows: list[tuple[list[Poly], Poly]]) -> tuple[int, int, Poly, int]:
    """Pick the next pivot entry; smaller score first.

    Score class 0: nonzero constants (no case split at all), 1: polynomials
    linear in some variable with a rational coefficient (both branches
    resolvable), 2: anything else.  Ties prefer sparse columns, then sparse
    rows, low degree, and finally position, which keeps runs deterministic.
    """
    ncols = len(rows[0][0])
    col_fill = [0] * ncols
    for coeffs, _ in rows:
        for c, p in enumerate(coeffs):
            if not p.is_zero():
                col_fill[c] += 1
    best = None
    for i, (coeffs, _) in enumerate(rows):
        row_fill = sum(1 for p in coeffs if not p.is_zero())
        for c, p in enumerate(coeffs):
            if p.is_zero():
                continue
            if p.is_constant():
                cls = 0
            elif p.linear_var_with_constant_coeff() is not None:
                cls = 1
            else:
                cls = 2
            score = (cls, col_fill[c], row_fill, p.total_degree(), len(p.terms), i, c)
            if best is None or score < best[0]:
                best = (score, i, c, p)
    _, i, c, p = best
    return i, c, p, best[0][0]


def _eliminate(
    rows: list[tuple[list[Poly], Poly]], pi: int, pc: int, pivot: Poly, constant: bool
) -> list[tuple[list[Poly], Poly]]:
    """Consume the pivot row; fraction-free updates keep entries polynomial."""
    pcoeffs, prhs = rows[pi]
    out = []
    for idx, (coeffs, rhs) in enumerate(rows):
        if idx == pi:
            continue
        f = coeffs[pc]
        if f.is_zero():
            out.append((coeffs, rhs))
            continue
        if constant:
            scale = f.scale(Q(1) / pivot.constant_value())
            newc = [a - scale * b for a, b in zip(coeffs, pcoeffs)]
            newr = rhs - scale * prhs
        else:
            newc = [pivot * a - f * b for a, b in zip(coeffs, pcoeffs)]
            newr = pivot * rhs - f * prhs
        newc[pc] = Poly.zero(pivot.nvars)
        out.append((newc, newr))
    return out


def _decide(
    ctx: _CertContext,
    rows: list[tuple[list[Poly], Poly]],
    depth: int,
    nonzero: list[Poly],
    subs: list[tuple[int, Poly]],
) -> CertOutcome:
    ctx.budget -= 1
    if ctx.budget <= 0:
        return CertOutcome("inconclusive", branch_log=tuple(ctx.log) + ("node budget exhausted",))
    # normalize and triage
    nz_vars = _nonzero_vars(nonzero)
    cleaned: list[tuple[list[Poly], Poly]] = []
    for coeffs, rhs in rows:
        coeffs, rhs = _strip_row(coeffs, rhs, nz_vars)
        if all(p.is_zero() for p in coeffs):
            if rhs.is_zero():
                continue
            x = _search_refutation(ctx, rhs, nonzero, subs)
            if x is not None:
                return CertOutcome("refuted", refuting_x=x, branch_log=tuple(ctx.log))
            return CertOutcome(
                "inconclusive",
                branch_log=tuple(ctx.log) + (f"unverified residual {rhs}",),
            )
        cleaned.append((coeffs, rhs))
    rows = cleaned
    if not rows or all(rhs.is_zero() for _, rhs in rows):
        return CertOutcome("proved", branch_log=tuple(ctx.log))
    pi, pc, pivot, cls = _pivot_choice(rows)
    if cls == 0:
        return _decide(ctx, _eliminate(rows, pi, pc, pivot, True), depth, nonzero, subs)
    if len(pivot.terms) == 1 and pivot.variables() <= nz_vars:
        # the pivot is a monomial in variables the branch already forces
        # nonzero, so it cannot vanish here: eliminate without a case split
        return _decide(ctx, _eliminate(rows, pi, pc, pivot, False), depth, nonzero, subs)
    if depth >= ctx.depth_limit:
        return CertOutcome(
            "inconclusive", branch_log=tuple(ctx.log) + (f"depth limit at pivot {pivot}",)
        )
    # the zero branch solves split_poly = 0 for one variable; a pivot that is
    # a power of a linear form splits on that form instead of itself
    split_poly = pivot
    split = pivot.linear_var_with_constant_coeff()
    if split is None:
        ell = _linear_power(pivot)
        if ell is not None:
            split_poly = ell
            split = ell.linear_var_with_constant_coeff()
    # branch split_poly != 0 (the same region as pivot != 0)
    mark = len(ctx.log)
    ctx.log.append(f"case {split_poly} != 0")
    out_nz = _decide(
        ctx,
        _eliminate(rows, pi, pc, pivot, False),
        depth + 1,
        nonzero + _stack_entries(split_poly),
        subs,
    )
    del ctx.log[mark:]
    if out_nz.kind == "refuted":
        return out_nz
    # branch split_poly == 0
    if split is None:
        note = f"cannot solve {pivot} = 0 (nonlinear in every variable)"
        if out_nz.kind == "proved":
            return CertOutcome("inconclusive", branch_log=tuple(ctx.log) + (note,))
        return CertOutcome("inconclusive", branch_log=out_nz.branch_log + (note,))
    k, coeff = split
    replacement = (split_poly - Poly.var(pivot.nvars, k, coeff)).scale(Q(-1) / coeff)
    ctx.log.append(f"case {split_poly} = 0, t{k + 1} := {replacement}")
    zero_rows = [
        ([p.subs_var(k, replacement) for p in coeffs], rhs.subs_var(k, replacement))
        for coeffs, rhs in rows
    ]
    out_zero = _decide(ctx, zero_rows, depth + 1, nonzero, subs + [(k, replacement)])
    del ctx.log[mark:]
    if out_zero.kind == "refuted":
        return out_zero
    if out_nz.kind == out_zero.kind == "proved":
        return CertOutcome("proved", branch_log=tuple(ctx.log))
    logs = tuple(ctx.log)
    for out in (out_nz, out_zero):
        if out.kind == "inconclusive":
            logs = logs + out.branch_log[-2:]
    return CertOutcome("inconclusive", branch_log=logs)


def _series_adapted_columns(alg: LeibnizAlgebra) -> list[tuple[Q, ...]] | None:
    """Basis columns adapted to the lower central series flag, or None.

    In such a basis the structure constants of a nilpotent algebra only push
    into strictly deeper series layers, which keeps elimination pivots sparse.
    Returns None when the algebra is not nilpotent or is already adapted.
    """
    sr = central_series(alg)
    if not sr.nilpotent:
        return None
    columns: list[tuple[Q, ...]] = []
    terms = sr.terms
    for k in range(len(terms) - 1):
        columns.extend(complement_in(terms[k + 1], terms[k]).basis_vectors())
    n = alg.dim
    identity = all(
        columns[j][i] == (1 if i == j else 0) for j in range(n) for i in range(n)
    )
    return None if identity else columns


def aid_certify(
    alg: LeibnizAlgebra,
    dmat: RationalMatrix,
    depth_limit: int | None = None,
    node_budget: int = 4000,
    _adapt: bool = True,
) -> CertOutcome:
    """Decide whether D(x) lies in [x, L] for every rational x.

    The witness equation left_mult(x) w = D x is eliminated symbolically in
    the coordinates t of x, splitting into pivot = 0 / pivot != 0 cases when
    a pivot polynomial can vanish.  A zero branch is entered by solving the
    pivot for one of its variables, which needs the pivot linear in that
    variable with a rational coefficient, or the pivot a rational multiple of
    a power of such a form; otherwise that branch (and with it the whole
    certificate) is inconclusive.  Refutations are concrete rational points,
    always re-verified with an exact rank comparison.
    """
    n = alg.dim
    if depth_limit is None:
        depth_limit = 2 * n
    if n == 0:
        return CertOutcome("proved")
    # Constant witness shortcut: D = R_w for a single w solving all layers.
    stacked_rows: list[list[Q]] = []
    stacked_rhs: list[Q] = []
    for i in range(n):
        for m in range(n):
            stacked_rows.append([alg.constants[i][j][m] for j in range(n)])
            stacked_rhs.append(dmat.entries[m][i])
    w = solve_linear(
        RationalMatrix(len(stacked_rows), n, _freeze(stacked_rows)), stacked_rhs
    )
    if w is not None:
        return CertOutcome("proved", branch_log=("inner: constant witness",))
    rows: list[tuple[list[Poly], Poly]] = []
    for m in range(n):
        coeffs = []
        for j in range(n):
            terms = {}
            for i in range(n):
                v = alg.constants[i][j][m]
                if v:
                    terms[tuple(1 if t == i else 0 for t in range(n))] = v
            coeffs.append(Poly(n, terms))
        rterms = {}
        for k in range(n):
            v = dmat.entries[m][k]
            if v:
                rterms[tuple(1 if t == k else 0 for t in range(n))] = v
        rhs = Poly(n, rterms)
        rows.append((coeffs, rhs))
    ctx = _CertContext(alg, dmat, depth_limit, node_budget)
    out = _decide(ctx, rows, 0, [], [])
    if out.kind != "inconclusive" or not _adapt:
        return out
    # Almost-innerness is invariant under base change, while elimination is
    # very sensitive to it; retry once in a series-adapted basis where the
    # constants of a nilpotent algebra are triangular by layer.
    columns = _series_adapted_columns(alg)
    if columns is None:
        return out
    p = RationalMatrix(n, n, _freeze([[col[i] for col in columns] for i in range(n)]))
    pinv = _transition_inverse(columns, n)
    adapted = change_basis(alg, p)
    dnew_rows = [
        [
            sum(
                (
                    pinv.entries[i][a] * dmat.entries[a][b] * p.entries[b][j]
                    for a in range(n)
                    for b in range(n)
                ),
                QZERO,
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    retry = aid_certify(
        adapted,
        RationalMatrix(n, n, _freeze(dnew_rows)),
        depth_limit,
        node_budget,
        _adapt=False,
    )
    if retry.kind == "proved":
        return CertOutcome(
            "proved", branch_log=("series-adapted basis",) + retry.branch_log
        )
    if retry.kind == "refuted":
        x = p.apply(retry.refuting_x)
        if _verify_refutation(ctx, x):
            return CertOutcome(
                "refuted",
                refuting_x=x,
                branch_log=("series-adapted basis",) + retry.branch_log,
            )
    return out


def aid_witness(
    alg: LeibnizAlgebra, dmat: RationalMatrix, x: Sequence
) -> tuple[Q, ...] | None:
    """A concrete a with [x, a] = D(x), or None when there is none."""
    from .exactlin import as_rational

    xs = tuple(as_rational(v) for v in x)
    n = alg.dim
    cols = _image_columns(alg, xs)
    m = RationalMatrix(n, n, _freeze([cols[j][i] for j in range(n)] for i in range(n)))
    return solve_linear(m, dmat.apply(xs))


# ---------------------------------------------------------------------------
# the AID space


@dataclass(frozen=True)
class AidResult:
    upper_bound: Subspace
    proved: Subspace
    status: str  # 'certified_exact' | 'probabilistic' | 'partial'
    samples_used: int
    seed: int
    witnesses: tuple[tuple[RationalMatrix, tuple[Q, ...]], ...]
    inconclusive: tuple[RationalMatrix, ...]
    proved_generators: tuple[tuple[RationalMatrix, CertOutcome], ...] = ()

    @property
    def dim(self) -> int:
        return self.upper_bound.dim


def aid_space(alg: LeibnizAlgebra, cfg: AidConfig = AidConfig()) -> AidResult:
    """Compute AID(L) with certificates.

    Pipeline: linear candidate from basis conditions, grid/random sampling
    refinement, then certification of a deterministic complement of Inner
    inside the refined space.  Refuted generators feed their refuting x back
    into the refinement and the loop restarts; the loop ends when every
    complement generator is proved (certified_exact) or some remain
    inconclusive (probabilistic), or the round cap is hit (partial).
    """
    n = alg.dim
    inner = inner_space(alg)
    der = derivation_space(alg)
    cand = aid_basis_candidate(alg, der)
    space, samples = aid_refine(alg, cand, cfg, floor=inner.dim)
    refutations: list[tuple[RationalMatrix, tuple[Q, ...]]] = []
    inconclusive: list[RationalMatrix] = []
    proved_gens: list[tuple[RationalMatrix, CertOutcome]] = []
    depth_limit = cfg.depth_limit if cfg.depth_limit is not None else 2 * n
    rounds = 0
    status = "certified_exact"
    while True:
        rounds += 1
        if rounds > cfg.max_rounds:
            status = "partial"
            break
        comp = complement_in(inner, space)
        inconclusive = []
        proved_gens = []
        shrunk = False
        for gen_vec in comp.basis_vectors():
            gmat = vec_to_endo(gen_vec, n)
            outcome = aid_certify(alg, gmat, depth_limit, cfg.node_budget)
            if outcome.kind == "proved":
                proved_gens.append((gmat, outcome))
            elif outcome.kind == "refuted":
                refutations.append((gmat, outcome.refuting_x))
                space, cut = _restrict_at_point(alg, space, outcome.refuting_x)
                samples += 1
                shrunk = True
                break
            else:
                inconclusive.append(gmat)
        if shrunk:
            continue
        break
    proved = subspace_sum(
        inner,
        Subspace.from_vectors(n * n, [endo_to_vec(g) for g, _ in proved_gens]),
    )
    if status != "partial":
        status = "certified_exact" if proved == space else "probabilistic"
    return AidResult(
        upper_bound=space,
        proved=proved,
        status=status,
        samples_used=samples,
        seed=cfg.seed,
        witnesses=tuple(refutations),
        inconclusive=tuple(inconclusive),
        proved_generators=tuple(proved_gens),
    )


# ---------------------------------------------------------------------------
# restricted and central almost inner derivations


def _hom_into(n: int, target: Subspace) -> Subspace:
    """Endomorphisms whose image lies inside the target subspace of Q^n."""
    vectors = []
    for t in target.basis_vectors():
        for col in range(n):
            vec = [QZERO] * (n * n)
            for k, v in enumerate(t):
                if v:
                    vec[k * n + col] = v
            vectors.append(vec)
    return Subspace.from_vectors(n * n, vectors)


def rcaid_caid(alg: LeibnizAlgebra, target: str, aid: Subspace) -> Subspace:
    """AID elements D with D - R_x mapping into the target for one global x.

    target is 'right_ann' or 'center'.  Linear description:
    aid ∩ (Inner + Hom(L, T)).
    """
    ann = annihilators(alg)
    if target == "right_ann":
        t = ann.ann_r
    elif target == "center":
        t = ann.center
    else:
        raise ValueError(f"unknown target: {target!r}")
    envelope = subspace_sum(inner_space(alg), _hom_into(alg.dim, t))
    return subspace_intersect(aid, envelope)


def restriction_witness(
    alg: LeibnizAlgebra, dmat: RationalMatrix, target: Subspace
) -> tuple[Q, ...] | None:
    """A global x with (D - R_x)(L) inside the target, if one exists."""
    n = alg.dim
    functionals = nullspace(target.basis)
    rows: list[list[Q]] = []
    rhs: list[Q] = []
    for j in range(n):
        dcol = dmat.col(j)
        for f in functionals.basis_vectors():
            # f . [e_j, x] = sum_i x_i f . c[j][i]
            rows.append(
                [
                    sum((fm * alg.constants[j][i][m] for m, fm in enumerate(f) if fm), QZERO)
                    for i in range(n)
                ]
            )
            rhs.append(sum((fm * dcol[m] for m, fm in enumerate(f) if fm), QZERO))
    return solve_linear(RationalMatrix(len(rows), n, _freeze(rows)), rhs)


def caid_restriction_witness(alg: LeibnizAlgebra, dmat: RationalMatrix) -> tuple[Q, ...]:
    """The global x for a central almost inner derivation; NotInCaid otherwise."""
    x = restriction_witness(alg, dmat, annihilators(alg).center)
    if x is None:
        raise NotInCaid("no global x maps D - R_x into the center")
    return x


# ---------------------------------------------------------------------------
# Lie structure on derivation spaces


def bracket(d1: RationalMatrix, d2: RationalMatrix) -> RationalMatrix:
    return (d1 @ d2) - (d2 @ d1)


def subalgebra_nilpotency(space: Subspace) -> tuple[tuple[int, ...], bool]:
    """Lower central series dims of a bracket-closed space of matrices.

    Raises NotBracketClosed when some commutator of basis elements leaves
    the space.  Returns the series dimensions and whether it reaches zero.
    """
    nsq = space.ambient_dim
    n = int(round(nsq**0.5))
    if n * n != nsq:
        raise ValueError("ambient dimension is not a square")
    mats = [vec_to_endo(v, n) for v in space.basis_vectors()]
    for a in mats:
        for b in mats:
            if not space.contains(endo_to_vec(bracket(a, b))):
                raise NotBracketClosed(
                    "commutator of basis elements leaves the space"
                )
    dims = [space.dim]
    current = space
    while True:
        cmats = [vec_to_endo(v, n) for v in current.basis_vectors()]
        vectors = [endo_to_vec(bracket(a, b)) for a in cmats for b in mats]
        nxt = Subspace.from_vectors(nsq, vectors)
        if nxt.dim == current.dim:
            return tuple(dims + [nxt.dim]), nxt.dim == 0
        dims.append(nxt.dim)
        current = nxt
        if nxt.dim == 0:
            return tuple(dims), True


# ---------------------------------------------------------------------------
# full analysis


@dataclass(frozen=True)
class Deviation:
    location: str
    expected: str
    computed: str
    certificate: dict


@dataclass(frozen=True)
class AnalysisReport:
    algebra_id: str
    dim: int
    labels: tuple[str, ...] | None
    series: SeriesReport
    annihilator_dims: dict
    tower: dict
    aid: AidResult
    rcaid: Subspace
    caid: Subspace
    complement_generators: tuple[dict, ...]
    deviations: tuple[Deviation, ...]
    notes: tuple[str, ...]


def analysis_report(
    alg: LeibnizAlgebra,
    cfg: AidConfig = AidConfig(),
    algebra_id: str = "file:algebra",
    expected=None,
) -> AnalysisReport:
    """Series, annihilators and the full derivation tower of one algebra.

    `expected` is an optional catalog record of published dimensions; any
    disagreement is reported as a deviation that carries a machine-checkable
    certificate.
    """
    from .catalog import build_deviations  # local import to avoid a cycle

    series = central_series(alg)
    ann = annihilators(alg)
    der = derivation_space(alg)
    inner = inner_space(alg)
    aid = aid_space(alg, cfg)
    notes = [
        "field: Q; sampling and certificates range over rational points only",
        "matrix convention: column j is the image of e_j; transposed "
        "presentations of the same generator are treated as the same object",
    ]
    if aid.status == "certified_exact":
        aid_sub = aid.upper_bound
    else:
        aid_sub = aid.proved
        notes.append(
            "aid not certified exact; rcaid/caid computed from the proved lower bound"
        )
    rcaid = rcaid_caid(alg, "right_ann", aid_sub)
    caid = rcaid_caid(alg, "center", aid_sub)
    tower = {
        "der": der.dim,
        "inner": inner.dim,
        "aid": aid.upper_bound.dim,
        "aid_proved": aid.proved.dim,
        "rcaid": rcaid.dim,
        "caid": caid.dim,
        "outer": der.dim - inner.dim,
    }
    comp_info = []
    for gmat, outcome in aid.proved_generators:
        comp_info.append(
            {
                "matrix": gmat,
                "actions": endo_actions(alg, gmat),
                "outcome": "proved",
                "branch_log": list(outcome.branch_log),
            }
        )
    for gmat in aid.inconclusive:
        comp_info.append(
            {
                "matrix": gmat,
                "actions": endo_actions(alg, gmat),
                "outcome": "inconclusive",
                "branch_log": [],
            }
        )
    for gmat, x in aid.witnesses:
        comp_info.append(
            {
                "matrix": gmat,
                "actions": endo_actions(alg, gmat),
                "outcome": "refuted",
                "refuting_x": list(x),
            }
        )
    deviations = ()
    if expected is not None:
        deviations = tuple(
            build_deviations(alg, expected, tower, aid, inner, algebra_id)
        )
    return AnalysisReport(
        algebra_id=algebra_id,
        dim=alg.dim,
        labels=alg.labels,
        series=series,
        annihilator_dims={
            "right": ann.ann_r.dim,
            "left": ann.ann_l.dim,
            "center": ann.center.dim,
        },
        tower=tower,
        aid=aid,
        rcaid=rcaid,
        caid=caid,
        complement_generators=tuple(comp_info),
        deviations=deviations,
        notes=tuple(notes),
    )
