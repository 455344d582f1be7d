"""Named Leibniz algebra families and instances, with published dimensions.

Reference grammar: ``catalog:<FAMILY>:<n>[:<p1>,<p2>,...]`` where FAMILY is
one of NF, F1, F2, F3, D3, D4, G53.  For the dimension families the second
component is the dimension (``catalog:NF:5``, ``catalog:F1:4:1,0``); for the
fixed-dimension example lists it is the entry label (``catalog:D4:L9``,
``catalog:D3:L1:1/2``); G53 stands alone.  Parameters are rationals in p/q
form.

Seven of the four-dimensional entries and the five-dimensional Lie example
carry expected dimension data (Inner/RCAID/AID/Der and a claimed complement
generator).  `build_deviations` compares a computed analysis against that
data and attaches a machine-checkable certificate to every disagreement:
either a concrete refuting x for a claimed generator, an explicit inner
combination showing the generator adds nothing, or per-member global-x
witnesses for a larger-than-expected restricted space.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import IdentityViolation, LeibnizAlgebra, annihilators
from .derivations import (
    aid_certify,
    endo_actions,
    endo_to_vec,
    matrix_unit,
    restriction_witness,
    vec_to_endo,
)
from .exactlin import (
    Q,
    QZERO,
    RationalMatrix,
    _freeze,
    as_rational,
    format_rational,
    solve_linear,
)

FAMILIES = ("NF", "F1", "F2", "F3", "D3", "D4", "G53")

D3_ENTRIES = ("L1", "L2", "L3", "L4", "L5", "L6")
D4_ENTRIES = ("L4", "L9", "L10", "L11", "L12", "L13", "L20")


class UnknownCatalogRef(ValueError):
    """The reference string does not name a catalog entry."""


class ArityMismatch(ValueError):
    """Wrong number of parameters for the family."""


class ParameterInvalid(ValueError):
    """Parameters violate the algebra's defining identity or a domain rule."""

    def __init__(self, message: str, triple: tuple[int, int, int] | None = None):
        super().__init__(message)
        self.triple = triple


@dataclass(frozen=True)
class CatalogRef:
    family: str
    n: int
    entry: str | None = None
    params: tuple[Q, ...] = ()

    def ref_string(self) -> str:
        parts = ["catalog", self.family]
        if self.entry is not None:
            parts.append(self.entry)
        elif self.family != "G53":
            parts.append(str(self.n))
        if self.params:
            parts.append(",".join(format_rational(p) for p in self.params))
        return ":".join(parts)


@dataclass(frozen=True)
class ExpectedData:
    inner: int | None = None
    rcaid: int | None = None
    aid: int | None = None
    der: int | None = None
    generator: RationalMatrix | None = None
    generator_label: str | None = None


@dataclass(frozen=True)
class CatalogEntry:
    entry_id: str
    dim: int | None
    arity: str
    source: str
    expected: ExpectedData | None = None
    note: str | None = None


def parse_ref(text: str) -> CatalogRef:
    parts = text.split(":")
    if not parts or parts[0] != "catalog" or len(parts) < 2:
        raise UnknownCatalogRef(f"not a catalog reference: {text!r}")
    family = parts[1]
    if family not in FAMILIES:
        raise UnknownCatalogRef(f"unknown family {family!r} in {text!r}")
    if family == "G53":
        if len(parts) != 2:
            raise UnknownCatalogRef(f"G53 takes no further components: {text!r}")
        return CatalogRef("G53", 5)
    if len(parts) < 3:
        raise UnknownCatalogRef(f"missing component after family: {text!r}")
    if len(parts) > 4:
        raise UnknownCatalogRef(f"too many components: {text!r}")
    params: tuple[Q, ...] = ()
    if len(parts) == 4:
        try:
            params = tuple(as_rational(p.strip()) for p in parts[3].split(","))
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise UnknownCatalogRef(f"bad parameter list in {text!r}: {exc}") from exc
    if family in ("D3", "D4"):
        entry = parts[2]
        allowed = D3_ENTRIES if family == "D3" else D4_ENTRIES
        if entry not in allowed:
            raise UnknownCatalogRef(f"unknown {family} entry {entry!r}")
        return CatalogRef(family, 3 if family == "D3" else 4, entry, params)
    try:
        n = int(parts[2])
    except ValueError as exc:
        raise UnknownCatalogRef(f"bad dimension in {text!r}") from exc
    return CatalogRef(family, n, None, params)


# ---------------------------------------------------------------------------
# family builders


def _build(dim: int, products, labels=None) -> LeibnizAlgebra:
    try:
        return LeibnizAlgebra.build(dim, products, check="enforce", labels=labels)
    except IdentityViolation as exc:
        raise ParameterInvalid(str(exc), triple=(exc.i, exc.j, exc.k)) from exc


def _nf(n: int) -> LeibnizAlgebra:
    if n < 1:
        raise ParameterInvalid("NF needs dimension >= 1")
    products = {(i, 1): {i + 1: 1} for i in range(1, n)}
    return _build(n, products)


def _f1(n: int, params: tuple[Q, ...]) -> LeibnizAlgebra:
    if n < 3:
        raise ParameterInvalid("F1 needs dimension >= 3")
    if len(params) != n - 2:
        raise ArityMismatch(f"F1 in dimension {n} expects {n - 2} parameters "
                            f"(a4..a{n}, theta), got {len(params)}")
    alphas = {s: params[s - 4] for s in range(4, n + 1)}
    theta = params[-1]
    products: dict[tuple[int, int], dict[int, Q]] = {(1, 1): {3: Q(1)}}
    for i in range(2, n):
        products[(i, 1)] = {i + 1: Q(1)}
    col = {s: alphas[s] for s in range(4, n) if alphas[s]}
    if theta:
        col[n] = col.get(n, QZERO) + theta
    if col:
        products[(1, 2)] = col
    for j in range(2, n - 1):
        col = {}
        for s in range(4, n - j + 3):
            if alphas[s]:
                col[s + j - 2] = alphas[s]
        if col:
            products[(j, 2)] = col
    return _build(n, products)


def _f2(n: int, params: tuple[Q, ...]) -> LeibnizAlgebra:
    if n < 3:
        raise ParameterInvalid("F2 needs dimension >= 3")
    if len(params) != n - 2:
        raise ArityMismatch(f"F2 in dimension {n} expects {n - 2} parameters "
                            f"(b4..b{n}, gamma), got {len(params)}")
    betas = {k: params[k - 4] for k in range(4, n + 1)}
    gamma = params[-1]
    products: dict[tuple[int, int], dict[int, Q]] = {(1, 1): {3: Q(1)}}
    for i in range(3, n):
        products[(i, 1)] = {i + 1: Q(1)}
    col = {k: betas[k] for k in range(4, n + 1) if betas[k]}
    if col:
        products[(1, 2)] = col
    if gamma:
        products[(2, 2)] = {n: gamma}
    for i in range(3, n - 1):
        col = {}
        for k in range(4, n + 3 - i):
            if betas[k]:
                col[k + i - 2] = betas[k]
        if col:
            products[(i, 2)] = col
    return _build(n, products)


def _f3(n: int, params: tuple[Q, ...]) -> LeibnizAlgebra:
    if n < 4:
        raise ParameterInvalid("F3 needs dimension >= 4")
    if len(params) == 3:
        params = params + (QZERO,) * (n - 4)
    if len(params) != n - 1:
        raise ArityMismatch(f"F3 in dimension {n} expects 3 or {n - 1} parameters "
                            f"(theta1..theta3, b5..b{n}), got {len(params)}")
    t1, t2, t3 = params[0], params[1], params[2]
    betas = {k: params[k - 2] for k in range(5, n + 1)}
    products: dict[tuple[int, int], dict[int, Q]] = {}
    if t1:
        products[(1, 1)] = {n: t1}
    products[(1, 2)] = {3: Q(-1)}
    if t2:
        products[(1, 2)][n] = products[(1, 2)].get(n, QZERO) + t2
    if t3:
        products[(2, 2)] = {n: t3}
    for i in range(2, n):
        products[(i, 1)] = {i + 1: Q(1)}
    for i in range(3, n):
        products[(1, i)] = {i + 1: Q(-1)}
    for i in range(3, n - 1):
        col = {}
        for k in range(5, n - i + 4):
            if betas[k]:
                col[k + i - 3] = betas[k]
        if col:
            products[(i, 2)] = col
            products[(2, i)] = {m: -v for m, v in col.items()}
    return _build(n, products)


def _d3(entry: str, params: tuple[Q, ...]) -> LeibnizAlgebra:
    if entry == "L1":
        if len(params) != 1:
            raise ArityMismatch("D3 L1 expects one parameter (alpha)")
        alpha = params[0]
        products = {(2, 2): {1: Q(1)}, (2, 3): {1: Q(1)}}
        if alpha:
            products[(3, 3)] = {1: alpha}
        return _build(3, products)
    if params:
        raise ArityMismatch(f"D3 {entry} takes no parameters")
    tables = {
        "L2": {(2, 2): {1: 1}, (3, 2): {1: 1}, (2, 3): {1: 1}},
        "L3": {(2, 2): {1: 1}, (3, 3): {1: 1}, (3, 2): {1: 1}, (2, 3): {1: 1}},
        "L4": {(3, 3): {1: 1}},
        "L5": {(2, 3): {1: 1}, (3, 3): {1: 1}},
        "L6": {(3, 3): {1: 1}, (1, 3): {2: 1}},
    }
    return _build(3, tables[entry])


def _d4(entry: str, params: tuple[Q, ...]) -> LeibnizAlgebra:
    def one_param(name: str) -> Q:
        if len(params) != 1:
            raise ArityMismatch(f"D4 {name} expects one parameter (alpha)")
        return params[0]

    if entry == "L4":
        alpha = one_param("L4")
        products = {(1, 1): {3: 1}, (2, 1): {3: 1}, (2, 2): {4: 1}, (3, 1): {4: 1}}
        if alpha:
            products[(1, 2)] = {4: alpha}
        return _build(4, products)
    if entry == "L13":
        alpha = one_param("L13")
        products = {(1, 1): {3: 1}, (1, 2): {4: 1}, (2, 2): {4: -1}}
        if alpha:
            products[(2, 1)] = {3: -alpha}
        return _build(4, products)
    if entry == "L20":
        alpha = one_param("L20")
        if alpha == 1:
            raise ParameterInvalid("L20 is undefined at alpha = 1 "
                                   "(coefficient (1+alpha)/(1-alpha) has a pole)")
        coeff = (1 + alpha) / (1 - alpha)
        products = {(1, 2): {4: 1}, (2, 2): {3: 1}}
        if coeff:
            products[(2, 1)] = {4: coeff}
        return _build(4, products)
    if params:
        raise ArityMismatch(f"D4 {entry} takes no parameters")
    tables = {
        "L9": {
            (1, 1): {4: 1}, (2, 1): {3: 1}, (2, 2): {4: 1},
            (1, 2): {3: -1, 4: 2}, (3, 1): {4: 1}, (1, 3): {4: -1},
        },
        "L10": {
            (1, 1): {4: 1}, (2, 1): {3: 1}, (2, 2): {4: 1},
            (3, 1): {4: 1}, (1, 2): {3: -1}, (1, 3): {4: -1},
        },
        "L11": {(1, 1): {4: 1}, (1, 2): {3: 1}, (2, 1): {3: -1}, (2, 2): {3: -2, 4: 1}},
        "L12": {(1, 1): {3: 1}, (2, 1): {4: 1}, (2, 2): {3: -1}},
    }
    return _build(4, tables[entry])


def _g53() -> LeibnizAlgebra:
    pairs = [((1, 2), 4), ((1, 4), 5), ((2, 3), 5)]
    products: dict[tuple[int, int], dict[int, int]] = {}
    for (i, j), k in pairs:
        products[(i, j)] = {k: 1}
        products[(j, i)] = {k: -1}
    return _build(5, products)


def make(ref: CatalogRef | str) -> LeibnizAlgebra:
    if isinstance(ref, str):
        ref = parse_ref(ref)
    if ref.family == "NF":
        if ref.params:
            raise ArityMismatch("NF takes no parameters")
        return _nf(ref.n)
    if ref.family == "F1":
        return _f1(ref.n, ref.params)
    if ref.family == "F2":
        return _f2(ref.n, ref.params)
    if ref.family == "F3":
        return _f3(ref.n, ref.params)
    if ref.family == "D3":
        return _d3(ref.entry, ref.params)
    if ref.family == "D4":
        return _d4(ref.entry, ref.params)
    if ref.family == "G53":
        if ref.params:
            raise ArityMismatch("G53 takes no parameters")
        return _g53()
    raise UnknownCatalogRef(f"unknown family {ref.family!r}")


# ---------------------------------------------------------------------------
# expected dimension data


def _e(n: int, row: int, col: int) -> RationalMatrix:
    return matrix_unit(n, row, col)


_D4_EXPECTED = {
    "L4": ExpectedData(2, 2, 3, 4, _e(4, 4, 2), "E(4,2)"),
    "L9": ExpectedData(3, 3, 4, 4, _e(4, 4, 2), "E(4,2)"),
    "L10": ExpectedData(3, 3, 4, 4, _e(4, 4, 2), "E(4,2)"),
    "L11": ExpectedData(2, 2, 3, 5, _e(4, 4, 2), "E(4,2)"),
    "L12": ExpectedData(2, 2, 3, 5, _e(4, 4, 2), "E(4,2)"),
    "L13": ExpectedData(2, 2, 4, 5,
                        _e(4, 4, 2) + _e(4, 3, 2), "E(4,2)+E(3,2)"),
    "L20": ExpectedData(2, 2, 3, 7, _e(4, 4, 2), "E(4,2)"),
}

_G53_EXPECTED = ExpectedData(inner=4, rcaid=None, aid=5, der=10)


def expected_for(ref: CatalogRef) -> ExpectedData | None:
    if ref.family == "D4":
        return _D4_EXPECTED.get(ref.entry)
    if ref.family == "G53":
        return _G53_EXPECTED
    return None


def list_entries() -> tuple[CatalogEntry, ...]:
    rows = [
        CatalogEntry("NF:n", None, "none", "null-filiform family, any dimension"),
        CatalogEntry("F1:n", None, "a4..an, theta",
                     "filiform non-Lie family, first class"),
        CatalogEntry("F2:n", None, "b4..bn, gamma",
                     "filiform non-Lie family, second class"),
        CatalogEntry("F3:n", None, "theta1..theta3 [, b5..bn]",
                     "filiform family containing a filiform Lie algebra"),
    ]
    for entry in D3_ENTRIES:
        arity = "alpha" if entry == "L1" else "none"
        rows.append(CatalogEntry(f"D3:{entry}", 3, arity,
                                 "three-dimensional nilpotent examples"))
    for entry in D4_ENTRIES:
        arity = "alpha" if entry in ("L4", "L13", "L20") else "none"
        note = "alpha != 1" if entry == "L20" else None
        rows.append(CatalogEntry(
            f"D4:{entry}", 4, arity,
            "four-dimensional nilpotent classification (seven of 28 entries)",
            expected=_D4_EXPECTED[entry], note=note,
        ))
    rows.append(CatalogEntry("G53", 5, "none",
                             "five-dimensional nilpotent Lie example",
                             expected=_G53_EXPECTED))
    return tuple(rows)


# ---------------------------------------------------------------------------
# deviations with certificates


def matrix_json(m: RationalMatrix) -> list[list[str]]:
    return [[format_rational(v) for v in row] for row in m.entries]


def vec_json(v) -> list[str]:
    return [format_rational(x) for x in v]


def inner_combination(alg: LeibnizAlgebra, m: RationalMatrix):
    """Coefficients a with R_a = m, or None when m is not inner."""
    n = alg.dim
    cols = [endo_to_vec(alg.right_mult(alg.basis_coords(j))) for j in range(n)]
    rows = _freeze([cols[j][k] for j in range(n)] for k in range(n * n))
    return solve_linear(RationalMatrix(n * n, n, rows), endo_to_vec(m))


def _generator_certificate(alg: LeibnizAlgebra, gen: RationalMatrix, label: str,
                           inner) -> tuple[str, dict]:
    """Classify a claimed complement generator; returns (verdict, certificate).

    Verdicts: 'not_aid' (refuting x found), 'inner' (explicit combination,
    so the generator cannot extend Inner), 'ok' (in AID, outside Inner).
    """
    outcome = aid_certify(alg, gen)
    if outcome.kind == "refuted":
        return "not_aid", {
            "kind": "refuting_x",
            "generator": matrix_json(gen),
            "generator_label": label,
            "x": vec_json(outcome.refuting_x),
            "expects_witness": False,
        }
    if inner.contains(endo_to_vec(gen)):
        combo = inner_combination(alg, gen)
        x = alg.basis_coords(1 if alg.dim > 1 else 0)
        return "inner", {
            "kind": "inner_witness",
            "generator": matrix_json(gen),
            "generator_label": label,
            "combination": vec_json(combo),
            "x": vec_json(x),
            "expects_witness": True,
        }
    return "ok", {
        "kind": "aid_member",
        "generator": matrix_json(gen),
        "generator_label": label,
        "x": vec_json(alg.basis_coords(1 if alg.dim > 1 else 0)),
        "expects_witness": True,
    }


def build_deviations(alg, expected: ExpectedData, tower: dict, aid, inner,
                     algebra_id: str) -> list:
    """Compare computed dimensions against the recorded expected values."""
    from .derivations import Deviation, derivation_space

    out: list = []
    loc = algebra_id
    if expected.der is not None and tower["der"] != expected.der:
        basis = [matrix_json(vec_to_endo(v, alg.dim))
                 for v in derivation_space(alg).basis_vectors()]
        out.append(Deviation(f"{loc}:der", str(expected.der), str(tower["der"]),
                             {"kind": "derivation_basis", "basis": basis}))
    if expected.inner is not None and tower["inner"] != expected.inner:
        basis = [matrix_json(alg.right_mult(alg.basis_coords(j)))
                 for j in range(alg.dim)]
        out.append(Deviation(f"{loc}:inner", str(expected.inner),
                             str(tower["inner"]),
                             {"kind": "inner_basis", "basis": basis}))
    gen_verdict = None
    gen_cert = None
    if expected.generator is not None:
        gen_verdict, gen_cert = _generator_certificate(
            alg, expected.generator, expected.generator_label, inner)
    if expected.aid is not None and tower["aid"] != expected.aid:
        if gen_cert is not None and gen_verdict != "ok":
            cert = gen_cert
        else:
            cert = {
                "kind": "aid_basis",
                "basis": [matrix_json(vec_to_endo(v, alg.dim))
                          for v in aid.upper_bound.basis_vectors()],
                "status": aid.status,
            }
        out.append(Deviation(f"{loc}:aid", str(expected.aid), str(tower["aid"]),
                             cert))
    elif gen_verdict == "not_aid":
        out.append(Deviation(
            f"{loc}:generator",
            f"{expected.generator_label} spans AID over Inner",
            "not an almost inner derivation", gen_cert))
    elif gen_verdict == "inner":
        out.append(Deviation(
            f"{loc}:generator",
            f"{expected.generator_label} spans AID over Inner",
            "already an inner derivation", gen_cert))
    if expected.rcaid is not None and tower["rcaid"] != expected.rcaid:
        members = []
        ann = annihilators(alg)
        from .derivations import rcaid_caid

        space = rcaid_caid(alg, "right_ann",
                           aid.upper_bound if aid.status == "certified_exact"
                           else aid.proved)
        for v in space.basis_vectors():
            m = vec_to_endo(v, alg.dim)
            gx = restriction_witness(alg, m, ann.ann_r)
            members.append({
                "matrix": matrix_json(m),
                "actions": endo_actions(alg, m),
                "global_x": vec_json(gx) if gx is not None else None,
            })
        out.append(Deviation(
            f"{loc}:rcaid", str(expected.rcaid), str(tower["rcaid"]),
            {"kind": "restricted_members", "target": "right_ann",
             "members": members,
             "generator": members[-1]["matrix"] if members else None,
             "x": members[-1]["global_x"] if members else None,
             "expects_witness": True}))
    return out
