"""Command line front end.

Commands:

* ``catalog`` — list the built-in families and named instances.
* ``analyze <file|catalog-ref>`` — full report for one algebra (text or JSON).
* ``verify-paper`` — run the whole battery of published claims against the
  expected values recorded in the catalog; disagreements are reported as
  deviations with machine-checkable certificates.
* ``witness <ref> <endo.json> <x1> ... <xn>`` — replay a certificate: find
  (or fail to find) an element a with D(x) = [x, a].
* ``fuzz <ref> --basis-changes N --seed S`` — random basis changes, checking
  that every tower dimension is invariant.

Exit codes: 0 success, 1 claim mismatch without certificate coverage (or a
fuzz failure), 2 malformed input.  Reports go to stdout, progress to stderr.
JSON output is deterministic byte for byte for a fixed command line.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import algebra as alg_mod
from . import catalog as cat_mod
from . import derivations as der_mod
from .exactlin import Q, RationalMatrix, Subspace, as_rational, format_rational
from .derivations import AidConfig, AnalysisReport, Deviation

SCHEMA = "aid-report/1"


class InputError(Exception):
    """Anything wrong with user-supplied input; mapped to exit code 2."""


# ---------------------------------------------------------------------------
# loading


def _load_algebra(source: str):
    """Returns (algebra, algebra_id, expected-or-None)."""
    if source.startswith("catalog:"):
        try:
            ref = cat_mod.parse_ref(source)
            algebra = cat_mod.make(ref)
        except (cat_mod.UnknownCatalogRef, cat_mod.ArityMismatch) as exc:
            raise InputError(str(exc)) from exc
        except cat_mod.ParameterInvalid as exc:
            msg = str(exc)
            if exc.triple is not None:
                msg = f"violation {exc.triple}: {msg}"
            raise InputError(msg) from exc
        return algebra, ref.ref_string(), cat_mod.expected_for(ref)
    try:
        if source == "-":
            doc = json.load(sys.stdin)
        else:
            with open(source, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{source} is not valid JSON: {exc}") from exc
    try:
        algebra = alg_mod.from_json_dict(doc)
    except alg_mod.IdentityViolation as exc:
        raise InputError(
            f"violation ({exc.i},{exc.j},{exc.k}): {exc}"
        ) from exc
    except (ValueError, TypeError, alg_mod.IndexOutOfRange) as exc:
        raise InputError(f"{source}: {exc}") from exc
    name = "stdin" if source == "-" else source.rsplit("/", 1)[-1]
    return algebra, f"file:{name}", None


def _load_endo(path: str, n: int) -> RationalMatrix:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if isinstance(doc, dict):
        doc = doc.get("matrix")
    if not isinstance(doc, list) or len(doc) != n:
        raise InputError(f"{path}: expected an {n}x{n} matrix")
    rows = []
    for row in doc:
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"{path}: expected an {n}x{n} matrix")
        try:
            rows.append([as_rational(v) for v in row])
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"{path}: bad entry: {exc}") from exc
    return RationalMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# serialization


def _series_json(sr):
    return {
        "dims": list(sr.dims),
        "nilindex": sr.nilindex,
        "nilpotent": sr.nilpotent,
        "null_filiform": sr.null_filiform,
        "filiform": sr.filiform,
    }


def _deviation_json(d: Deviation) -> dict:
    return {
        "location": d.location,
        "expected": d.expected,
        "computed": d.computed,
        "certificate": d.certificate,
    }


def report_json(report: AnalysisReport) -> dict:
    gens = []
    for info in report.complement_generators:
        entry = {
            "matrix": cat_mod.matrix_json(info["matrix"]),
            "actions": info["actions"],
            "outcome": info["outcome"],
        }
        if "refuting_x" in info:
            entry["refuting_x"] = cat_mod.vec_json(info["refuting_x"])
        if info.get("branch_log"):
            entry["branch_log"] = info["branch_log"]
        gens.append(entry)
    witnesses = [
        {"generator": cat_mod.matrix_json(g), "x": cat_mod.vec_json(x)}
        for g, x in report.aid.witnesses
    ]
    return {
        "schema": SCHEMA,
        "algebra": report.algebra_id,
        "dim": report.dim,
        "field": "Q",
        "labels": list(report.labels) if report.labels else None,
        "series": _series_json(report.series),
        "annihilators": dict(report.annihilator_dims),
        "tower": dict(report.tower),
        "aid": {
            "status": report.aid.status,
            "seed": report.aid.seed,
            "samples_used": report.aid.samples_used,
            "upper_dim": report.aid.upper_bound.dim,
            "proved_dim": report.aid.proved.dim,
        },
        "complement_generators": gens,
        "witnesses": witnesses,
        "deviations": [_deviation_json(d) for d in report.deviations],
        "notes": list(report.notes),
    }


def report_text(report: AnalysisReport) -> str:
    lines = []
    t = report.tower
    sr = report.series
    lines.append(f"algebra: {report.algebra_id}")
    lines.append(f"dim: {report.dim} over Q")
    nil = f"nilindex {sr.nilindex}" if sr.nilpotent else "not nilpotent"
    flags = []
    if sr.null_filiform:
        flags.append("null-filiform")
    elif sr.filiform:
        flags.append("filiform")
    flag_txt = f" ({', '.join(flags)})" if flags else ""
    dims = " ".join(str(d) for d in sr.dims)
    lines.append(f"series dims: {dims}  [{nil}]{flag_txt}")
    a = report.annihilator_dims
    lines.append(
        f"annihilators: right {a['right']}, left {a['left']}, center {a['center']}"
    )
    lines.append(
        f"tower: Der {t['der']}, Inner {t['inner']}, AID {t['aid']} "
        f"({report.aid.status}), RCAID {t['rcaid']}, CAID {t['caid']}, "
        f"outer {t['outer']}"
    )
    lines.append(
        f"aid sampling: seed {report.aid.seed}, samples {report.aid.samples_used}"
    )
    if report.complement_generators:
        lines.append("complement generators over Inner:")
        for info in report.complement_generators:
            actions = "; ".join(info["actions"])
            extra = ""
            if "refuting_x" in info:
                coords = ",".join(format_rational(v) for v in info["refuting_x"])
                extra = f" at x=({coords})"
            lines.append(f"  - {info['outcome']}{extra}: {actions}")
    else:
        lines.append("complement generators over Inner: none (AID = Inner)")
    if report.deviations:
        lines.append("deviations from expected values:")
        for d in report.deviations:
            lines.append(
                f"  - {d.location}: expected {d.expected}, computed {d.computed} "
                f"[certificate: {d.certificate.get('kind', 'none')}]"
            )
    else:
        lines.append("deviations from expected values: none")
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def _cmd_catalog(_args) -> int:
    for entry in cat_mod.list_entries():
        dim = str(entry.dim) if entry.dim is not None else "n"
        bits = [f"{entry.entry_id:<8} dim {dim:<2} params: {entry.arity:<28}"]
        bits.append(entry.source)
        if entry.expected is not None:
            e = entry.expected
            exp = []
            if e.inner is not None:
                exp.append(f"Inner {e.inner}")
            if e.rcaid is not None:
                exp.append(f"RCAID {e.rcaid}")
            if e.aid is not None:
                exp.append(f"AID {e.aid}")
            if e.der is not None:
                exp.append(f"Der {e.der}")
            if e.generator_label:
                exp.append(f"D={e.generator_label}")
            bits.append(f"expected: {', '.join(exp)}")
        if entry.note:
            bits.append(f"[{entry.note}]")
        print("  ".join(bits))
    return 0


def _config_from(args) -> AidConfig:
    kwargs = {}
    if getattr(args, "seed", None) is not None:
        kwargs["seed"] = args.seed
    if getattr(args, "grid_radius", None) is not None:
        kwargs["grid_radius"] = args.grid_radius
    return AidConfig(**kwargs)


def _cmd_analyze(args) -> int:
    algebra, algebra_id, expected = _load_algebra(args.source)
    cfg = _config_from(args)
    print(f"analyzing {algebra_id} ...", file=sys.stderr)
    report = der_mod.analysis_report(algebra, cfg, algebra_id, expected)
    if args.format == "json":
        print(json.dumps(report_json(report), indent=2))
    else:
        sys.stdout.write(report_text(report))
    return 0


def _cmd_witness(args) -> int:
    algebra, algebra_id, _ = _load_algebra(args.source)
    endo = _load_endo(args.endo, algebra.dim)
    if len(args.coords) != algebra.dim:
        raise InputError(
            f"need {algebra.dim} coordinates for x, got {len(args.coords)}"
        )
    try:
        x = tuple(as_rational(c) for c in args.coords)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad coordinate: {exc}") from exc
    witness = der_mod.aid_witness(algebra, endo, x)
    doc = {
        "schema": "aid-witness/1",
        "algebra": algebra_id,
        "x": cat_mod.vec_json(x),
        "witness": cat_mod.vec_json(witness) if witness is not None else None,
    }
    if witness is not None:
        doc["reproduces"] = list(algebra.product(x, witness)) == list(endo.apply(x))
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_fuzz(args) -> int:
    import random

    algebra, algebra_id, _ = _load_algebra(args.source)
    cfg = AidConfig()
    base, base_status = _tower_dims(algebra, cfg)
    rng = random.Random(args.seed)
    n = algebra.dim
    failures = []
    statuses = {base_status: 1}
    for trial in range(args.basis_changes):
        p = _random_invertible(rng, n)
        changed = alg_mod.change_basis(algebra, p)
        dims, status = _tower_dims(changed, cfg)
        statuses[status] = statuses.get(status, 0) + 1
        if dims != base:
            failures.append({
                "trial": trial,
                "matrix": cat_mod.matrix_json(p),
                "dims": dims,
            })
        print(f"fuzz {algebra_id} trial {trial + 1}/{args.basis_changes}",
              file=sys.stderr)
    doc = {
        "schema": "aid-fuzz/1",
        "algebra": algebra_id,
        "seed": args.seed,
        "basis_changes": args.basis_changes,
        "reference_dims": base,
        "statuses": dict(sorted(statuses.items())),
        "failures": failures,
        "ok": not failures,
    }
    print(json.dumps(doc, indent=2))
    return 0 if not failures else 1


def _tower_dims(algebra, cfg) -> tuple[dict, str]:
    """Five tower dimensions, all built on the sampling upper bound.

    The upper bound always contains the true AID space, so when its dimension
    matches across bases the derived intersections are comparable too even if
    symbolic certification succeeds in one basis and not another; the
    certification status is returned separately as data.
    """
    der = der_mod.derivation_space(algebra).dim
    inner = der_mod.inner_space(algebra).dim
    aid = der_mod.aid_space(algebra, cfg)
    rcaid = der_mod.rcaid_caid(algebra, "right_ann", aid.upper_bound).dim
    caid = der_mod.rcaid_caid(algebra, "center", aid.upper_bound).dim
    dims = {
        "der": der, "inner": inner, "aid": aid.upper_bound.dim,
        "rcaid": rcaid, "caid": caid,
    }
    return dims, aid.status


def _random_invertible(rng, n: int) -> RationalMatrix:
    from .exactlin import rref

    while True:
        rows = [[Q(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        m = RationalMatrix.from_rows(rows)
        if rref(m).rank == n:
            return m


# ---------------------------------------------------------------------------
# verify-paper battery


def _check(name: str, passed: bool, deviations=(), **info) -> dict:
    entry = {"name": name, "passed": passed,
             "deviations": [_deviation_json(d) for d in deviations]}
    entry.update(info)
    return entry


def _table_checks(cfg) -> list[dict]:
    rows = [
        ("L4", ["0", "1"]), ("L9", [None]), ("L10", [None]),
        ("L11", [None]), ("L12", [None]), ("L13", ["0", "1", "2"]),
        ("L20", ["0", "2"]),
    ]
    out = []
    for entry, alphas in rows:
        for alpha in alphas:
            ref_s = f"catalog:D4:{entry}" + (f":{alpha}" if alpha is not None else "")
            ref = cat_mod.parse_ref(ref_s)
            print(f"verify: table {ref_s}", file=sys.stderr)
            report = der_mod.analysis_report(
                cat_mod.make(ref), cfg, ref.ref_string(), cat_mod.expected_for(ref)
            )
            out.append(_check(
                f"table:{ref_s}", not report.deviations, report.deviations,
                tower=dict(report.tower), status=report.aid.status,
            ))
    return out


def _nf_checks(cfg, nmax: int) -> list[dict]:
    out = []
    for n in range(2, nmax + 1):
        ref_s = f"catalog:NF:{n}"
        print(f"verify: {ref_s}", file=sys.stderr)
        algebra = cat_mod.make(ref_s)
        aid = der_mod.aid_space(algebra, cfg)
        inner = der_mod.inner_space(algebra)
        passed = aid.status == "certified_exact" and aid.upper_bound == inner
        out.append(_check(f"inner-equality:{ref_s}", passed,
                          status=aid.status, aid_dim=aid.upper_bound.dim,
                          inner_dim=inner.dim))
    return out


def _d3_checks(cfg) -> list[dict]:
    refs = [f"catalog:D3:L1:{a}" for a in ("0", "1", "-1", "2")]
    refs += [f"catalog:D3:{e}" for e in ("L2", "L3", "L4", "L5", "L6")]
    out = []
    for ref_s in refs:
        print(f"verify: {ref_s}", file=sys.stderr)
        algebra = cat_mod.make(ref_s)
        aid = der_mod.aid_space(algebra, cfg)
        inner = der_mod.inner_space(algebra)
        space = aid.upper_bound if aid.status == "certified_exact" else aid.proved
        rcaid = der_mod.rcaid_caid(algebra, "right_ann", space)
        passed = (aid.status == "certified_exact"
                  and aid.upper_bound == inner and rcaid == inner)
        out.append(_check(f"inner-equality:{ref_s}", passed,
                          status=aid.status, aid_dim=aid.upper_bound.dim,
                          rcaid_dim=rcaid.dim, inner_dim=inner.dim))
    return out


def _decomposition_check(ref_s: str, algebra, cfg, gen, scale_vec) -> dict:
    """AID should equal Inner + <gen> with gen certified almost inner,
    and the published decomposition claims the sum is direct."""
    aid = der_mod.aid_space(algebra, cfg)
    inner = der_mod.inner_space(algebra)
    gen_vec = der_mod.endo_to_vec(gen)
    span_sum = der_mod.subspace_sum(
        inner, Subspace.from_vectors(algebra.dim**2, [gen_vec])
    )
    outcome = der_mod.aid_certify(algebra, gen)
    witness_ok = algebra.right_mult(scale_vec) == gen
    sum_ok = (aid.status == "certified_exact" and aid.upper_bound == span_sum
              and outcome.kind == "proved" and witness_ok)
    direct = not inner.contains(gen_vec)
    deviations = []
    if not direct:
        combo = cat_mod.inner_combination(algebra, gen)
        deviations.append(Deviation(
            f"{ref_s}:decomposition",
            "generator independent of Inner (direct sum)",
            "generator already inner",
            {
                "kind": "inner_witness",
                "generator": cat_mod.matrix_json(gen),
                "combination": cat_mod.vec_json(combo),
                "x": cat_mod.vec_json(algebra.basis_coords(1)),
                "expects_witness": True,
            },
        ))
    return _check(f"decomposition:{ref_s}", sum_ok and direct, deviations,
                  sum_matches=sum_ok, generator_certified=outcome.kind,
                  status=aid.status)


def _refutation_check(ref_s: str, algebra, cfg, gen) -> dict:
    """The generator should fail almost-innerness with an explicit x, and
    AID should collapse to Inner."""
    aid = der_mod.aid_space(algebra, cfg)
    inner = der_mod.inner_space(algebra)
    outcome = der_mod.aid_certify(algebra, gen)
    refuted = outcome.kind == "refuted"
    x_confirms = (refuted and
                  der_mod.aid_witness(algebra, gen, outcome.refuting_x) is None)
    equal = aid.status == "certified_exact" and aid.upper_bound == inner
    info = {"status": aid.status, "generator_outcome": outcome.kind}
    if refuted:
        info["refuting_x"] = cat_mod.vec_json(outcome.refuting_x)
    return _check(f"refutation:{ref_s}", refuted and x_confirms and equal, **info)


def _f1_checks(cfg) -> list[dict]:
    out = []
    for n in (4, 5, 6, 7):
        for a_n in ("1", "2", "-3/2"):
            zeros = ["0"] * (n - 4)
            params = ",".join(zeros + [a_n, "0"])
            ref_s = f"catalog:F1:{n}:{params}"
            print(f"verify: {ref_s}", file=sys.stderr)
            algebra = cat_mod.make(ref_s)
            gen = der_mod.matrix_unit(n, n, 2)
            scale = tuple(
                (Q(1) / as_rational(a_n)) if i == 1 else Q(0) for i in range(n)
            )
            out.append(_decomposition_check(ref_s, algebra, cfg, gen, scale))
        params = ",".join(["0"] * (n - 4) + ["1", "1"])
        ref_s = f"catalog:F1:{n}:{params}"
        print(f"verify: {ref_s}", file=sys.stderr)
        algebra = cat_mod.make(ref_s)
        out.append(_refutation_check(ref_s, algebra, cfg,
                                     der_mod.matrix_unit(n, n, 2)))
    return out


def _f2_checks(cfg) -> list[dict]:
    out = []
    for n in (4, 5, 6):
        for gamma in ("1", "3"):
            params = ",".join(["0"] * (n - 3) + [gamma])
            ref_s = f"catalog:F2:{n}:{params}"
            print(f"verify: {ref_s}", file=sys.stderr)
            algebra = cat_mod.make(ref_s)
            gen = der_mod.matrix_unit(n, n, 2)
            scale = tuple(
                (Q(1) / as_rational(gamma)) if i == 1 else Q(0) for i in range(n)
            )
            out.append(_decomposition_check(ref_s, algebra, cfg, gen, scale))
    for n in (5, 6):
        # one interior coefficient switched on; the remark says AID = Inner
        params = ["0"] * (n - 2)
        params[0] = "1"  # b4
        params[-1] = "1"  # gamma
        ref_s = f"catalog:F2:{n}:{','.join(params)}"
        print(f"verify: {ref_s}", file=sys.stderr)
        algebra = cat_mod.make(ref_s)
        out.append(_refutation_check(ref_s, algebra, cfg,
                                     der_mod.matrix_unit(n, n, 2)))
    return out


def _f3_checks(cfg) -> list[dict]:
    out = []
    for n in (5, 6):
        for triple in ("0,0,1", "1,2,3"):
            ref_s = f"catalog:F3:{n}:{triple}"
            print(f"verify: {ref_s}", file=sys.stderr)
            algebra = cat_mod.make(ref_s)
            gen = der_mod.matrix_unit(n, n, 2)
            aid = der_mod.aid_space(algebra, cfg)
            inner = der_mod.inner_space(algebra)
            outcome = der_mod.aid_certify(algebra, gen)
            passed = (aid.status == "certified_exact"
                      and aid.upper_bound.dim == inner.dim + 1
                      and outcome.kind == "proved"
                      and not inner.contains(der_mod.endo_to_vec(gen)))
            out.append(_check(f"decomposition:{ref_s}", passed,
                              status=aid.status, aid_dim=aid.upper_bound.dim,
                              inner_dim=inner.dim,
                              generator_certified=outcome.kind))
        # theta3 = 0 outcome reported as data (pre-flagged open question)
        ref_s = f"catalog:F3:{n}:1,1,0"
        print(f"verify: {ref_s}", file=sys.stderr)
        algebra = cat_mod.make(ref_s)
        gen = der_mod.matrix_unit(n, n, 2)
        aid = der_mod.aid_space(algebra, cfg)
        inner = der_mod.inner_space(algebra)
        outcome = der_mod.aid_certify(algebra, gen)
        info = {
            "status": aid.status,
            "aid_dim": aid.upper_bound.dim,
            "inner_dim": inner.dim,
            "generator_outcome": outcome.kind,
        }
        if outcome.kind == "refuted":
            info["refuting_x"] = cat_mod.vec_json(outcome.refuting_x)
        out.append(_check(f"data:{ref_s}", True, **info))
    return out


def _g53_check(cfg) -> dict:
    ref_s = "catalog:G53"
    print(f"verify: {ref_s}", file=sys.stderr)
    algebra = cat_mod.make(ref_s)
    der = der_mod.derivation_space(algebra)
    inner = der_mod.inner_space(algebra)
    aid = der_mod.aid_space(algebra, cfg)
    series_dims, nilpotent = der_mod.subalgebra_nilpotency(aid.upper_bound)
    passed = (der.dim == 10 and inner.dim == 4 and aid.upper_bound.dim == 5
              and aid.status == "certified_exact" and nilpotent)
    return _check(f"dims:{ref_s}", passed, der_dim=der.dim,
                  inner_dim=inner.dim, aid_dim=aid.upper_bound.dim,
                  status=aid.status, aid_nilpotent=nilpotent,
                  aid_series=list(series_dims))


def _small_dim_checks(cfg) -> list[dict]:
    out = []
    cases = [
        ("abelian:1", alg_mod.LeibnizAlgebra.build(1, {})),
        ("abelian:2", alg_mod.LeibnizAlgebra.build(2, {})),
        ("catalog:NF:2", cat_mod.make("catalog:NF:2")),
    ]
    for name, algebra in cases:
        print(f"verify: {name}", file=sys.stderr)
        aid = der_mod.aid_space(algebra, cfg)
        inner = der_mod.inner_space(algebra)
        space = aid.upper_bound if aid.status == "certified_exact" else aid.proved
        rcaid = der_mod.rcaid_caid(algebra, "right_ann", space)
        passed = (aid.status == "certified_exact"
                  and aid.upper_bound == inner and rcaid == inner)
        out.append(_check(f"inner-equality:{name}", passed,
                          aid_dim=aid.upper_bound.dim, inner_dim=inner.dim))
    return out


def _cmd_verify(args) -> int:
    cfg = AidConfig()
    nmax = args.nmax
    checks: list[dict] = []
    checks += _table_checks(cfg)
    checks += _nf_checks(cfg, nmax)
    checks += _d3_checks(cfg)
    checks += _f1_checks(cfg)
    checks += _f2_checks(cfg)
    checks += _f3_checks(cfg)
    checks.append(_g53_check(cfg))
    checks += _small_dim_checks(cfg)
    all_passed = all(c["passed"] for c in checks)
    deviations = [d for c in checks for d in c["deviations"]]
    certified = all(d["certificate"] for d in deviations)
    covered = all(c["passed"] or c["deviations"] for c in checks)
    if all_passed:
        code = 0
    elif args.deviations_ok and certified and covered:
        code = 0
    else:
        code = 1
    doc = {
        "schema": "aid-verify/1",
        "nmax": nmax,
        "deviations_ok": bool(args.deviations_ok),
        "checks": checks,
        "deviation_count": len(deviations),
        "all_passed": all_passed,
        "exit_code": code,
    }
    print(json.dumps(doc, indent=2))
    return code


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leibniz-aid",
        description="Derivation towers of Leibniz algebras over Q, "
                    "with certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", help="list built-in algebras")

    p = sub.add_parser("analyze", help="analyze one algebra")
    p.add_argument("source", help="algebra JSON file, - for stdin, or catalog:REF")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--grid-radius", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("verify-paper",
                       help="check the published dimension claims")
    p.add_argument("--deviations-ok", action="store_true",
                   help="exit 0 when every mismatch carries a certificate")
    p.add_argument("--nmax", type=int, default=8,
                   help="largest null-filiform dimension to check")

    p = sub.add_parser("witness", help="replay a membership certificate")
    p.add_argument("source", help="algebra JSON file, - for stdin, or catalog:REF")
    p.add_argument("endo", help="JSON file with the endomorphism matrix")
    p.add_argument("coords", nargs="+", help="coordinates of x")

    p = sub.add_parser("fuzz", help="random basis-change invariance checks")
    p.add_argument("source", help="algebra JSON file, - for stdin, or catalog:REF")
    p.add_argument("--basis-changes", type=int, default=20)
    p.add_argument("--seed", type=int, default=der_mod.DEFAULT_SEED)

    return parser


_COMMANDS = {
    "catalog": _cmd_catalog,
    "analyze": _cmd_analyze,
    "verify-paper": _cmd_verify,
    "witness": _cmd_witness,
    "fuzz": _cmd_fuzz,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage already; normalize other codes
        return 2 if exc.code not in (0,) else 0
    try:
        return _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
