"""Shared fixtures and independent oracles for the test suite.

sympy is used purely as a second opinion (nullspace dimensions, identity
checks); all production results come from the package itself.
"""

from __future__ import annotations

import functools
import json

import pytest
import sympy as sp

import leibniz_aid as la


def sympy_nullspace_dim(rows: list[list], cols: int) -> int:
    """Nullity of a rational matrix, computed by sympy."""
    if not rows:
        return cols
    m = sp.Matrix([[sp.Rational(str(v)) for v in row] for row in rows])
    return cols - m.rank()


def sympy_derivation_dim(alg: la.LeibnizAlgebra) -> int:
    """Independent computation of dim Der from the defining identity."""
    n = alg.dim
    if n == 0:
        return 0
    c = [
        [[sp.Rational(str(alg.constants[i][j][k])) for k in range(n)]
         for j in range(n)]
        for i in range(n)
    ]
    syms = sp.symbols(f"d0:{n * n}")
    d = sp.Matrix(n, n, syms)
    eqs = []
    for i in range(n):
        for j in range(n):
            for m in range(n):
                lhs = sum(c[i][j][k] * d[m, k] for k in range(n))
                rhs = sum(d[k, i] * c[k][j][m] for k in range(n)) + sum(
                    d[k, j] * c[i][k][m] for k in range(n)
                )
                eqs.append(sp.expand(lhs - rhs))
    mat = sp.Matrix([[e.coeff(s) for s in syms] for e in eqs])
    return n * n - mat.rank()


@functools.cache
def analyze(ref: str) -> la.AnalysisReport:
    """One cached analysis per catalog ref for the whole session."""
    parsed = la.parse_ref(ref)
    return la.analysis_report(
        la.make(parsed), la.AidConfig(), parsed.ref_string(), la.expected_for(parsed)
    )


@functools.cache
def aid_of(ref: str) -> la.AidResult:
    return la.aid_space(la.make(ref), la.AidConfig())


@pytest.fixture
def write_algebra(tmp_path):
    def _write(name: str, doc: dict) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return _write


# the instances exercised by the cross-cutting property tests
CATALOG_BATTERY = (
    "catalog:NF:2",
    "catalog:NF:3",
    "catalog:NF:5",
    "catalog:D3:L1:0",
    "catalog:D3:L1:1",
    "catalog:D3:L1:-1",
    "catalog:D3:L1:2",
    "catalog:D3:L2",
    "catalog:D3:L3",
    "catalog:D3:L4",
    "catalog:D3:L5",
    "catalog:D3:L6",
    "catalog:D4:L4:0",
    "catalog:D4:L4:1",
    "catalog:D4:L9",
    "catalog:D4:L10",
    "catalog:D4:L11",
    "catalog:D4:L12",
    "catalog:D4:L13:0",
    "catalog:D4:L13:1",
    "catalog:D4:L13:2",
    "catalog:D4:L20:0",
    "catalog:D4:L20:2",
    "catalog:F1:4:1,0",
    "catalog:F1:5:0,2,0",
    "catalog:F1:6:0,0,-3/2,0",
    "catalog:F1:5:0,1,1",
    "catalog:F2:5:0,0,3",
    "catalog:F2:6:1,0,0,1",
    "catalog:F3:5:1,2,3",
    "catalog:F3:6:0,0,1",
    "catalog:F3:5:1,1,0",
    "catalog:G53",
)
