"""Exact rational linear algebra: echelon forms, subspaces, solving."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leibniz_aid.exactlin import (
    AmbientMismatch,
    NotASubspace,
    Q,
    RationalMatrix,
    Subspace,
    as_rational,
    complement_in,
    format_rational,
    nullspace,
    rref,
    solve_linear,
    subspace_intersect,
    subspace_sum,
)

from conftest import sympy_nullspace_dim

rationals = st.fractions(
    min_value=-20, max_value=20, max_denominator=12
)


def rand_matrix(rng: random.Random, rows: int, cols: int) -> RationalMatrix:
    return RationalMatrix.from_rows(
        [
            [Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)]
            for _ in range(rows)
        ]
    )


# -- scalars -----------------------------------------------------------


def test_as_rational_accepts_int_str_fraction():
    assert as_rational(3) == Q(3)
    assert as_rational("-7/2") == Q(-7, 2)
    assert as_rational(Q(5, 3)) == Q(5, 3)


def test_as_rational_rejects_floats_and_garbage():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(ValueError):
        as_rational("one half")


@given(rationals)
def test_format_roundtrip(q):
    assert as_rational(format_rational(Fraction(q))) == Fraction(q)


def test_format_integer_has_no_denominator():
    assert format_rational(Q(-4)) == "-4"
    assert format_rational(Q(3, 2)) == "3/2"


# -- rref --------------------------------------------------------------


def test_rref_known_matrix():
    m = RationalMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    res = rref(m)
    assert res.rank == 2
    assert res.pivots == (0, 1)
    assert res.matrix.entries == ((1, 0, -1), (0, 1, 2), (0, 0, 0))


def test_rref_idempotent_on_random_matrices():
    rng = random.Random(5)
    for _ in range(25):
        m = rand_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        once = rref(m).matrix
        again = rref(once).matrix
        assert once.entries == again.entries


def test_rank_nullity_against_sympy():
    rng = random.Random(17)
    for _ in range(20):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = rand_matrix(rng, rows, cols)
        null_dim = nullspace(m).dim
        assert null_dim == sympy_nullspace_dim(m.to_lists(), cols)
        assert rref(m).rank + null_dim == cols


def test_nullspace_vectors_are_in_the_kernel():
    rng = random.Random(23)
    for _ in range(15):
        m = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
        for v in nullspace(m).basis_vectors():
            assert all(x == 0 for x in m.apply(v))


# -- solve -------------------------------------------------------------


def test_solve_linear_particular_solution():
    m = RationalMatrix.from_rows([[1, 1], [1, -1]])
    x = solve_linear(m, [3, 1])
    assert x == (Q(2), Q(1))


def test_solve_linear_none_for_inconsistent():
    m = RationalMatrix.from_rows([[1, 1], [2, 2]])
    assert solve_linear(m, [1, 3]) is None


def test_solve_linear_matches_residual_on_random_systems():
    rng = random.Random(31)
    solved = unsolved = 0
    for _ in range(40):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = rand_matrix(rng, rows, cols)
        b = [Q(rng.randint(-3, 3)) for _ in range(rows)]
        x = solve_linear(m, b)
        if x is None:
            # rank test: b must be outside the column span
            aug = RationalMatrix.from_rows(
                [list(r) + [b[i]] for i, r in enumerate(m.entries)]
            )
            assert rref(aug).rank > rref(m).rank
            unsolved += 1
        else:
            assert list(m.apply(x)) == list(b)
            solved += 1
    assert solved and unsolved  # the sample hits both cases


# -- subspaces ---------------------------------------------------------


def test_subspace_equality_is_basis_independent():
    s1 = Subspace.from_vectors(3, [[1, 0, 1], [0, 1, 1]])
    s2 = Subspace.from_vectors(3, [[1, 1, 2], [1, -1, 0]])
    assert s1 == s2
    assert s1.dim == 2


def test_subspace_contains_and_reduce():
    s = Subspace.from_vectors(3, [[1, 0, 1]])
    assert s.contains([2, 0, 2])
    assert not s.contains([1, 0, 0])
    assert s.reduce([3, 0, 1]) == (0, 0, -2)


def test_sum_and_intersection_dims_modular():
    rng = random.Random(41)
    for _ in range(20):
        amb = rng.randint(1, 6)
        v1 = [[Q(rng.randint(-3, 3)) for _ in range(amb)] for _ in range(rng.randint(0, amb))]
        v2 = [[Q(rng.randint(-3, 3)) for _ in range(amb)] for _ in range(rng.randint(0, amb))]
        s1 = Subspace.from_vectors(amb, v1)
        s2 = Subspace.from_vectors(amb, v2)
        sm = subspace_sum(s1, s2)
        mt = subspace_intersect(s1, s2)
        assert sm.dim + mt.dim == s1.dim + s2.dim
        assert sm.contains_subspace(s1) and sm.contains_subspace(s2)
        assert s1.contains_subspace(mt) and s2.contains_subspace(mt)


def test_intersection_membership():
    s1 = Subspace.from_vectors(4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    s2 = Subspace.from_vectors(4, [[0, 1, 0, 0], [0, 0, 1, 1]])
    mt = subspace_intersect(s1, s2)
    assert mt == Subspace.from_vectors(4, [[0, 1, 0, 0]])


def test_complement_in_direct_sum():
    inner = Subspace.from_vectors(3, [[1, 1, 0]])
    whole = Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]])
    comp = complement_in(inner, whole)
    assert comp.dim == 1
    assert subspace_sum(inner, comp) == whole
    assert subspace_intersect(inner, comp).dim == 0


def test_complement_in_requires_containment():
    s1 = Subspace.from_vectors(2, [[1, 0]])
    s2 = Subspace.from_vectors(2, [[0, 1]])
    with pytest.raises(NotASubspace):
        complement_in(s1, s2)


def test_ambient_mismatch_raises():
    with pytest.raises(AmbientMismatch):
        subspace_sum(Subspace.full(2), Subspace.full(3))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-4, 4), min_size=3, max_size=3),
        min_size=0,
        max_size=4,
    )
)
def test_from_vectors_canonical_under_shuffle(vectors):
    s1 = Subspace.from_vectors(3, vectors)
    s2 = Subspace.from_vectors(3, list(reversed(vectors)))
    assert s1 == s2
    doubled = [[2 * x for x in v] for v in vectors]
    assert Subspace.from_vectors(3, doubled) == s1
