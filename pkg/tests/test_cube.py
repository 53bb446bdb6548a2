import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cubelab.cube import (CubeFunction, VertexSet, dirichlet_form, edge_boundary,
                          is_downward_monotone, make_ball, make_subcube, monotonize, neighbors,
                          require_dense, shift_direction)


# -- brute-force oracles ---------------------------------------------------------

def brute_edges(n):
    return [(x, y) for x in range(2 ** n) for y in range(x + 1, 2 ** n)
            if bin(x ^ y).count("1") == 1]


def brute_boundary(A):
    members = set(A)
    return sum((x in members) != (y in members) for x, y in brute_edges(A.n))


def brute_dirichlet(values, n):
    total = sum((values[x] - values[y]) ** 2 for x, y in brute_edges(n))
    return 2 * total / 2 ** n


def brute_monotone(values, n):
    for x in range(2 ** n):
        for y in range(2 ** n):
            if x & y == x and values[x] < values[y]:
                return False
    return True


def sets_of(n):
    for bits in range(1, 2 ** (2 ** n)):
        yield VertexSet.from_int(n, bits)


# -- neighbors -------------------------------------------------------------------

def test_neighbors_examples():
    assert sorted(neighbors(0, 2)) == [1, 2]
    assert sorted(neighbors(7, 3)) == [3, 5, 6]


def test_neighbors_distinct_and_symmetric():
    n = 4
    for v in range(2 ** n):
        nb = neighbors(v, n)
        assert len(nb) == n == len(set(nb))
        for u in nb:
            assert bin(u ^ v).count("1") == 1
            assert v in neighbors(u, n)


def test_neighbors_rejects_bad_vertex():
    with pytest.raises(ValueError):
        neighbors(8, 3)


# -- constructors ----------------------------------------------------------------

def test_subcube_examples():
    assert list(make_subcube(3, [0, 1], {2: 0})) == [0, 1, 2, 3]
    assert list(make_subcube(3, [], {0: 0, 1: 0, 2: 0})) == [0]
    assert make_subcube(3, [0, 1, 2]).size == 8


def test_subcube_is_regular():
    A = make_subcube(5, [1, 3], {0: 1, 2: 0, 4: 1})
    assert A.size == 4
    assert np.all(A.internal_degrees() == 2)


def test_subcube_rejects_bad_partition():
    with pytest.raises(ValueError):
        make_subcube(3, [0, 1], {1: 0, 2: 0})
    with pytest.raises(ValueError):
        make_subcube(3, [0], {1: 0})


def test_ball_examples():
    assert list(make_ball(3, 0, 1)) == [0, 1, 2, 4]
    assert list(make_ball(4, 5, 0)) == [5]
    assert make_ball(31, 0, 1).size == 32
    with pytest.raises(ValueError):
        make_ball(3, 0, 4)


def test_vertexset_roundtrips():
    A = VertexSet(4, [5, 1, 1, 9])
    assert list(A) == [1, 5, 9] and len(A) == 3
    assert VertexSet.from_int(4, A.to_int()) == A
    assert VertexSet.from_mask(A.mask) == A
    assert A.complement().size == 13
    assert 5 in A and 6 not in A


def test_dense_cap():
    with pytest.raises(ValueError):
        require_dense(30)


# -- boundary and Dirichlet form -------------------------------------------------

def test_boundary_examples():
    assert edge_boundary(make_subcube(3, [0, 1])) == 4
    assert edge_boundary(VertexSet.full(3)) == 0
    assert edge_boundary(VertexSet(2, [0, 1, 3])) == 2
    assert edge_boundary(VertexSet(3, [])) == 0


def test_boundary_matches_enumeration_exhaustive_n3():
    for A in sets_of(3):
        assert edge_boundary(A) == brute_boundary(A)


def test_edge_isoperimetry_exhaustive_n_le_4():
    for n in range(1, 5):
        for A in sets_of(n):
            assert edge_boundary(A) >= A.size * (n - math.log2(A.size)) - 1e-9


def test_edge_isoperimetry_random_n_le_12():
    rng = np.random.default_rng(12)
    for n in range(5, 13):
        for _ in range(50):
            p = rng.random()
            A = VertexSet.from_mask(rng.random(2 ** n) < p)
            if A.size:
                assert edge_boundary(A) >= A.size * (n - math.log2(A.size)) - 1e-9


def test_dirichlet_examples():
    assert dirichlet_form(CubeFunction(np.full(8, 3.0))) == 0
    assert dirichlet_form(CubeFunction.indicator(make_subcube(3, [0, 1]))) == pytest.approx(1.0)
    assert dirichlet_form(CubeFunction([0, 1, 1, 0])) == pytest.approx(2.0)


def test_dirichlet_indicator_identity_exhaustive_n3():
    for A in sets_of(3):
        g = CubeFunction.indicator(A)
        assert dirichlet_form(g) * 2 ** 3 == 2 * edge_boundary(A)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_dirichlet_matches_enumeration(n, seed):
    values = np.random.default_rng(seed).normal(size=2 ** n)
    assert dirichlet_form(CubeFunction(values)) == pytest.approx(brute_dirichlet(values, n), rel=1e-12)


# -- shifting --------------------------------------------------------------------

def test_shift_examples():
    g = shift_direction(CubeFunction([0, 5]), 0)
    assert list(g.values) == [5, 0]
    h = shift_direction(CubeFunction([0, 1, 1, 0]), 1)
    assert list(h.values) == [1, 1, 0, 0]
    assert dirichlet_form(CubeFunction([0, 1, 1, 0])) == pytest.approx(2.0)
    assert dirichlet_form(h) == pytest.approx(1.0)


def test_shift_leaves_monotone_unchanged():
    g = CubeFunction([4, 3, 2, 1, 3, 2, 1, 0])
    assert is_downward_monotone(g)
    for i in range(3):
        assert np.array_equal(shift_direction(g, i).values, g.values)


def test_monotonize_example():
    out = monotonize(CubeFunction([0, 1, 1, 0])).values
    assert sorted(out) == [0, 0, 1, 1]
    assert brute_monotone(out, 2)


def test_is_downward_monotone_examples():
    assert is_downward_monotone(CubeFunction(np.ones(8)))
    assert is_downward_monotone(CubeFunction.indicator(make_ball(3, 0, 1)))
    assert not is_downward_monotone(CubeFunction([0, 1, 0, 0]))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1), st.booleans())
def test_shift_properties(n, seed, ties):
    rng = np.random.default_rng(seed)
    values = rng.integers(0, 3, size=2 ** n).astype(float) if ties else rng.normal(size=2 ** n)
    g = CubeFunction(values)
    i = int(rng.integers(n))
    h = shift_direction(g, i)
    assert dirichlet_form(h) <= dirichlet_form(g) + 1e-12
    for x in range(2 ** n):
        if not x >> i & 1:
            y = x | 1 << i
            assert sorted((h.values[x], h.values[y])) == sorted((g.values[x], g.values[y]))
            assert h.values[x] >= h.values[y]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_monotonize_properties(n, seed):
    g = CubeFunction(np.random.default_rng(seed).normal(size=2 ** n))
    h = monotonize(g)
    assert brute_monotone(h.values, n)
    assert is_downward_monotone(h)
    # the value multiset is preserved exactly, hence so is sum |g| up to summation order
    assert np.array_equal(np.sort(h.values), np.sort(g.values))
    assert math.fsum(np.abs(h.values)) == math.fsum(np.abs(g.values))
    assert dirichlet_form(h) <= dirichlet_form(g) + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_is_downward_monotone_matches_pairwise_scan(n, seed):
    values = np.random.default_rng(seed).integers(0, 2, size=2 ** n).astype(float)
    assert is_downward_monotone(CubeFunction(values)) == brute_monotone(values, n)


def test_any_fixed_order_gives_monotone_result():
    g = CubeFunction(np.random.default_rng(3).normal(size=16))
    for order in itertools.permutations(range(4)):
        assert is_downward_monotone(monotonize(g, order))
