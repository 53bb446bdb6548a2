import numpy as np

from cubelab.cube import edge_boundary, make_subcube
from cubelab.sampling import (adjacent_swap, near_subcube, random_distribution, random_set,
                              random_sized_set, random_step_params)


def test_random_set_is_proper_and_nonempty():
    rng = np.random.default_rng(0)
    for n in range(1, 6):
        for _ in range(50):
            A = random_set(n, rng)
            assert 0 < A.size < 2 ** n


def test_sized_and_reproducible():
    a = random_sized_set(5, 7, np.random.default_rng(3))
    b = random_sized_set(5, 7, np.random.default_rng(3))
    assert a == b and a.size == 7


def test_near_subcube_families():
    rng = np.random.default_rng(1)
    A = near_subcube(8, 4, 3, rng)
    assert A.size == 16 and len(set(A) & set(make_subcube(8, range(4)))) == 13
    B = adjacent_swap(8, 4, rng)
    assert B.size == 16
    # one member traded for an adjacent outside vertex changes the boundary by at most 2n
    assert abs(edge_boundary(B) - edge_boundary(make_subcube(8, range(4)))) <= 16


def test_distribution_and_step_params():
    rng = np.random.default_rng(2)
    for _ in range(100):
        v, w = random_distribution(rng, 10)
        assert np.all(v > 0) and abs(w.sum() - 1) <= 1e-12 and 1 <= v.size <= 10
        t0, t1, s0, s1 = random_step_params(6, rng)
        assert 1 <= t1 <= t0 <= 32 and s0 > 0 and s1 > 0
