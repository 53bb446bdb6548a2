"""Random instance generators used by the property runs.

Distributions:

* ``random_set``: draw an inclusion probability p ~ U(0, 1), then include
  each vertex independently with probability p; redraw until the set is
  nonempty (and proper, unless ``allow_full``).
* ``random_function_on``: i.i.d. U(0, 1) values on the members, zero
  elsewhere; with ``signed=True`` the values are standard normal instead.
* ``random_distribution``: lognormal values (sigma 1.5) paired with flat
  Dirichlet weights, length uniform in 1..max_len.
* ``random_step_params``: integer ``1 <= t1 <= t0 <= 2^(n-1)`` and sums
  ``s_i = t_i u_i`` with ``u_i ~ U(0.01, 10)``.
* ``near_subcube``: a d-subcube with ``swaps`` members replaced by
  uniformly chosen outside vertices.
"""
from __future__ import annotations

import numpy as np

from .cube import CubeFunction, VertexSet, make_subcube


def random_set(n: int, rng: np.random.Generator, allow_full: bool = False) -> VertexSet:
    N = 1 << n
    while True:
        p = rng.random()
        mask = rng.random(N) < p
        count = int(mask.sum())
        if count and (allow_full or count < N):
            return VertexSet(n, np.flatnonzero(mask))


def random_sized_set(n: int, size: int, rng: np.random.Generator) -> VertexSet:
    return VertexSet(n, rng.choice(1 << n, size=size, replace=False))


def random_function_on(A: VertexSet, rng: np.random.Generator, signed: bool = False) -> CubeFunction:
    values = np.zeros(1 << A.n)
    values[A.indices] = rng.standard_normal(A.size) if signed else rng.random(A.size)
    return CubeFunction(values)


def random_function(n: int, rng: np.random.Generator) -> CubeFunction:
    return CubeFunction(rng.random(1 << n))


def near_subcube(n: int, d: int, swaps: int, rng: np.random.Generator) -> VertexSet:
    base = make_subcube(n, range(d))
    members = set(base)
    outside = np.setdiff1d(np.arange(1 << n), base.indices)
    swaps = min(swaps, base.size, outside.size)
    drop = rng.choice(base.indices, size=swaps, replace=False)
    add = rng.choice(outside, size=swaps, replace=False)
    members.difference_update(drop.tolist())
    members.update(add.tolist())
    return VertexSet(n, sorted(members))


def adjacent_swap(n: int, d: int, rng: np.random.Generator) -> VertexSet:
    """d-subcube with one member traded for one of its outside neighbours."""
    base = make_subcube(n, range(d))
    v = int(rng.choice(base.indices))
    w = v ^ (1 << int(rng.integers(d, n)))
    members = (set(base) - {v}) | {w}
    return VertexSet(n, sorted(members))


def random_distribution(rng: np.random.Generator, max_len: int) -> tuple[np.ndarray, np.ndarray]:
    length = int(rng.integers(1, max_len + 1))
    values = np.exp(rng.normal(0.0, 1.5, size=length))
    weights = rng.dirichlet(np.ones(length))
    return values, weights / weights.sum()


def random_step_params(n: int, rng: np.random.Generator) -> tuple[float, float, float, float]:
    t0 = int(rng.integers(1, 2 ** (n - 1) + 1))
    t1 = int(rng.integers(1, t0 + 1))
    u0, u1 = rng.uniform(0.01, 10.0, size=2)
    return float(t0), float(t1), float(t0 * u0), float(t1 * u1)
