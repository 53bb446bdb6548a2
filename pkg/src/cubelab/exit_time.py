"""Mean first exit time of the simple random walk started uniformly in A.

Each step flips one uniformly chosen coordinate.  The exact mean is
``(n/|A|) <L^{-1} 1, 1>``; the survival probabilities are
``<E^k 1, 1> / (|A| n^k)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import default_threads, settings
from .cube import VertexSet
from .spectral import build_system, log_ratio, solve_unit, top_eigenvalue

EQUALITY_TOL = 1e-9
SURVIVAL_TAIL = 1e-9
MAX_SURVIVAL_STEPS = 10**6
MC_CHUNK = 1 << 16


class InfiniteExitTimeError(ValueError):
    """The walk never leaves the full cube."""


def exit_bound(n: int, size: int) -> float:
    """n / log2(2^n / |A|); infinite for the full cube."""
    if size < 1:
        raise ValueError("the bound needs a nonempty set")
    L = log_ratio(n, size)
    return math.inf if L <= 0 else n / L


@dataclass
class MonteCarloEstimate:
    estimate: float
    stderr: float
    trials: int
    seed: int


@dataclass
class ExitTimeReport:
    n: int
    size: int
    exact: float
    bound: float
    equality: bool
    survival: np.ndarray = field(default_factory=lambda: np.empty(0))
    mc: MonteCarloEstimate | None = None


def _check_proper(A: VertexSet) -> None:
    if A.is_empty():
        raise ValueError("exit time of the empty set is undefined")
    if A.is_full():
        raise InfiniteExitTimeError("the walk never exits the full cube")


def mean_exit_exact(A: VertexSet, survival_steps: int | str | None = None) -> ExitTimeReport:
    """Exact mean exit time, the matching upper bound, and optionally the survival curve.

    ``survival_steps`` is ``None`` (no curve), an integer ``K``, or
    ``"auto"`` for the truncation from :func:`truncation_steps`.
    """
    _check_proper(A)
    sys = build_system(A)
    exact = A.n / A.size * solve_unit(sys).q
    bound = exit_bound(A.n, A.size)
    report = ExitTimeReport(n=A.n, size=A.size, exact=exact, bound=bound,
                            equality=abs(exact - bound) <= EQUALITY_TOL)
    if survival_steps is not None:
        K = truncation_steps(A) if survival_steps == "auto" else int(survival_steps)
        report.survival = survival_curve(A, K)
    return report


def truncation_steps(A: VertexSet) -> int:
    """Smallest K with (lambda_1/n)^K |A| <= 1e-9, capped at 10^6."""
    lam = top_eigenvalue(build_system(A))
    if lam <= 0:
        return 1
    ratio = lam / A.n
    if ratio >= 1:
        return MAX_SURVIVAL_STEPS
    K = math.ceil(math.log(SURVIVAL_TAIL / A.size) / math.log(ratio))
    return int(min(max(K, 1), MAX_SURVIVAL_STEPS))


def survival_curve(A: VertexSet, K: int) -> np.ndarray:
    """Pr{Y > k} for k = 0..K by repeated application of E/n."""
    if A.is_empty():
        raise ValueError("survival of the empty set is undefined")
    if K < 0:
        raise ValueError("K must be nonnegative")
    sys = build_system(A)
    v = np.ones(A.size)
    out = np.empty(K + 1)
    out[0] = 1.0
    for k in range(1, K + 1):
        v = sys.apply_E(v) / A.n
        out[k] = v.sum() / A.size
    return out


@dataclass(frozen=True)
class WalkCount:
    k: int
    count: int


def walk_count(A: VertexSet, k: int) -> WalkCount:
    """Exact number <E^k 1, 1> of length-k walks that stay inside A.

    Works from the neighbour table of the member list, so it never
    allocates a ``2**n`` array; Python integers take over when int64 could
    overflow.
    """
    if k < 0:
        raise ValueError("walk length must be nonnegative")
    if A.is_empty():
        return WalkCount(k, 0)
    table = A.neighbor_table()
    hit = table >= 0
    safe = np.where(hit, table, 0)
    exact_ints = A.size * A.n ** k >= 2**62
    v = np.ones(A.size, dtype=object if exact_ints else np.int64)
    for _ in range(k):
        v = np.where(hit, v[safe], 0).sum(axis=1)
        if exact_ints:
            v = v.astype(object)
    return WalkCount(k, int(sum(v.tolist())))


def _mc_chunk(indices: np.ndarray, member, n: int, count: int,
              seed: int, chunk: int) -> tuple[int, int]:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))
    pos = indices[rng.integers(indices.size, size=count)]
    steps = np.zeros(count, dtype=np.int64)
    alive = np.arange(count)
    t = 0
    while alive.size:
        t += 1
        pos = pos ^ np.left_shift(np.int64(1), rng.integers(n, size=pos.size))
        inside = member(pos)
        steps[alive[~inside]] = t
        alive, pos = alive[inside], pos[inside]
    return int(steps.sum()), int(np.square(steps).sum())


def mean_exit_mc(A: VertexSet, trials: int, seed: int,
                 threads: int | None = None) -> MonteCarloEstimate:
    """Monte Carlo estimate of the mean exit time with its standard error.

    Trials are split into fixed chunks of 65536, chunk ``j`` drawing from
    the substream ``SeedSequence(seed, spawn_key=(j,))``.  Chunk sums are
    exact integers merged in chunk order, so the result does not depend on
    ``threads``.
    """
    _check_proper(A)
    if trials < 1:
        raise ValueError("need at least one trial")
    if A.n <= settings.max_dim:
        mask = A.mask
        def member(p):
            return mask[p]
    else:
        def member(p):
            return A.positions(p) >= 0
    sizes = [min(MC_CHUNK, trials - s) for s in range(0, trials, MC_CHUNK)]
    threads = default_threads() if threads is None else max(1, int(threads))

    def run(j):
        return _mc_chunk(A.indices, member, A.n, sizes[j], seed, j)

    if threads == 1 or len(sizes) == 1:
        parts = [run(j) for j in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mean = total / trials
    if trials > 1:
        var = (total_sq * trials - total * total) / (trials * (trials - 1))
        stderr = math.sqrt(max(var, 0.0) / trials)
    else:
        stderr = 0.0
    return MonteCarloEstimate(estimate=mean, stderr=stderr, trials=trials, seed=seed)
