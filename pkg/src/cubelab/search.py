"""Search over subsets of {0,1}^n for sets with extremal exit behaviour.

Objectives are scored on one representative per orbit of the cube's
automorphism group (coordinate permutations combined with coordinate
flips).  The representative of a set is the image whose bitmask
``sum(2**v for v in image)`` is smallest.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .config import settings
from .cube import VertexSet, make_ball, make_subcube
from .exit_time import exit_bound, mean_exit_exact, survival_curve, walk_count

MAX_CANON_DIM = 6
TIE_TOL = 1e-12


class BudgetExceededError(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"exhaustive search needs {required} candidate sets, budget is {budget}")
        self.required = required
        self.budget = budget


@functools.lru_cache(maxsize=None)
def automorphisms(n: int) -> np.ndarray:
    """Vertex maps of all n! 2^n cube automorphisms, shape ``(n! 2^n, 2^n)``.

    Row ``g`` sends vertex ``v`` to ``perm(v ^ flip)`` where ``perm`` moves
    bit ``i`` to bit ``p[i]``.
    """
    if not 1 <= n <= MAX_CANON_DIM:
        raise ValueError(f"automorphism tables are limited to n <= {MAX_CANON_DIM}")
    v = np.arange(1 << n, dtype=np.int64)
    bits = (v[:, None] >> np.arange(n)) & 1                     # (2^n, n)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    permuted = (bits[None, :, :] << perms[:, None, :]).sum(axis=2)   # (n!, 2^n)
    flips = v
    # out[p, c, v] = permuted[p, v ^ c]
    out = permuted[:, v[None, :] ^ flips[:, None]]
    out = out.reshape(-1, 1 << n)
    out.setflags(write=False)
    return out


def _min_images(members: np.ndarray, n: int) -> np.ndarray:
    """Smallest image bitmask (uint64) for each row of ``members`` (shape ``(N, k)``)."""
    G = automorphisms(n)
    one = np.uint64(1)
    N = members.shape[0]
    best = np.full(N, np.iinfo(np.uint64).max, dtype=np.uint64)
    if members.shape[1] == 0:
        return np.zeros(N, dtype=np.uint64)
    step = max(1, (1 << 22) // max(1, N * members.shape[1]))
    for lo in range(0, G.shape[0], step):
        img = G[lo:lo + step][:, members]                    # (g, N, k)
        words = np.bitwise_or.reduce(one << img.astype(np.uint64), axis=2)
        best = np.minimum(best, words.min(axis=0))
    return best


def canonical_int(A: VertexSet) -> int:
    return int(_min_images(A.indices[None, :], A.n)[0])


def canonicalize(A: VertexSet) -> VertexSet:
    """Orbit representative with the smallest bitmask."""
    return VertexSet.from_int(A.n, canonical_int(A))


def apply_automorphism(A: VertexSet, perm, flip: int) -> VertexSet:
    """Image of ``A`` under ``v -> perm(v ^ flip)``, ``perm[i]`` the new position of bit ``i``."""
    out = []
    for v in A:
        w = v ^ flip
        out.append(sum(1 << perm[i] for i in range(A.n) if w >> i & 1))
    return VertexSet(A.n, out)


# -- objectives -------------------------------------------------------------------

def objective_value(A: VertexSet, objective: str, k: int | None = None) -> float:
    if objective == "mean_exit_time":
        return mean_exit_exact(A).exact
    if objective == "k_step_survival":
        if k is None or k < 0:
            raise ValueError("k_step_survival needs a nonnegative k")
        return float(survival_curve(A, k)[k])
    raise ValueError(f"unknown objective {objective!r}")


@dataclass
class SearchTask:
    n: int
    size: int
    objective: str = "mean_exit_time"
    k: int | None = None
    mode: str = "exhaustive"
    trials: int = 1000
    restarts: int = 10
    seed: int = 0
    budget: int | None = None

    def __post_init__(self):
        if not 1 <= self.size <= 2 ** self.n:
            raise ValueError(f"size must lie in [1, 2^{self.n}]")
        if self.objective == "mean_exit_time" and self.size == 2 ** self.n:
            raise ValueError("the full cube has infinite exit time")
        if self.objective not in ("mean_exit_time", "k_step_survival"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.mode not in ("exhaustive", "random", "greedy_local"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class SearchResult:
    best_set: VertexSet
    best_value: float
    bound: float | None
    subcube_value: float | None
    certificate: dict = field(default_factory=dict)
    heuristic: bool = False
    max_bound_gap: float | None = None     # max over scored sets of value - bound

    def to_dict(self) -> dict:
        return {"best_set": "hex:" + self.best_set.to_hex(), "best_size": self.best_set.size,
                "best_value": self.best_value, "bound": self.bound,
                "subcube_value": self.subcube_value, "heuristic": self.heuristic,
                "max_bound_gap": self.max_bound_gap, "certificate": self.certificate}


def _subcube_value(task: SearchTask) -> float | None:
    d = task.size.bit_length() - 1
    if 1 << d != task.size:
        return None
    return objective_value(make_subcube(task.n, range(d)), task.objective, task.k)


class _Best:
    """Running maximum; ties go to the smaller bitmask."""

    def __init__(self, bound):
        self.value = -math.inf
        self.bits = None
        self.maximizers = 0
        self.bound = bound
        self.gap = -math.inf

    def offer(self, value: float, bits: int):
        if self.bound is not None:
            self.gap = max(self.gap, value - self.bound)
        if value > self.value + TIE_TOL:
            self.value, self.bits, self.maximizers = value, bits, 1
        elif abs(value - self.value) <= TIE_TOL:
            self.maximizers += 1
            if bits < self.bits:
                self.bits = bits


def search(task: SearchTask) -> SearchResult:
    bound = exit_bound(task.n, task.size) if task.objective == "mean_exit_time" else None
    if task.mode == "exhaustive":
        result = _exhaustive(task, bound)
    elif task.mode == "random":
        result = _random(task, bound)
    else:
        result = _greedy(task, bound)
    result.subcube_value = _subcube_value(task)
    return result


def canonical_classes(n: int, size: int, budget: int | None = None,
                      chunk: int = 4096) -> tuple[list[int], int]:
    """Sorted canonical bitmasks of all size-``size`` subsets, and the raw count visited."""
    budget = settings.search_budget if budget is None else budget
    required = math.comb(1 << n, size)
    if required > budget:
        raise BudgetExceededError(required, budget)
    seen = set()
    combos = itertools.combinations(range(1 << n), size)
    visited = 0
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        visited += len(block)
        members = np.array(block, dtype=np.int64).reshape(len(block), size)
        seen.update(int(b) for b in np.unique(_min_images(members, n)))
    return sorted(seen), visited


def _exhaustive(task: SearchTask, bound) -> SearchResult:
    classes, visited = canonical_classes(task.n, task.size, task.budget)
    best = _Best(bound)
    for bits in classes:
        best.offer(objective_value(VertexSet.from_int(task.n, bits), task.objective, task.k), bits)
    return SearchResult(
        best_set=VertexSet.from_int(task.n, best.bits), best_value=best.value, bound=bound,
        subcube_value=None, heuristic=False,
        max_bound_gap=best.gap if bound is not None else None,
        certificate={"mode": "exhaustive", "visited": visited, "orbits": len(classes),
                     "maximizer_orbits": best.maximizers})


def _key(A: VertexSet) -> int:
    return canonical_int(A) if A.n <= MAX_CANON_DIM else A.to_int()


def _random(task: SearchTask, bound) -> SearchResult:
    rng = np.random.default_rng(task.seed)
    best = _Best(bound)
    for _ in range(task.trials):
        A = VertexSet(task.n, rng.choice(1 << task.n, size=task.size, replace=False))
        best.offer(objective_value(A, task.objective, task.k), _key(A))
    return SearchResult(
        best_set=VertexSet.from_int(task.n, best.bits), best_value=best.value, bound=bound,
        subcube_value=None, heuristic=True, max_bound_gap=best.gap if bound is not None else None,
        certificate={"mode": "random", "trials": task.trials, "seed": task.seed})


def _greedy(task: SearchTask, bound) -> SearchResult:
    """Swap-based hill climbing: replace one member by an outside neighbour while it helps."""
    rng = np.random.default_rng(task.seed)
    best = _Best(bound)
    evaluations = 0
    cube = 1 << task.n
    for _ in range(task.restarts):
        current = set(rng.choice(cube, size=task.size, replace=False).tolist())
        value = objective_value(VertexSet(task.n, current), task.objective, task.k)
        evaluations += 1
        improved = True
        while improved:
            improved = False
            frontier = sorted({v ^ (1 << i) for v in current for i in range(task.n)} - current)
            for out in sorted(current):
                for into in frontier:
                    trial = (current - {out}) | {into}
                    tv = objective_value(VertexSet(task.n, trial), task.objective, task.k)
                    evaluations += 1
                    if tv > value + TIE_TOL:
                        current, value, improved = trial, tv, True
                        break
                if improved:
                    break
        A = VertexSet(task.n, current)
        best.offer(value, _key(A))
    return SearchResult(
        best_set=VertexSet.from_int(task.n, best.bits), best_value=best.value, bound=bound,
        subcube_value=None, heuristic=True, max_bound_gap=best.gap if bound is not None else None,
        certificate={"mode": "greedy_local", "restarts": task.restarts, "seed": task.seed,
                     "evaluations": evaluations})


@dataclass
class SurvivalComparison:
    d: int
    k: int
    n: int
    size: int
    subcube_walks: int
    ball_walks: int

    @property
    def winner(self) -> str:
        if self.subcube_walks == self.ball_walks:
            return "tie"
        return "subcube" if self.subcube_walks > self.ball_walks else "ball"

    def to_dict(self) -> dict:
        return {"d": self.d, "k": self.k, "n": self.n, "size": self.size,
                "subcube_walks": self.subcube_walks, "ball_walks": self.ball_walks,
                "winner": self.winner}


def survival_comparison(d: int, k: int) -> SurvivalComparison:
    """Length-k walk counts: d-subcube versus radius-1 ball, both of size 2^d in dimension 2^d - 1."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if d < 1:
        raise ValueError("d must be at least 1")
    n = (1 << d) - 1
    if n > settings.max_sparse_dim:
        raise ValueError(f"d = {d} needs dimension {n}, above {settings.max_sparse_dim}")
    cube = make_subcube(n, range(d))
    ball = make_ball(n, 0, 1)
    return SurvivalComparison(d=d, k=k, n=n, size=1 << d,
                              subcube_walks=walk_count(cube, k).count,
                              ball_walks=walk_count(ball, k).count)
