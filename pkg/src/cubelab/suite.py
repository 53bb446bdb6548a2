"""The acceptance battery: every criterion the library is held to, with fixed seeds.

Each criterion is a function ``(quick) -> dict`` whose result carries a
``passed`` flag plus the measured quantities.  ``quick`` shrinks trial
counts but keeps every check.  :func:`run_suite` times each criterion and
folds stated runtime targets into its verdict.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import cube as cc
from . import exit_time as et
from . import inequalities as iq
from . import sampling
from . import spectral as sp
from .search import survival_comparison


@dataclass
class CriterionResult:
    name: str
    title: str
    passed: bool
    seconds: float
    target_seconds: float | None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"criterion": self.name, "title": self.title, "passed": self.passed,
                "seconds": round(self.seconds, 3), "target_seconds": self.target_seconds,
                "detail": self.detail}


CRITERIA: dict[str, tuple[str, float | None, Callable[[bool], dict]]] = {}


def criterion(name: str, title: str, target: float | None = None):
    def wrap(fn):
        CRITERIA[name] = (title, target, fn)
        return fn
    return wrap


@criterion("AC1", "subcube exit time equals n/(n-d) for 0 <= d < n <= 12", target=30.0)
def ac1(quick: bool) -> dict:
    worst = 0.0
    cases = 0
    for n in range(1, (8 if quick else 12) + 1):
        for d in range(n):
            r = et.mean_exit_exact(cc.make_subcube(n, range(d)))
            worst = max(worst, abs(r.exact - n / (n - d)), abs(r.bound - n / (n - d)))
            cases += 1
    return {"passed": worst <= 1e-10, "cases": cases, "max_abs_error": worst}


@criterion("AC2", "exit time bound over every subset for n <= 4", target=300.0)
def ac2(quick: bool) -> dict:
    checked = 0
    worst_gap = -math.inf
    best = {4: -math.inf, 8: -math.inf}
    for n in range(1, 5):
        for bits in range(1, (1 << (1 << n)) - 1):
            A = cc.VertexSet.from_int(n, bits)
            r = et.mean_exit_exact(A)
            worst_gap = max(worst_gap, r.exact - r.bound)
            checked += 1
            if n == 4 and A.size in best:
                best[A.size] = max(best[A.size], r.exact)
    maxima_ok = abs(best[4] - 2.0) <= 1e-10 and abs(best[8] - 4.0) <= 1e-10
    return {"passed": worst_gap <= 1e-9 and maxima_ok and checked == 2 + 14 + 254 + 65534,
            "sets_checked": checked, "max_exact_minus_bound": worst_gap,
            "max_at_size_4": best[4], "max_at_size_8": best[8]}


@criterion("AC3", "functional isoperimetric inequality on random (A, g), n = 2..8")
def ac3(quick: bool) -> dict:
    trials = 500 if quick else 10**4
    rng = np.random.default_rng(3)
    violations = checks = 0
    worst = math.inf
    for n in range(2, 9):
        for t in range(trials):
            A = sampling.random_set(n, rng)
            g = sampling.random_function_on(A, rng, signed=(t % 4 == 3))
            m = cc.monotonize(g)
            for fn, S in ((g, A), (m, m.support() if m.support().size else A)):
                res = iq.verify_functional_isoperimetry(fn, S, tol=1e-10)
                checks += 1
                violations += not res.passed
                worst = min(worst, res.margin)
    return {"passed": violations == 0, "checks": checks, "violations": violations,
            "min_margin": worst}


@criterion("AC4", "matrix, solve and spectral forms agree on random sets, n <= 10")
def ac4(quick: bool) -> dict:
    trials = 60 if quick else 1000
    rng = np.random.default_rng(4)
    worst_rel = 0.0
    disagreements = failures = sets = 0
    for n in range(1, 11):
        for _ in range(trials):
            A = sampling.random_set(n, rng)
            sys = sp.build_system(A)
            inv_r = sp.eigen_bound(n, A.size)
            sol = sp.solve_unit(sys)
            sd = sys.spectrum()
            spec = sd.spectral_sum()
            worst_rel = max(worst_rel, abs(sol.q - spec) / sol.q)
            gs = [sol.x] + [rng.random(A.size) for _ in range(4)]
            ray = all(sp.rayleigh_check(sys, g)[2] for g in gs)
            solve_ok = sol.q <= inv_r * (1 + 1e-10)
            spec_ok = spec <= inv_r * (1 + 1e-10)
            disagreements += len({ray, solve_ok, spec_ok}) != 1
            failures += not (ray and solve_ok and spec_ok)
            sets += 1
    return {"passed": worst_rel <= 1e-8 and disagreements == 0 and failures == 0,
            "sets": sets, "max_rel_q_vs_spectral": worst_rel,
            "pass_fail_disagreements": disagreements, "inequality_failures": failures}


@criterion("AC5", "two-step walk counts: subcube versus radius-1 ball")
def ac5(quick: bool) -> dict:
    expected = {2: (16, 12), 4: (256, 240), 5: (800, 992)}
    got = {}
    ok = True
    for d, (cube_n, ball_n) in expected.items():
        c = survival_comparison(d, 2)
        got[d] = (c.subcube_walks, c.ball_walks, c.winner)
        ok &= (c.subcube_walks, c.ball_walks) == (cube_n, ball_n)
    ok &= got[5][2] == "ball" and got[2][2] == got[4][2] == "subcube"
    return {"passed": bool(ok), "counts": {str(d): list(v) for d, v in got.items()}}


@criterion("AC6", "shifting never raises the Dirichlet form; monotonize is monotone")
def ac6(quick: bool) -> dict:
    trials = 300 if quick else 10**4
    rng = np.random.default_rng(6)
    shift_bad = mono_bad = sum_bad = 0
    worst_increase = -math.inf
    for n in range(1, 9):
        for t in range(trials):
            g = cc.CubeFunction(rng.standard_normal(1 << n) if t % 2 else rng.random(1 << n))
            e0 = cc.dirichlet_form(g)
            for i in range(n):
                inc = cc.dirichlet_form(cc.shift_direction(g, i)) - e0
                worst_increase = max(worst_increase, inc)
                shift_bad += inc > 1e-12
            m = cc.monotonize(g)
            mono_bad += not cc.is_downward_monotone(m)
            same = (np.array_equal(np.sort(m.values), np.sort(g.values))
                    and math.fsum(np.abs(m.values)) == math.fsum(np.abs(g.values)))
            sum_bad += not same
    return {"passed": shift_bad == mono_bad == sum_bad == 0, "functions": 8 * trials,
            "shift_increases": shift_bad, "non_monotone": mono_bad, "sum_changes": sum_bad,
            "max_form_increase": worst_increase}


@criterion("AC7", "beta lemmas on a 10^6-point grid", target=10.0)
def ac7(quick: bool) -> dict:
    points = 10**5 if quick else 10**6
    out = {}
    ok = True
    for lemma in ("afbe-2cd", "bf-d2"):
        rep = iq.beta_lemma_scan(lemma, points=points, tol=1e-12)
        lim0, lim1 = rep.endpoint_limits["beta->0"], rep.endpoint_limits["beta->1"]
        limits_ok = (abs(lim0[-1]) < 1e-5 and abs(lim1[-1]) < 1e-5
                     and all(abs(a) > abs(b) for a, b in zip(lim0, lim0[1:]))
                     and all(abs(a) > abs(b) for a, b in zip(lim1, lim1[1:])))
        ok &= rep.passed and rep.min > 0 and limits_ok
        out[lemma] = {"min": rep.min, "argmin": rep.argmin, "violations": rep.violations,
                      "reduced_agreement": rep.reduced_agreement,
                      "limit_beta_to_0": lim0[-1], "limit_beta_to_1": lim1[-1]}
    return {"passed": bool(ok), "points": points, **out}


@criterion("AC8", "a >= 0 and nonpositive discriminant on the dyadic grid, n <= 20")
def ac8(quick: bool) -> dict:
    worst_a, worst_d, cases = math.inf, -math.inf, 0
    for n in range(2, 21):
        for x, y in iq.dyadic_pairs(n):
            a_chk, d_chk = iq.discriminant_check(x, y, n)
            worst_a = min(worst_a, a_chk.lhs)
            worst_d = max(worst_d, d_chk.rhs)
            cases += 1
    limit = {}
    for n, x in ((6, 16.0), (12, 1024.0), (20, 2.0 ** 18)):
        limit[f"n={n},t0={int(x)}"] = [iq.quadratic_in_R(x, x * (1 - 10.0 ** -k), n).discriminant
                                       for k in (1, 3, 5, 7)]
    return {"passed": worst_a >= -1e-12 and worst_d <= 1e-10, "cases": cases,
            "min_a": worst_a, "max_discriminant": worst_d, "t1_to_t0_discriminants": limit}


def mc_instances() -> list[tuple[cc.VertexSet, int]]:
    rng = np.random.default_rng(9)
    sets = [
        cc.VertexSet(1, [0]),
        cc.VertexSet(2, [0, 1, 3]),
        cc.make_subcube(3, [0]),
        cc.make_subcube(4, [0, 1]),
        cc.make_subcube(6, [0, 1, 2]),
        cc.make_subcube(8, [1, 3, 5, 7], {0: 1, 2: 0, 4: 1, 6: 0}),
        cc.make_ball(5, 0, 1),
        cc.make_ball(6, 9, 2),
        cc.make_ball(8, 0, 1),
        cc.VertexSet(3, [0, 1, 2, 4, 7]),
    ]
    while len(sets) < 20:
        n = int(rng.integers(3, 11))
        sets.append(sampling.random_sized_set(n, int(rng.integers(2, (1 << n) // 2)), rng))
    return [(A, 1000 + k) for k, A in enumerate(sets)]


@criterion("AC9", "Monte Carlo agrees with the exact exit time (4 standard errors)")
def ac9(quick: bool) -> dict:
    trials = 10**5 if quick else 10**6
    worst_z = 0.0
    bad = thread_mismatch = 0
    rows = []
    for A, seed in mc_instances():
        exact = et.mean_exit_exact(A).exact
        mc1 = et.mean_exit_mc(A, trials, seed, threads=1)
        mc4 = et.mean_exit_mc(A, trials, seed, threads=4)
        thread_mismatch += (mc1.estimate, mc1.stderr) != (mc4.estimate, mc4.stderr)
        diff = abs(mc1.estimate - exact)
        z = diff / mc1.stderr if mc1.stderr > 0 else (0.0 if diff == 0 else math.inf)
        worst_z = max(worst_z, z)
        bad += z > 4
        rows.append([A.n, A.size, exact, mc1.estimate, mc1.stderr])
    return {"passed": bad == 0 and thread_mismatch == 0, "instances": len(rows),
            "trials": trials, "max_z": worst_z, "outside_4_se": bad,
            "thread_mismatches": thread_mismatch}


@criterion("AC10", "concentration lemma and outdegree corollary")
def ac10(quick: bool) -> dict:
    total = 10**4 if quick else 10**5
    rng = np.random.default_rng(10)
    lemma_bad = 0
    worst = math.inf
    done = 0
    while done < total:
        length = int(rng.integers(1, 33))
        batch = min(5000, total - done)
        scale = np.exp(rng.normal(0, 2, size=(batch, 1)))
        values = scale * np.exp(rng.normal(0, rng.uniform(0, 2, size=(batch, 1)), size=(batch, length)))
        weights = rng.dirichlet(np.ones(length), size=batch) if length > 1 else np.ones((batch, 1))
        margin = iq.lemma32_batch(values, weights)
        tol = 1e-10 * np.maximum(1.0, np.abs(values).max(axis=1) ** 2)
        lemma_bad += int(np.sum(margin < -tol))
        worst = min(worst, float((margin / np.maximum(1.0, values.max(axis=1) ** 2)).min()))
        done += batch

    fam = cor_bad = applicable = 0
    for n in (8, 10):
        for d in range(1, n):
            for swaps in (0, 1, 2, 3):
                for rep in range(1 if swaps == 0 else (2 if quick else 5)):
                    if swaps == 1 and rep == 0:
                        A = sampling.adjacent_swap(n, d, rng)
                    else:
                        A = sampling.near_subcube(n, d, swaps, rng)
                    sys_ = sp.build_system(A)
                    eps_prime = sp.measured_eps_prime(A)
                    for delta in (0.25, 0.5, 0.75, 1.0):
                        r = sp.degree_concentration(sys_, eps_prime, delta)
                        fam += 1
                        applicable += r.applicable
                        cor_bad += not r.passed or not r.applicable
    return {"passed": lemma_bad == 0 and cor_bad == 0, "sequences": total,
            "lemma_violations": lemma_bad, "min_scaled_margin": worst,
            "corollary_cases": fam, "corollary_applicable": applicable,
            "corollary_violations": cor_bad}


def run_criterion(name: str, quick: bool = False) -> CriterionResult:
    if name not in CRITERIA:
        raise KeyError(f"unknown criterion {name!r}; available: {', '.join(CRITERIA)}")
    title, target, fn = CRITERIA[name]
    start = time.perf_counter()
    detail = fn(quick)
    seconds = time.perf_counter() - start
    passed = bool(detail.pop("passed"))
    if target is not None and not quick:
        detail["within_target"] = seconds <= target
        passed &= seconds <= target
    return CriterionResult(name, title, passed, seconds, target, detail)


def run_suite(quick: bool = False, only: list[str] | None = None) -> list[CriterionResult]:
    return [run_criterion(name, quick) for name in (only or list(CRITERIA))]
