"""Numeric checks for the functional edge-isoperimetric inequality and its proof chain.

Logarithms are base 2 everywhere except the natural-log baselines
(``baseline_weak_ls_ln`` and ``baseline_log_sobolev``).  Every check
returns a :class:`CheckResult` whose ``margin`` is ``lhs - rhs``; a check
passes when ``margin >= -tol``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .cube import CubeFunction, VertexSet, dirichlet_form, edge_boundary

DEFAULT_TOL = 1e-10


@dataclass
class CheckResult:
    check: str
    lhs: float
    rhs: float
    tol: float
    context: dict[str, Any] = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        return bool(self.margin >= -self.tol)

    def to_dict(self) -> dict[str, Any]:
        return {"check": self.check, "inputs": self.context, "lhs": self.lhs, "rhs": self.rhs,
                "margin": self.margin, "passed": self.passed, "tol": self.tol}


class SupportError(ValueError):
    pass


def _log_ratio(n: int, size: float) -> float:
    return n - math.log2(size)


# -- functional inequality and baselines -------------------------------------

def isoperimetric_rhs(n: int, size: int, abs_sum: float) -> float:
    """(2 / (2^n |A|)) log2(2^n/|A|) (sum |g|)^2."""
    return 2.0 / (2.0 ** n * size) * _log_ratio(n, size) * abs_sum ** 2


def verify_functional_isoperimetry(g: CubeFunction, A: VertexSet,
                                   tol: float = DEFAULT_TOL) -> CheckResult:
    if A.n != g.n:
        raise ValueError("function and set live in different dimensions")
    if A.is_empty():
        raise ValueError("A must be nonempty")
    outside = np.flatnonzero((g.values != 0) & ~A.mask)
    if outside.size:
        v = int(outside[0])
        raise SupportError(f"g is nonzero at vertex {v} (value {g.values[v]!r}) outside A")
    lhs = dirichlet_form(g)
    rhs = isoperimetric_rhs(g.n, A.size, g.abs_sum())
    return CheckResult("isop", lhs, rhs, tol, {"n": g.n, "size": A.size})


def _moments(g: CubeFunction) -> tuple[float, float]:
    m2 = float(np.mean(g.values ** 2))
    m1 = float(np.mean(np.abs(g.values)))
    if m2 == 0:
        raise ValueError("the baselines are undefined for the zero function")
    return m2, m1


def baseline_weak_ls(g: CubeFunction, tol: float = DEFAULT_TOL) -> CheckResult:
    """E(g,g) >= 2 E[g^2] log2(E[g^2] / E[|g|]^2).

    On an indicator this base-2 form is the edge-isoperimetric inequality
    rescaled by 2/2^n.
    """
    m2, m1 = _moments(g)
    rhs = 2 * m2 * math.log2(m2 / m1 ** 2)
    return CheckResult("weak-ls", dirichlet_form(g), rhs, tol, {"n": g.n})


def baseline_weak_ls_ln(g: CubeFunction, tol: float = DEFAULT_TOL) -> CheckResult:
    """E(g,g) >= 2 E[g^2] ln(E[g^2] / E[|g|]^2), valid for every g."""
    m2, m1 = _moments(g)
    rhs = 2 * m2 * math.log(m2 / m1 ** 2)
    return CheckResult("weak-ls-ln", dirichlet_form(g), rhs, tol, {"n": g.n})


def baseline_log_sobolev(g: CubeFunction, tol: float = DEFAULT_TOL) -> CheckResult:
    """E(g,g) >= 2 Ent(g^2) with this Dirichlet normalisation (sharp constant)."""
    g2 = g.values ** 2
    mean = float(g2.mean())
    if mean == 0:
        raise ValueError("entropy of the zero function is undefined")
    nz = g2 > 0
    ent = float(np.sum(g2[nz] * np.log(g2[nz])) / g2.size - mean * math.log(mean))
    return CheckResult("log-sobolev", dirichlet_form(g), 2 * ent, tol, {"n": g.n})


# -- concentration lemma --------------------------------------------------------

def lemma32_check(values, weights, tol: float = DEFAULT_TOL) -> CheckResult:
    """Var(g) <= eps E[g] max(g), with eps = E[1/g] E[g] - 1 measured from the data."""
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if values.shape != weights.shape or values.ndim != 1 or values.size == 0:
        raise ValueError("values and weights must be matching nonempty 1-d sequences")
    if np.any(values <= 0):
        raise ValueError(f"values must be strictly positive, got min {values.min()!r}")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be a probability vector")
    mean = float(weights @ values)
    eps = float(weights @ (1.0 / values)) * mean - 1.0
    var = float(weights @ (values - mean) ** 2)
    rhs = eps * mean * float(values.max())
    # lhs/rhs swapped so that margin >= 0 means the lemma holds
    return CheckResult("lemma32", rhs, var, tol, {"eps": eps, "size": int(values.size)})


def lemma32_batch(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Margins eps E[g] max(g) - Var(g) for a batch of rows."""
    mean = np.sum(weights * values, axis=1)
    eps = np.sum(weights / values, axis=1) * mean - 1.0
    var = np.sum(weights * (values - mean[:, None]) ** 2, axis=1)
    return eps * mean * values.max(axis=1) - var


# -- the function f(t) = (1/t) log2(2^(n-1)/t) -------------------------------------

def f_eval(t, n: int):
    """f(t) = (1/t) log2(2^(n-1) / t), for the (n-1)-dimensional halves of the n-cube."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("f is defined for t > 0")
    out = ((n - 1) - np.log2(t)) / t
    return float(out) if out.ndim == 0 else out


def f_identity_check(t: float, beta: float, n: int, tol: float = 1e-12) -> CheckResult:
    """f(beta t) = f(t)/beta + (1/beta) log2(1/beta) / t, as a relative residual."""
    if t <= 0 or beta <= 0:
        raise ValueError("need t > 0 and beta > 0")
    if beta * t >= 2 ** (n - 1) or t >= 2 ** (n - 1):
        raise ValueError("t and beta t must stay below 2^(n-1)")
    lhs = f_eval(beta * t, n)
    rhs = f_eval(t, n) / beta + math.log2(1 / beta) / (beta * t)
    rel = abs(lhs - rhs) / max(1.0, abs(lhs))
    return CheckResult("f-identity", -rel, 0.0, tol, {"t": t, "beta": beta, "n": n,
                                                       "f_beta_t": lhs, "identity_rhs": rhs})


def f_shape_check(n: int, points: int = 1000) -> tuple[bool, bool]:
    """Finite-difference signs of f on a uniform grid of (0, 2^(n-1)).

    Returns ``(decreasing, convex)``.  The relative slack absorbs rounding
    in second differences.
    """
    t = np.linspace(0, 2 ** (n - 1), points + 2)[1:-1]
    y = f_eval(t, n)
    d1 = np.diff(y)
    d2 = np.diff(y, 2)
    scale = np.abs(y).max()
    return bool(np.all(d1 < 0)), bool(np.all(d2 >= -1e-12 * scale))


# -- one induction step ---------------------------------------------------------

@dataclass
class InductionInstance:
    """Data of one induction step for a monotone g constant on A1 and on A0 minus A1.

    ``t0 = |A0|``, ``t1 = |A1|``; ``s0``, ``s1`` are the sums of g0 and g1;
    ``alpha`` and ``gamma`` are the values of g0 on A1 and on A0 minus A1,
    ``beta_val`` the value of g1 on A1.
    """
    n: int
    t0: float
    t1: float
    s0: float
    s1: float
    alpha: float
    beta_val: float
    gamma: float

    def __post_init__(self):
        if not 1 <= self.t1 <= self.t0 <= 2 ** (self.n - 1):
            raise ValueError(f"need 1 <= t1 <= t0 <= 2^(n-1), got t0={self.t0}, t1={self.t1}")
        if self.s0 <= 0 or self.s1 <= 0:
            raise ValueError("s0 and s1 must be positive")
        scale = max(1.0, abs(self.s0), abs(self.s1))
        if abs(self.t1 * self.beta_val - self.s1) > 1e-12 * scale:
            raise ValueError("constraint t1 * beta = s1 violated")
        if abs(self.t1 * self.alpha + (self.t0 - self.t1) * self.gamma - self.s0) > 1e-12 * scale:
            raise ValueError("constraint t1 * alpha + (t0 - t1) * gamma = s0 violated")

    @classmethod
    def from_alpha(cls, n, t0, t1, s0, s1, alpha) -> "InductionInstance":
        """Solve the two constraints for beta and gamma (gamma is irrelevant when t0 == t1)."""
        beta_val = s1 / t1
        if t0 == t1:
            alpha, gamma = s0 / t1, 0.0
        else:
            gamma = (s0 - t1 * alpha) / (t0 - t1)
        return cls(n, t0, t1, s0, s1, alpha, beta_val, gamma)

    @property
    def quadratic_term(self) -> float:
        return (self.t1 * (self.alpha - self.beta_val) ** 2
                + (self.t0 - self.t1) * self.gamma ** 2)


def _step_rhs(n, t0, t1, s0, s1) -> float:
    return 0.5 * f_eval((t0 + t1) / 2, n) * (s0 + s1) ** 2


def induction_step_check(inst: InductionInstance, tol: float = DEFAULT_TOL) -> CheckResult:
    n = inst.n
    lhs = f_eval(inst.t0, n) * inst.s0 ** 2 + f_eval(inst.t1, n) * inst.s1 ** 2 + inst.quadratic_term
    rhs = _step_rhs(n, inst.t0, inst.t1, inst.s0, inst.s1)
    return CheckResult("induction", lhs, rhs, tol,
                       {"n": n, "t0": inst.t0, "t1": inst.t1, "s0": inst.s0, "s1": inst.s1,
                        "alpha": inst.alpha})


def optimal_alpha(t0: float, t1: float, s0: float, s1: float) -> float:
    """Minimiser over alpha of the quadratic term once beta and gamma are eliminated."""
    return (s0 + s1 / t1 * (t0 - t1)) / t0


def reduced_check(t0: float, t1: float, s0: float, s1: float, n: int,
                  tol: float = DEFAULT_TOL) -> CheckResult:
    """Induction step with the quadratic term minimised: (s0 - s1)^2 / t0."""
    if t0 <= 0:
        raise ValueError("t0 must be positive")
    if not 1 <= t1 <= t0 <= 2 ** (n - 1):
        raise ValueError(f"need 1 <= t1 <= t0 <= 2^(n-1), got t0={t0}, t1={t1}")
    lhs = f_eval(t0, n) * s0 ** 2 + f_eval(t1, n) * s1 ** 2 + (s0 - s1) ** 2 / t0
    rhs = _step_rhs(n, t0, t1, s0, s1)
    return CheckResult("reduced", lhs, rhs, tol, {"n": n, "t0": t0, "t1": t1, "s0": s0, "s1": s1})


@dataclass(frozen=True)
class QuadraticR:
    """P(R) = a R^2 + b R + c, the reduced step as a function of R = s0/s1."""
    a: float
    b: float
    c: float

    @property
    def discriminant(self) -> float:
        return self.b ** 2 - 4 * self.a * self.c

    def __call__(self, R):
        return self.a * R ** 2 + self.b * R + self.c


def _check_pair(x: float, y: float, n: int, strict: bool = True) -> None:
    ok = 1 <= y < x <= 2 ** (n - 1) if strict else 1 <= y <= x <= 2 ** (n - 1)
    if not ok:
        raise ValueError(f"need 1 <= {'y < x' if strict else 'y <= x'} <= 2^(n-1), got x={x}, y={y}")


def quadratic_in_R(t0: float, t1: float, n: int) -> QuadraticR:
    _check_pair(t0, t1, n)
    f0, f1, fm = f_eval(t0, n), f_eval(t1, n), f_eval((t0 + t1) / 2, n)
    a = (2 * t0 * f0 + 2 - t0 * fm) / (2 * t0)
    b = -2 / t0 - fm
    c = f1 + 1 / t0 - fm / 2
    return QuadraticR(a, b, c)


def discriminant_check(t0: float, t1: float, n: int, a_tol: float = 1e-12,
                       d_tol: float = 1e-10) -> tuple[CheckResult, CheckResult]:
    """a >= 0 and b^2 - 4ac <= 0 for the quadratic in R."""
    P = quadratic_in_R(t0, t1, n)
    ctx = {"t0": t0, "t1": t1, "n": n}
    return (CheckResult("quadratic-a", P.a, 0.0, a_tol, ctx),
            CheckResult("quadratic-discriminant", 0.0, P.discriminant, d_tol, ctx))


def technical_check(x: float, y: float, n: int, tol: float = DEFAULT_TOL) -> CheckResult:
    """2x f(x) f(y) + 2(f(x)+f(y)) >= x f(m)(f(x)+f(y)) + 4 f(m), m = (x+y)/2."""
    _check_pair(x, y, n)
    fx, fy, fm = f_eval(x, n), f_eval(y, n), f_eval((x + y) / 2, n)
    lhs = 2 * x * fx * fy + 2 * (fx + fy)
    rhs = x * fm * (fx + fy) + 4 * fm
    return CheckResult("technical", lhs, rhs, tol, {"x": x, "y": y, "n": n})


def set_isoperimetry_check(A: VertexSet, tol: float = 1e-9) -> CheckResult:
    """|boundary(A)| >= |A| log2(2^n/|A|) for a nonempty set."""
    if A.is_empty():
        raise ValueError("A must be nonempty")
    lhs = edge_boundary(A)
    rhs = A.size * _log_ratio(A.n, A.size)
    return CheckResult("boundary", float(lhs), rhs, tol, {"n": A.n, "size": A.size})


# -- coefficients in beta ----------------------------------------------------------

@dataclass(frozen=True)
class BetaCoefficients:
    beta: Any
    A: Any
    B: Any
    C: Any
    D: Any
    E: Any
    F: Any


def coefficients_ABCDEF(beta) -> BetaCoefficients:
    """The six coefficients of the linear-in-z form, log base 2 (vectorised over beta)."""
    b = np.asarray(beta, dtype=float)
    if np.any((b <= 0) | (b >= 1)):
        raise ValueError("beta must lie in (0, 1)")
    lb = -np.log2(b)                      # log2(1/beta)
    lm = 1.0 - np.log2(1.0 + b)           # log2(2/(1+beta))
    coef = dict(
        A=(1 - b) ** 2 / (2 * b * (1 + b)),
        B=lb / (2 * b) - 2 * lm / (1 + b),
        C=(1 - b) / b,
        D=lb / b,
        E=(2 + 2 * b) / b,
        F=2 * lb / b + 8,
    )
    if b.ndim == 0:
        coef = {k: float(v) for k, v in coef.items()}
        return BetaCoefficients(float(b), **coef)
    return BetaCoefficients(b, **coef)


def ae_c2_check(beta: float, rel_tol: float = 1e-12) -> CheckResult:
    """AE = C^2, which makes the reduced inequality linear in z (relative tolerance)."""
    k = coefficients_ABCDEF(beta)
    ae, c2 = k.A * k.E, k.C ** 2
    ctx = {"beta": k.beta, "A": k.A, "B": k.B, "C": k.C, "D": k.D, "E": k.E, "F": k.F}
    # two-sided: report -|AE - C^2| against 0 so that passed means agreement
    return CheckResult("coefficients", -abs(ae - c2), 0.0, rel_tol * max(1.0, c2), ctx)


def f_identity_grid(n: int, grid: int, tol: float = 1e-12) -> list[CheckResult]:
    """f(beta t) - f(t) identity at t = 2^(n-1) k/(grid+1), beta = k/(grid+1)."""
    top = 2.0 ** (n - 1)
    return [f_identity_check(top * k / (grid + 1), k / (grid + 1), n, tol)
            for k in range(1, grid + 1)]


def afbe_minus_2cd(beta):
    k = coefficients_ABCDEF(beta)
    return k.A * k.F + k.B * k.E - 2 * k.C * k.D


def bf_minus_d2(beta):
    k = coefficients_ABCDEF(beta)
    return k.B * k.F - k.D ** 2


def _afbe_terms(beta):
    k = coefficients_ABCDEF(beta)
    return np.abs(k.A * k.F) + np.abs(k.B * k.E) + np.abs(2 * k.C * k.D)


def _bfd2_terms(beta):
    k = coefficients_ABCDEF(beta)
    return np.abs(k.B * k.F) + k.D ** 2


def reduced_afbe(beta):
    """beta log2(1/beta) + (1-beta)^2 - (1+beta) log2(2/(1+beta))."""
    b = np.asarray(beta, dtype=float)
    return b * -np.log2(b) + (1 - b) ** 2 - (1 + b) * (1 - np.log2(1 + b))


def reduced_bfd2(beta):
    """(beta + log2(1+beta)) log2(1/beta) - 4 beta log2(2/(1+beta))."""
    b = np.asarray(beta, dtype=float)
    return (b + np.log2(1 + b)) * -np.log2(b) - 4 * b * (1 - np.log2(1 + b))


# the reduced forms equal the coefficient forms times beta(1+beta)/4
_LEMMAS = {
    "afbe-2cd": (afbe_minus_2cd, reduced_afbe, _afbe_terms),
    "bf-d2": (bf_minus_d2, reduced_bfd2, _bfd2_terms),
}
LEMMA_ALIASES = {"AFBE_2CD": "afbe-2cd", "BF_D2": "bf-d2", "afbe_2cd": "afbe-2cd",
                 "bf_d2": "bf-d2"}


@dataclass
class ScanReport:
    lemma: str
    points: int
    min: float
    argmin: float
    violations: int
    tol: float
    reduced_min: float
    reduced_agreement: float
    endpoint_limits: dict[str, list[float]]

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.reduced_agreement <= 1e-10

    def to_dict(self) -> dict[str, Any]:
        return {"check": "beta-scan", "lemma": self.lemma, "points": self.points,
                "min": self.min, "argmin": self.argmin, "violations": self.violations,
                "tol": self.tol, "reduced_min": self.reduced_min,
                "reduced_agreement": self.reduced_agreement,
                "endpoint_limits": self.endpoint_limits, "passed": self.passed}


def beta_grid(points: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Interior grid beta_k = k/(points+1), k = 1..points (slice [start, stop))."""
    stop = points if stop is None else stop
    return np.arange(start + 1, stop + 1, dtype=float) / (points + 1)


def beta_lemma_scan(which: str, points: int = 10**6, tol: float = 1e-12,
                    workers: int = 1, chunk: int = 1 << 17) -> ScanReport:
    """Evaluate one of the two beta lemmas on a uniform interior grid.

    The grid is split into fixed chunks; each chunk reports its minimum and
    violation count and the chunks merge in grid order, so the result does
    not depend on ``workers``.  Agreement with the reduced form is
    ``|beta(1+beta)/4 * g(beta) - reduced(beta)|`` divided by the same
    scale factor applied to the sum of the absolute coefficient products
    (at least 1): near beta = 0 the products reach 1e14 and cancel, so an
    absolute comparison would only measure rounding.
    """
    which = LEMMA_ALIASES.get(which, which)
    if which not in _LEMMAS:
        raise ValueError(f"unknown lemma {which!r}; choose from {sorted(_LEMMAS)}")
    if points < 2:
        raise ValueError("a scan needs at least two points")
    full, reduced, terms = _LEMMAS[which]

    def run(lo):
        b = beta_grid(points, lo, min(lo + chunk, points))
        g = full(b)
        r = reduced(b)
        k = int(np.argmin(g))
        w = b * (1 + b) / 4
        rel = np.abs(w * g - r) / np.maximum(1.0, w * terms(b))
        return (float(g[k]), float(b[k]), int(np.sum(g < -tol)), float(r.min()), float(rel.max()))

    starts = range(0, points, chunk)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]
    best = min(range(len(parts)), key=lambda i: (parts[i][0], i))

    eps = [10.0 ** -k for k in range(2, 9)]
    limits = {
        "beta->0": [float(reduced(e)) for e in eps],
        "beta->1": [float(reduced(1 - e)) for e in eps],
    }
    return ScanReport(lemma=which, points=points, min=parts[best][0], argmin=parts[best][1],
                      violations=sum(p[2] for p in parts), tol=tol,
                      reduced_min=min(p[3] for p in parts),
                      reduced_agreement=max(p[4] for p in parts), endpoint_limits=limits)


def linear_in_z_defect(beta: float, z: np.ndarray) -> float:
    """Largest second difference of (Az+B)(Ez+F) - (Cz+D)^2 over an evenly spaced z grid."""
    k = coefficients_ABCDEF(beta)
    z = np.asarray(z, dtype=float)
    h = (k.A * z + k.B) * (k.E * z + k.F) - (k.C * z + k.D) ** 2
    return float(np.max(np.abs(np.diff(h, 2)))) if z.size > 2 else 0.0


# -- the Delta form ---------------------------------------------------------------

def delta_inequality_check(x: float, y: float, n: int, tol: float = DEFAULT_TOL) -> CheckResult:
    """Delta(x,y) >= x (f(x)-f(y))^2 / (2x(f(x)+f(y)) + 8), Delta the midpoint convexity gap.

    The context carries the same inequality evaluated through the
    ``(z, A..F)`` reduction with ``beta = y/x`` and ``z = x f(x)``, and the
    verdict of the equivalent undivided form.
    """
    _check_pair(x, y, n)
    fx, fy, fm = f_eval(x, n), f_eval(y, n), f_eval((x + y) / 2, n)
    delta = (fx + fy) / 2 - fm
    rhs = x * (fx - fy) ** 2 / (2 * x * (fx + fy) + 8)
    beta = y / x
    k = coefficients_ABCDEF(beta)
    z = x * fx
    via_lhs = k.A * z + k.B
    via_rhs = (k.C * z + k.D) ** 2 / (k.E * z + k.F)
    ctx = {"x": x, "y": y, "n": n, "delta": delta, "beta": beta, "z": z,
           "reduced_lhs": via_lhs / x, "reduced_rhs": via_rhs / x,
           "technical_passed": technical_check(x, y, n, tol).passed}
    return CheckResult("delta", delta, rhs, tol, ctx)


def dyadic_pairs(n: int):
    """(x, y) = (2^i, 2^j) with 0 <= j < i <= n - 1."""
    for i in range(n):
        for j in range(i):
            yield float(2 ** i), float(2 ** j)
