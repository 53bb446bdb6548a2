"""External Laplacian L = nI - E of the subgraph induced by a vertex set.

Small systems are stored densely and solved by Cholesky with one step of
iterative refinement; large ones use a sparse operator and conjugate
gradients.  Eigendecompositions are restricted to the dense path.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .config import settings
from .cube import VertexSet, edge_boundary
from .jacobi import jacobi_eigh

RESIDUAL_TOL = 1e-10
GROUP_TOL = 1e-9


class SingularSystemError(ValueError):
    """L is singular; this happens exactly when A is the whole cube."""


def log_ratio(n: int, size: int) -> float:
    """log2(2**n / size), computed without forming 2**n."""
    return n - math.log2(size)


class InducedSystem:
    """Adjacency ``E`` and external Laplacian ``L`` of the subgraph induced by ``base``.

    Rows and columns follow ``vertex_order`` (ascending vertex index).
    Instances are read-only after construction; the spectrum is computed
    once on demand and cached.
    """

    def __init__(self, base: VertexSet):
        if base.size == 0:
            raise ValueError("cannot build the induced system of an empty set")
        self.base = base
        self.n = base.n
        self.vertex_order = base.indices
        self.size = base.size
        table = base.neighbor_table()
        rows = np.repeat(np.arange(self.size), self.n).reshape(self.size, self.n)
        hit = table >= 0
        self.degrees = hit.sum(axis=1)
        self._rows = rows[hit]
        self._cols = table[hit]
        self.sparse_E = scipy.sparse.csr_matrix(
            (np.ones(self._rows.size), (self._rows, self._cols)), shape=(self.size, self.size))
        self._dense_E = None
        self._spectrum = None
        self._lock = threading.Lock()

    @property
    def is_dense(self) -> bool:
        return self.size <= settings.dense_limit

    @property
    def E(self) -> np.ndarray:
        if not self.is_dense:
            raise ValueError(f"|A| = {self.size} exceeds the dense limit {settings.dense_limit}")
        if self._dense_E is None:
            e = np.zeros((self.size, self.size))
            e[self._rows, self._cols] = 1.0
            e.setflags(write=False)
            self._dense_E = e
        return self._dense_E

    @property
    def L(self) -> np.ndarray:
        return self.n * np.eye(self.size) - self.E

    def apply_E(self, x: np.ndarray) -> np.ndarray:
        return self.sparse_E @ x

    def apply_L(self, x: np.ndarray) -> np.ndarray:
        return self.n * x - self.sparse_E @ x

    def quadratic_form(self, g) -> float:
        """g^T L g for a vector indexed like ``vertex_order``."""
        g = np.asarray(g, dtype=float)
        return float(g @ self.apply_L(g))

    def boundary_form(self) -> int:
        """<L 1, 1>, which equals the edge boundary of the base set."""
        return int(self.size * self.n - self.degrees.sum())

    def spectrum(self, method: str = "auto") -> "SpectralData":
        with self._lock:
            if self._spectrum is None or self._spectrum.method != _resolve(method, self.size):
                self._spectrum = spectrum(self, method)
            return self._spectrum


def build_system(A: VertexSet) -> InducedSystem:
    return InducedSystem(A)


@dataclass(frozen=True)
class UnitSolve:
    x: np.ndarray
    q: float
    residual: float


def solve_unit(sys: InducedSystem) -> UnitSolve:
    """Solve L x = 1 and return x together with q = <L^{-1} 1, 1>."""
    if sys.base.is_full():
        raise SingularSystemError("L is singular for the full cube (A has no boundary)")
    ones = np.ones(sys.size)
    if sys.is_dense:
        factor = scipy.linalg.cho_factor(sys.L, lower=True, check_finite=False)
        x = scipy.linalg.cho_solve(factor, ones, check_finite=False)
        x = x + scipy.linalg.cho_solve(factor, _residual(sys, x), check_finite=False)
    else:
        x = _cg(sys, ones)
        x = x + _cg(sys, _residual(sys, x))
    res = float(np.abs(_residual(sys, x)).max())
    if res > RESIDUAL_TOL:
        raise ArithmeticError(f"residual {res:.3e} above {RESIDUAL_TOL:g} after refinement")
    return UnitSolve(x=x, q=float(math.fsum(x)), residual=res)


def _residual(sys: InducedSystem, x: np.ndarray) -> np.ndarray:
    # 1 - Lx accumulated in extended precision; every entry of E is 0/1
    xl = x.astype(np.longdouble)
    ex = np.zeros(sys.size, dtype=np.longdouble)
    np.add.at(ex, sys._rows, xl[sys._cols])
    return (1.0 - (sys.n * xl - ex)).astype(float)


def _cg(sys: InducedSystem, b: np.ndarray) -> np.ndarray:
    op = scipy.sparse.linalg.LinearOperator((sys.size, sys.size), matvec=sys.apply_L, dtype=float)
    x, info = scipy.sparse.linalg.cg(op, b, rtol=1e-14, atol=0.0, maxiter=100 * sys.size)
    if info < 0:
        raise ArithmeticError("conjugate gradient breakdown")
    return x


def top_eigenvalue(sys: InducedSystem) -> float:
    """Largest eigenvalue of E (its spectral radius, since E is nonnegative)."""
    if sys.size == 1 or sys._rows.size == 0:
        return 0.0
    if sys.is_dense:
        return float(scipy.linalg.eigh(sys.E, eigvals_only=True,
                                       subset_by_index=[sys.size - 1, sys.size - 1])[0])
    vals = scipy.sparse.linalg.eigsh(sys.sparse_E, k=1, which="LA", return_eigenvectors=False)
    return float(vals[0])


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues of E (descending) and the weights alpha_i^2 of the all-ones vector.

    Weights are basis independent: inside each cluster of eigenvalues
    equal to within ``GROUP_TOL`` the whole projection of the all-ones
    vector is credited to the first member and the rest get zero.
    """
    n: int
    size: int
    eigenvalues: np.ndarray
    weights: np.ndarray
    method: str = "jacobi"
    groups: list = field(default_factory=list, repr=False)

    def spectral_sum(self) -> float:
        """sum_i alpha_i^2 / (n - lambda_i), i.e. <L^{-1} 1, 1>."""
        gaps = self.n - self.eigenvalues
        if np.any(gaps <= 0):
            return math.inf
        return float(math.fsum(self.weights / gaps))

    def boundary_sum(self) -> float:
        """sum_i alpha_i^2 (n - lambda_i), i.e. <L 1, 1> = |boundary|."""
        return float(math.fsum(self.weights * (self.n - self.eigenvalues)))

    def grouped(self) -> list[tuple[float, float, int]]:
        """(eigenvalue, total weight, multiplicity) per eigenvalue cluster."""
        return list(self.groups)

    def window_mass(self, lo: float, hi: float) -> float:
        """Fraction of the all-ones mass on eigenvalues of L = n - lambda inside [lo, hi]."""
        gaps = self.n - self.eigenvalues
        inside = (gaps >= lo) & (gaps <= hi)
        return float(self.weights[inside].sum() / self.size)


def _resolve(method: str, size: int) -> str:
    if method == "auto":
        return "jacobi" if size <= settings.jacobi_limit else "lapack"
    if method not in ("jacobi", "lapack"):
        raise ValueError(f"unknown eigensolver {method!r}")
    return method


def spectrum(sys: InducedSystem, method: str = "auto") -> SpectralData:
    if not sys.is_dense:
        raise ValueError(f"full spectra are only computed for |A| <= {settings.dense_limit}")
    method = _resolve(method, sys.size)
    if method == "jacobi":
        w, v = jacobi_eigh(sys.E, tol=1e-12)
    else:
        w, v = np.linalg.eigh(sys.E)
    w, v = w[::-1], v[:, ::-1]
    alpha = v.sum(axis=0)
    raw = alpha * alpha

    weights = np.zeros_like(raw)
    groups = []
    start = 0
    for k in range(1, sys.size + 1):
        if k == sys.size or w[start] - w[k] > GROUP_TOL:
            total = float(raw[start:k].sum())
            weights[start] = total
            groups.append((float(w[start:k].mean()), total, k - start))
            start = k
    return SpectralData(n=sys.n, size=sys.size, eigenvalues=w, weights=weights,
                        method=method, groups=groups)


@dataclass(frozen=True)
class EigenCheck:
    lhs: float
    bound: float
    margin: float
    passed: bool


def eigen_bound(n: int, size: int) -> float:
    """|A| / log2(2^n / |A|)."""
    return size / log_ratio(n, size)


def verify_eigen_inequality(sd: SpectralData, A: VertexSet, tol: float = 1e-9) -> EigenCheck:
    """Check sum alpha_i^2/(n - lambda_i) <= |A| / log2(2^n/|A|)."""
    if A.is_full():
        raise SingularSystemError("the eigenvalue inequality needs A to be a proper subset")
    lhs = sd.spectral_sum()
    bound = eigen_bound(A.n, A.size)
    return EigenCheck(lhs=lhs, bound=bound, margin=bound - lhs, passed=lhs <= bound + tol)


def rayleigh_check(sys: InducedSystem, g, tol: float = 1e-10) -> tuple[float, float, bool]:
    """g^T L g >= r (1^T g)^2 with r = log2(2^n/|A|) / |A|.

    Returns ``(lhs, rhs, passed)``.  The comparison is made relative to the
    size of the two sides.
    """
    g = np.asarray(g, dtype=float)
    r = log_ratio(sys.n, sys.size) / sys.size
    lhs = sys.quadratic_form(g)
    rhs = r * float(g.sum()) ** 2
    return lhs, rhs, lhs - rhs >= -tol * max(1.0, abs(lhs), abs(rhs))


def power_series_partial_sums(sys: InducedSystem, K: int) -> np.ndarray:
    """Partial sums (1/n) sum_{k<=K} <E^k 1, 1> / n^k for K = 0..K."""
    v = np.ones(sys.size)
    out = np.empty(K + 1)
    acc = 0.0
    for k in range(K + 1):
        acc += v.sum() / sys.n
        out[k] = acc
        v = sys.apply_E(v) / sys.n
    return out


@dataclass(frozen=True)
class DegreeReport:
    applicable: bool
    eps: float
    eps_prime: float
    delta: float
    log_ratio: float
    mean: float
    second_moment: float
    window: tuple[float, float]
    probability: float
    budget: float
    passed: bool
    outdegrees: np.ndarray = field(repr=False)


def measured_eps_prime(A: VertexSet) -> float:
    """Smallest eps' for which A is nearly isoperimetric with eps = (eps'/2n) log2(2^n/|A|)."""
    L = log_ratio(A.n, A.size)
    if L <= 0:
        raise ValueError("the full cube has no isoperimetric excess")
    eps = edge_boundary(A) / (A.size * L) - 1.0
    return max(eps, 0.0) * 2 * A.n / L


def degree_concentration(sys: InducedSystem, eps_prime: float, delta: float) -> DegreeReport:
    """Outdegree concentration for nearly isoperimetric sets.

    When ``|boundary| <= (1 + eps) |A| log2(2^n/|A|)`` with
    ``eps = (eps'/2n) log2(2^n/|A|)``, at least a ``1 - eps'/delta^2``
    fraction of members should have outdegree inside
    ``[(1-delta) L, (1+eps)(1+delta) L]``.  A set violating the hypothesis
    gives ``applicable=False`` rather than an error.
    """
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    n, size = sys.n, sys.size
    L = log_ratio(n, size)
    outdeg = n - sys.degrees
    boundary = int(outdeg.sum())
    eps = eps_prime / (2 * n) * L
    applicable = bool(L > 0 and boundary <= (1 + eps) * size * L * (1 + 1e-12))
    lo, hi = (1 - delta) * L, (1 + eps) * (1 + delta) * L
    inside = (outdeg >= lo - 1e-12) & (outdeg <= hi + 1e-12)
    prob = float(inside.mean())
    budget = 1.0 - eps_prime / delta ** 2
    return DegreeReport(
        applicable=applicable, eps=eps, eps_prime=eps_prime, delta=delta, log_ratio=L,
        mean=boundary / size, second_moment=float(np.mean(outdeg.astype(float) ** 2)),
        window=(lo, hi), probability=prob, budget=budget,
        passed=(not applicable) or prob >= budget - 1e-12, outdegrees=outdeg)
