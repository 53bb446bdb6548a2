"""Cyclic Jacobi eigensolver for dense symmetric matrices.

Rotations are applied in round-robin (tournament) order: each round
annihilates ``m // 2`` disjoint off-diagonal pairs at once, so a round is
one vectorised row update plus one column update.  A sweep is ``m - 1``
rounds and visits every pair exactly once.
"""
from __future__ import annotations

import numpy as np


class EigenConvergenceError(RuntimeError):
    """Jacobi sweeps hit the iteration cap before the off-diagonal norm fell below tolerance."""


def _tournament(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    players = list(range(m + (m % 2)))  # odd sizes get a bye slot
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        p, q = [], []
        for k in range(size // 2):
            a, b = players[k], players[size - 1 - k]
            if a < m and b < m:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 60):
    """Eigenvalues and orthonormal eigenvectors of the symmetric matrix ``a``.

    Iterates until the off-diagonal Frobenius norm is at most
    ``tol * ||a||_F``.  Returns ``(w, V)`` with ``w`` ascending and the
    eigenvectors in the columns of ``V``, like :func:`numpy.linalg.eigh`.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(a, a.T, rtol=0, atol=1e-14 * max(1.0, np.abs(a).max(initial=0))):
        raise ValueError("matrix is not symmetric")
    m = a.shape[0]
    v = np.eye(m)
    scale = np.linalg.norm(a)
    target = tol * scale
    rounds = _tournament(m) if m > 1 else []

    for _ in range(max_sweeps + 1):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= target:
            w = np.diag(a).copy()
            order = np.argsort(w, kind="stable")
            return w[order], v[:, order]
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            with np.errstate(over="ignore"):
                # a subnormal apq overflows theta to inf; t = 0.5/theta is then 0
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            big = np.abs(theta) > 1e150
            theta_safe = np.where(big, 1.0, theta)
            t = np.sign(theta_safe) / (np.abs(theta_safe) + np.sqrt(theta_safe ** 2 + 1.0))
            t[big] = 0.5 / theta[big]
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            ap, aq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * ap - s * aq
            a[:, q] = s * ap + c * aq
            ap, aq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * ap - s[:, None] * aq
            a[q, :] = s[:, None] * ap + c[:, None] * aq
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
    raise EigenConvergenceError(
        f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e}, "
        f"target {target:.3e})")
