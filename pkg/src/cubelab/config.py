"""Runtime limits shared by every module.

The values are plain attributes on a module-level ``settings`` object so
callers (and the CLI) can raise or lower them without touching code.
"""
from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass
class Settings:
    max_dim: int = 24              # largest n for dense 2**n arrays
    max_sparse_dim: int = 62       # vertex indices must fit an int64
    dense_limit: int = 4096        # largest |A| stored as a dense matrix
    jacobi_limit: int = 96         # largest |A| diagonalised by Jacobi in auto mode
    search_budget: int = 10**8     # raw candidate sets for exhaustive search
    default_tol: float = 1e-10


settings = Settings()


def default_threads() -> int:
    """Worker count from ``CUBELAB_THREADS`` (``auto`` or unset means cpu count)."""
    raw = os.environ.get("CUBELAB_THREADS", "auto").strip().lower()
    if raw in ("", "auto"):
        return os.cpu_count() or 1
    value = int(raw)
    if value < 1:
        raise ValueError("CUBELAB_THREADS must be a positive integer or 'auto'")
    return value
