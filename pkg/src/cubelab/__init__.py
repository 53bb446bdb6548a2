"""Edge isoperimetry, induced spectra and random-walk exit times on the discrete cube."""
from .cube import (CubeFunction, VertexSet, dirichlet_form, edge_boundary, is_downward_monotone,
                   make_ball, make_subcube, monotonize, neighbors, shift_direction)
from .exit_time import exit_bound, mean_exit_exact, mean_exit_mc, survival_curve, walk_count
from .jacobi import jacobi_eigh
from .literals import parse_function, parse_set
from .search import SearchTask, canonicalize, search
from .spectral import build_system, degree_concentration, solve_unit, verify_eigen_inequality

__version__ = "0.1.0"

__all__ = [
    "CubeFunction", "VertexSet", "dirichlet_form", "edge_boundary", "is_downward_monotone",
    "make_ball", "make_subcube", "monotonize", "neighbors", "shift_direction",
    "exit_bound", "mean_exit_exact", "mean_exit_mc", "survival_curve", "walk_count",
    "jacobi_eigh", "parse_function", "parse_set", "SearchTask", "canonicalize", "search",
    "build_system", "degree_concentration", "solve_unit", "verify_eigen_inequality",
]
