"""Downward shifts lower the Dirichlet form and end in a monotone function."""
import numpy as np

from cubelab import CubeFunction, dirichlet_form, is_downward_monotone, monotonize, shift_direction
from cubelab.inequalities import verify_functional_isoperimetry

g = CubeFunction([0, 1, 1, 0])
print("g", g.values, "E(g) =", dirichlet_form(g))
h = shift_direction(g, 1)
print("shift 1", h.values, "E =", dirichlet_form(h))

rng = np.random.default_rng(4)
g = CubeFunction(np.where(rng.random(64) < 0.4, rng.random(64), 0.0))
m = monotonize(g)
print("monotone after shifting:", is_downward_monotone(m))
print("E before", round(dirichlet_form(g), 4), "after", round(dirichlet_form(m), 4))
before = verify_functional_isoperimetry(g, g.support())
after = verify_functional_isoperimetry(m, m.support())
print("isoperimetric margin before", round(before.margin, 4), "after", round(after.margin, 4))
