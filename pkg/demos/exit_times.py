"""Mean exit times: subcubes against the bound, and a few other shapes."""
import numpy as np

from cubelab import VertexSet, make_ball, make_subcube, mean_exit_exact, mean_exit_mc

# a d-subcube of {0,1}^n keeps the walk for n/(n-d) steps on average
for n, d in [(4, 2), (6, 3), (10, 9)]:
    r = mean_exit_exact(make_subcube(n, range(d)))
    print(f"n={n:2d} d={d}  exact={r.exact:.12f}  n/(n-d)={n / (n - d):.12f}  equality={r.equality}")

# the L-shape in the square: q = 5, so the mean exit time is 10/3
L = VertexSet(2, [0, 1, 3])
r = mean_exit_exact(L, survival_steps=8)
print("L-shape exact", r.exact, "bound", r.bound)
print("survival", np.round(r.survival, 4))

# balls are far from the bound
for n in (5, 8, 11):
    r = mean_exit_exact(make_ball(n, 0, 1))
    print(f"ball n={n:2d} |A|={r.size:3d}  exact={r.exact:.4f}  bound={r.bound:.4f}")

# the simulation agrees with the linear solve
mc = mean_exit_mc(make_subcube(6, range(3)), trials=200_000, seed=1)
print(f"Monte Carlo {mc.estimate:.4f} +- {mc.stderr:.4f} (exact 2)")
