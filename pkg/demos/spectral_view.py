"""The induced adjacency matrix of a set and the spectral form of the exit-time bound."""
import numpy as np

from cubelab import build_system, edge_boundary, solve_unit, verify_eigen_inequality
from cubelab.sampling import adjacent_swap, random_set
from cubelab.spectral import degree_concentration, measured_eps_prime

rng = np.random.default_rng(0)
A = random_set(6, rng)
sys = build_system(A)
sd = sys.spectrum()
print("|A| =", A.size, " top eigenvalue", sd.eigenvalues[0])
print("sum of weights", sd.weights.sum(), "(= |A|)")
print("sum w (n - lam)", sd.boundary_sum(), " boundary", edge_boundary(A))
print("sum w / (n - lam)", sd.spectral_sum(), " q from the solve", solve_unit(sys).q)
chk = verify_eigen_inequality(sd, A)
print("bound", chk.bound, "margin", chk.margin)

# where the weight sits, eigenvalue by eigenvalue
for lam, w, mult in sd.grouped()[:6]:
    print(f"  lambda={lam:+.4f}  x{mult}  weight={w:.4f}")

# a subcube with one member moved next door is almost regular
B = adjacent_swap(8, 4, rng)
eps_prime = measured_eps_prime(B)
rep = degree_concentration(build_system(B), eps_prime, 1.0)
print("eps' =", round(eps_prime, 4), " window", rep.window, " inside", rep.probability,
      " budget", rep.budget)
