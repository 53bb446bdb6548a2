"""Exhaustive search up to cube symmetry, and the length-2 walk counterexample."""
from cubelab import SearchTask, search
from cubelab.search import canonical_classes, survival_comparison

for n, size in [(3, 4), (4, 4), (4, 8), (4, 6)]:
    r = search(SearchTask(n, size))
    print(f"n={n} |A|={size}: best {r.best_value:.4f}, bound {r.bound:.4f}, "
          f"orbits {r.certificate['orbits']}, best set {r.best_set.to_hex()}")

print("orbits of 4-sets in Q5:", len(canonical_classes(5, 4)[0]))

for d in (2, 4, 5):
    c = survival_comparison(d, 2)
    print(f"d={d}: subcube {c.subcube_walks} vs ball {c.ball_walks} -> {c.winner}")
