"""The induction step, reduced to one variable, checked numerically."""
from cubelab import inequalities as iq

# the quadratic in R = s0/s1 never dips below zero
for t0, t1, n in [(2, 1, 3), (8, 1, 5), (64, 32, 8)]:
    P = iq.quadratic_in_R(t0, t1, n)
    print(f"t0={t0:3d} t1={t1:3d} n={n}  a={P.a:.4f}  disc={P.discriminant:.4f}")

# coefficient table at beta = 1/2 and the two lemmas
k = iq.coefficients_ABCDEF(0.5)
print("A..F at 1/2:", [round(v, 4) for v in (k.A, k.B, k.C, k.D, k.E, k.F)])
print("AF+BE-2CD", iq.afbe_minus_2cd(0.5), " BF-D^2", iq.bf_minus_d2(0.5))
for lemma in ("afbe-2cd", "bf-d2"):
    rep = iq.beta_lemma_scan(lemma, points=10**6)
    print(lemma, "min", rep.min, "at", rep.argmin, "violations", rep.violations)

# Delta(x, y) against its lower bound on dyadic points
worst = min(iq.delta_inequality_check(x, y, 12).margin for x, y in iq.dyadic_pairs(12))
print("smallest Delta margin for n=12:", worst)
