import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from cubelab import inequalities as iq
from cubelab.cube import CubeFunction, VertexSet, edge_boundary, make_subcube, monotonize
from cubelab.sampling import (random_distribution, random_function, random_function_on,
                              random_set, random_step_params)


def golden_min(fn, lo, hi, iters=200):
    """Golden-section minimiser, used as an independent oracle for the optimal alpha."""
    r = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - r * (b - a), a + r * (b - a)
    for _ in range(iters):
        if fn(c) < fn(d):
            b = d
        else:
            a = c
        c, d = b - r * (b - a), a + r * (b - a)
    return (a + b) / 2


# -- CheckResult -----------------------------------------------------------------

def test_checkresult_sign_convention():
    assert iq.CheckResult("x", 1.0, 1.0 + 5e-11, 1e-10).passed
    assert not iq.CheckResult("x", 1.0, 1.0 + 2e-10, 1e-10).passed
    d = iq.CheckResult("x", 2.0, 1.5, 1e-10, {"n": 3}).to_dict()
    assert d == {"check": "x", "inputs": {"n": 3}, "lhs": 2.0, "rhs": 1.5, "margin": 0.5,
                 "passed": True, "tol": 1e-10}


# -- functional isoperimetry -----------------------------------------------------

def test_isop_subcube_equality():
    for n, d in [(3, 1), (5, 3), (8, 4)]:
        A = make_subcube(n, range(d))
        c = iq.verify_functional_isoperimetry(CubeFunction.indicator(A), A)
        assert c.passed and abs(c.margin) <= 1e-12


def test_isop_zero_and_support_error():
    A = VertexSet(3, [0, 1])
    assert iq.verify_functional_isoperimetry(CubeFunction.zeros(3), A).margin == 0
    g = CubeFunction([1, 0, 0, 0, 0, 2.5, 0, 0])
    with pytest.raises(iq.SupportError, match="vertex 5"):
        iq.verify_functional_isoperimetry(g, A)


def test_isop_indicator_rhs_is_rescaled_set_bound():
    rng = np.random.default_rng(1)
    for n in range(1, 8):
        A = random_set(n, rng)
        c = iq.verify_functional_isoperimetry(CubeFunction.indicator(A), A)
        assert c.rhs == pytest.approx(2 / 2 ** n * A.size * math.log2(2 ** n / A.size), rel=1e-14)
        assert c.lhs == pytest.approx(2 / 2 ** n * edge_boundary(A), rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2 ** 32 - 1), st.booleans(), st.booleans())
def test_isop_property(n, seed, signed, mono):
    rng = np.random.default_rng(seed)
    A = random_set(n, rng)
    g = random_function_on(A, rng, signed=signed)
    if mono:
        g = monotonize(g)
        A = g.support() if g.support().size else A
    assert iq.verify_functional_isoperimetry(g, A).passed


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2 ** 32 - 1))
def test_monotonize_never_increases_isop_margin(n, seed):
    # rhs depends on |supp g| and sum |g| only, both preserved; E can only drop
    rng = np.random.default_rng(seed)
    A = random_set(n, rng)
    g = random_function_on(A, rng)
    assume(g.support().size > 0)
    before = iq.verify_functional_isoperimetry(g, g.support())
    h = monotonize(g)
    after = iq.verify_functional_isoperimetry(h, h.support())
    assert after.rhs == pytest.approx(before.rhs, rel=1e-12)
    assert after.margin <= before.margin + 1e-12
    assert after.passed


def test_set_isoperimetry_check():
    assert iq.set_isoperimetry_check(make_subcube(4, range(2))).margin == pytest.approx(0, abs=1e-12)
    assert iq.set_isoperimetry_check(VertexSet(2, [0, 1, 3])).passed


# -- log-Sobolev baselines -------------------------------------------------------

def test_weak_ls_indicator_matches_set_bound():
    rng = np.random.default_rng(2)
    for n in range(1, 8):
        A = random_set(n, rng)
        c = iq.baseline_weak_ls(CubeFunction.indicator(A))
        assert c.rhs == pytest.approx(2 * A.size / 2 ** n * math.log2(2 ** n / A.size), rel=1e-13, abs=1e-15)
        assert c.passed


def test_baselines_constant_and_zero():
    g = CubeFunction(np.full(16, 2.0))
    for fn in (iq.baseline_weak_ls, iq.baseline_weak_ls_ln, iq.baseline_log_sobolev):
        c = fn(g)
        assert c.lhs == 0 and abs(c.rhs) <= 1e-15 and c.passed
        with pytest.raises(ValueError):
            fn(CubeFunction.zeros(3))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2 ** 32 - 1))
def test_ln_baselines_property(n, seed):
    rng = np.random.default_rng(seed)
    g = random_function(n, rng)
    assert iq.baseline_weak_ls_ln(g).passed
    assert iq.baseline_log_sobolev(g).passed
    h = CubeFunction(rng.standard_normal(2 ** n))
    assert iq.baseline_weak_ls_ln(h).passed and iq.baseline_log_sobolev(h).passed


def test_log_sobolev_constant_is_sharp():
    for t in (1e-2, 1e-3):
        c = iq.baseline_log_sobolev(CubeFunction([1 + t, 1 - t]))
        assert c.rhs / c.lhs == pytest.approx(1.0, abs=10 * t)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2 ** 32 - 1))
def test_base2_form_on_indicators(n, seed):
    # the base-2 form is only claimed for indicators; the ln form covers general g
    rng = np.random.default_rng(seed)
    assert iq.baseline_weak_ls(CubeFunction.indicator(random_set(n, rng))).passed


# -- Lemma on concentration ------------------------------------------------------

def test_lemma32_examples():
    c = iq.lemma32_check([1.0, 2.0], [0.5, 0.5])
    assert c.context["eps"] == pytest.approx(1 / 8)
    assert c.rhs == pytest.approx(1 / 4) and c.lhs == pytest.approx(3 / 8)
    c = iq.lemma32_check([3.0, 3.0, 3.0], [0.2, 0.3, 0.5])
    assert c.context["eps"] == pytest.approx(0, abs=1e-15) and c.passed
    with pytest.raises(ValueError):
        iq.lemma32_check([1.0, 0.0], [0.5, 0.5])
    with pytest.raises(ValueError):
        iq.lemma32_check([1.0, 2.0], [0.5, 0.6])


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_lemma32_property(seed):
    values, weights = random_distribution(np.random.default_rng(seed), 20)
    assert iq.lemma32_check(values, weights).passed


def test_lemma32_batch_matches_scalar():
    rng = np.random.default_rng(3)
    values = np.exp(rng.normal(size=(50, 7)))
    weights = rng.dirichlet(np.ones(7), size=50)
    margins = iq.lemma32_batch(values, weights)
    for i in range(50):
        w = weights[i] / weights[i].sum()
        assert margins[i] == pytest.approx(iq.lemma32_check(values[i], w).margin, rel=1e-9, abs=1e-12)


# -- the function f --------------------------------------------------------------

def test_f_examples():
    assert iq.f_eval(2, 4) == pytest.approx(1.0)
    assert iq.f_eval(1, 4) == pytest.approx(3.0)
    c = iq.f_identity_check(2.0, 0.5, 4)
    assert c.context["f_beta_t"] == pytest.approx(3.0) and c.context["identity_rhs"] == pytest.approx(3.0)
    assert iq.f_identity_check(3.0, 1.0, 4).margin == 0


def test_f_identity_grid_and_domain():
    assert all(c.passed for c in iq.f_identity_grid(8, 1000))
    with pytest.raises(ValueError):
        iq.f_identity_check(8.0, 0.5, 4)
    with pytest.raises(ValueError):
        iq.f_eval(0.0, 4)


def test_f_decreasing_convex():
    for n in (2, 5, 12):
        assert iq.f_shape_check(n) == (True, True)


# -- induction step --------------------------------------------------------------

def test_induction_symmetric_equality():
    inst = iq.InductionInstance.from_alpha(6, 8.0, 8.0, 5.0, 5.0, 0.625)
    c = iq.induction_step_check(inst)
    assert c.lhs == pytest.approx(2 * iq.f_eval(8.0, 6) * 25.0)
    assert abs(c.margin) <= 1e-12


def test_induction_constraints():
    with pytest.raises(ValueError):
        iq.InductionInstance(4, 4.0, 2.0, 3.0, 1.0, alpha=1.0, beta_val=0.4, gamma=0.5)
    with pytest.raises(ValueError):
        iq.InductionInstance.from_alpha(4, 2.0, 4.0, 1.0, 1.0, 0.5)
    inst = iq.InductionInstance.from_alpha(5, 10.0, 4.0, 7.0, 2.0, 1.2)
    assert inst.t1 * inst.beta_val == pytest.approx(inst.s1)
    assert inst.t1 * inst.alpha + (inst.t0 - inst.t1) * inst.gamma == pytest.approx(inst.s0)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2 ** 32 - 1))
def test_reduced_form_is_min_over_alpha(n, seed):
    t0, t1, s0, s1 = random_step_params(n, np.random.default_rng(seed))
    assume(t0 > t1)

    def lhs(a):
        return iq.induction_step_check(iq.InductionInstance.from_alpha(n, t0, t1, s0, s1, a)).lhs

    scale = max(s0 / t1, s1 / t1, s0 / (t0 - t1)) * 4
    a_star = golden_min(lhs, -scale, scale)
    red = iq.reduced_check(t0, t1, s0, s1, n)
    assert lhs(a_star) == pytest.approx(red.lhs, rel=1e-9)
    assert a_star == pytest.approx(iq.optimal_alpha(t0, t1, s0, s1), rel=1e-5, abs=1e-6)
    assert iq.InductionInstance.from_alpha(n, t0, t1, s0, s1, a_star).quadratic_term == \
        pytest.approx((s0 - s1) ** 2 / t0, rel=1e-8, abs=1e-10)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2 ** 32 - 1), st.floats(0, 3))
def test_induction_property(n, seed, scale):
    t0, t1, s0, s1 = random_step_params(n, np.random.default_rng(seed))
    assert iq.reduced_check(t0, t1, s0, s1, n).passed
    inst = iq.InductionInstance.from_alpha(n, t0, t1, s0, s1, scale * iq.optimal_alpha(t0, t1, s0, s1))
    assert iq.induction_step_check(inst).passed


# -- quadratic in R ----------------------------------------------------------------

def test_quadratic_subcube_ratio():
    for n in range(2, 15):
        for j in range(n - 1):
            a, d = iq.discriminant_check(2.0 ** (j + 1), 2.0 ** j, n)
            assert a.passed and d.passed and a.lhs >= 0 and d.rhs <= 0


def test_quadratic_equal_sizes_excluded():
    with pytest.raises(ValueError):
        iq.quadratic_in_R(4.0, 4.0, 5)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 14), st.integers(0, 2 ** 32 - 1))
def test_quadratic_equals_reduced_step(n, seed):
    # reduced lhs - rhs = s1^2 P(s0/s1), two routes to the same number
    t0, t1, s0, s1 = random_step_params(n, np.random.default_rng(seed))
    assume(t0 > t1)
    P = iq.quadratic_in_R(t0, t1, n)
    c = iq.reduced_check(t0, t1, s0, s1, n)
    assert s1 ** 2 * P(s0 / s1) == pytest.approx(c.margin, rel=1e-9, abs=1e-9 * c.lhs)
    assert P.a >= -1e-12 and P.discriminant <= 1e-10
    for R in np.linspace(0, 20, 41):
        assert P(R) >= -1e-10


def test_technical_check_matches_discriminant_sign():
    for x, y in iq.dyadic_pairs(10):
        assert iq.technical_check(x, y, 10).passed
        assert iq.discriminant_check(x, y, 10)[1].passed


# -- coefficient table -------------------------------------------------------------

def test_coefficients_half():
    k = iq.coefficients_ABCDEF(0.5)
    assert k.A == pytest.approx(1 / 6)
    assert k.B == pytest.approx(1 - 4 / 3 * math.log2(4 / 3))
    assert k.B == pytest.approx(0.446, abs=1e-3)
    assert (k.C, k.D, k.E, k.F) == pytest.approx((1, 2, 6, 12))
    assert k.A * k.E == pytest.approx(k.C ** 2)


def test_coefficients_invariants():
    b = iq.beta_grid(999)
    k = iq.coefficients_ABCDEF(b)
    assert np.allclose(k.A * k.E, k.C ** 2, rtol=1e-12, atol=0)
    assert np.allclose(k.C ** 2, (1 - b) ** 2 / b ** 2, rtol=1e-12)
    for v in (k.A, k.C, k.D, k.E, k.F):
        assert np.all(v > 0)
    assert all(iq.ae_c2_check(float(x)).passed for x in b[::50])


def test_coefficients_limits_at_one():
    near = iq.coefficients_ABCDEF(1 - 1e-9)
    for v in (near.A, near.B, near.C, near.D):
        assert abs(v) < 1e-8
    assert near.E == pytest.approx(4.0) and near.F == pytest.approx(8.0)


def test_coefficients_domain():
    for bad in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            iq.coefficients_ABCDEF(bad)


# -- beta lemmas -------------------------------------------------------------------

def test_beta_lemmas_at_half():
    assert iq.afbe_minus_2cd(0.5) == pytest.approx(0.6797, abs=1e-4)
    assert iq.bf_minus_d2(0.5) == pytest.approx(1.3594, abs=1e-4)
    w = 0.5 * 1.5 / 4
    assert float(iq.reduced_afbe(0.5)) == pytest.approx(w * iq.afbe_minus_2cd(0.5), rel=1e-13)
    assert float(iq.reduced_bfd2(0.5)) == pytest.approx(w * iq.bf_minus_d2(0.5), rel=1e-13)


@pytest.mark.parametrize("lemma", ["afbe-2cd", "bf-d2", "AFBE_2CD", "BF_D2"])
def test_beta_scan_small(lemma):
    r = iq.beta_lemma_scan(lemma, points=20_000)
    assert r.passed and r.violations == 0 and r.min > 0
    assert r.reduced_agreement <= 1e-10
    for key in ("beta->0", "beta->1"):
        seq = np.abs(r.endpoint_limits[key])
        assert seq[-1] < 1e-6 and seq[-1] < seq[0]


def test_beta_scan_worker_independent():
    a = iq.beta_lemma_scan("bf-d2", points=300_000, workers=1, chunk=1 << 15)
    b = iq.beta_lemma_scan("bf-d2", points=300_000, workers=4, chunk=1 << 15)
    assert a.to_dict() == b.to_dict()


def test_beta_scan_errors():
    with pytest.raises(ValueError):
        iq.beta_lemma_scan("nope", 10)
    with pytest.raises(ValueError):
        iq.beta_lemma_scan("bf-d2", 1)


def test_linear_in_z():
    z = np.linspace(0, 50, 101)
    for beta in iq.beta_grid(99):
        assert iq.linear_in_z_defect(float(beta), z) <= 1e-9 * max(1.0, iq.coefficients_ABCDEF(float(beta)).F ** 2)
    assert iq.linear_in_z_defect(0.5, z) <= 1e-9


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-3, 1 - 1e-3), st.floats(0, 1e3))
def test_beta_lemmas_imply_delta_form(beta, z):
    k = iq.coefficients_ABCDEF(beta)
    assert iq.afbe_minus_2cd(beta) >= 0 and iq.bf_minus_d2(beta) >= 0
    # (Az+B)(Ez+F) - (Cz+D)^2 = (AF+BE-2CD) z + (BF-D^2) since AE = C^2
    lin = iq.afbe_minus_2cd(beta) * z + iq.bf_minus_d2(beta)
    full = (k.A * z + k.B) * (k.E * z + k.F) - (k.C * z + k.D) ** 2
    assert full == pytest.approx(lin, rel=1e-7, abs=1e-7 * (1 + z) * k.F ** 2)
    assert (k.A * z + k.B) >= (k.C * z + k.D) ** 2 / (k.E * z + k.F) - 1e-9 * (1 + z)


# -- Delta form ------------------------------------------------------------------

def test_delta_dyadic_grid():
    for n in range(2, 21):
        for x, y in iq.dyadic_pairs(n):
            c = iq.delta_inequality_check(x, y, n)
            assert c.passed and c.lhs >= 0
            ctx = c.context
            assert ctx["reduced_lhs"] == pytest.approx(c.lhs, rel=1e-9, abs=1e-9)
            assert ctx["reduced_rhs"] == pytest.approx(c.rhs, rel=1e-9, abs=1e-9)
            assert ctx["technical_passed"]


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 16), st.floats(0, 1), st.floats(0, 1))
def test_delta_random_pairs(n, u, v):
    top = 2.0 ** (n - 1)
    x = 1 + u * (top - 1)
    y = 1 + v * (x - 1)
    assume(y < x)
    c = iq.delta_inequality_check(x, y, n)
    assert c.lhs >= -1e-12 and c.passed
    assert c.context["reduced_lhs"] == pytest.approx(c.lhs, rel=1e-9, abs=1e-9)
    assert c.context["reduced_rhs"] == pytest.approx(c.rhs, rel=1e-9, abs=1e-9)


def test_delta_domain():
    with pytest.raises(ValueError):
        iq.delta_inequality_check(2.0, 2.0, 4)
    with pytest.raises(ValueError):
        iq.delta_inequality_check(16.0, 2.0, 4)
