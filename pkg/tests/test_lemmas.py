import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma

from boussinesq_lab import lemmas
from boussinesq_lab.diagnostics import C0
from boussinesq_lab.errors import AssumptionError
from boussinesq_lab.grids import TorusGrid


def q_grid(m=129):
    x = np.linspace(0.0, np.pi, m)
    return np.meshgrid(x, x, indexing="ij")


def check(rep, name):
    return next(c for c in rep.checks if c.name == name)


# vorticity Lp lemma -------------------------------------------------------------

def test_omega_lp_product_of_sines():
    x1, x2 = q_grid()
    # psi = sin x1 sin x2, u = (d2 psi, -d1 psi)
    rep = lemmas.check_omega_lp(np.sin(x1) * np.cos(x2), -np.cos(x1) * np.sin(x2))
    assert rep.inputs["A"] == pytest.approx(8.0, rel=1e-3)
    assert rep.inputs["E0"] == pytest.approx(np.pi**2 / 2, rel=1e-3)
    sup = check(rep, f"lp_bound:{np.inf}")
    assert sup.lhs == pytest.approx(2.0, rel=1e-6)
    assert sup.rhs == pytest.approx(C0 * max(8.0**3 / (np.pi**2 / 2), 8.0), rel=3e-3)
    assert sup.rhs == pytest.approx(0.0821, abs=1e-4)
    assert check(rep, "l1_vs_A").passed
    assert rep.passed and rep.case == ""
    assert rep.intermediates["r0"] < 16 * np.pi * rep.inputs["E0"] / rep.inputs["A"] ** 2


def test_omega_lp_zero_field_is_degenerate():
    z = np.zeros((33, 33))
    rep = lemmas.check_omega_lp(z, z)
    assert rep.case == "degenerate" and rep.passed and not rep.checks


def test_omega_lp_bad_shape():
    with pytest.raises(ValueError):
        lemmas.check_omega_lp(np.zeros((5, 5)), np.zeros((5, 5)))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31))
def test_omega_lp_sign_invariance(seed):
    u1, u2 = lemmas.random_streamfunction_velocity(np.random.default_rng(seed), 65)
    a, b = lemmas.check_omega_lp(u1, u2), lemmas.check_omega_lp(-u1, -u2)
    assert a.verdict == b.verdict
    assert [c.lhs for c in a.checks] == pytest.approx([c.lhs for c in b.checks], rel=1e-12)
    assert a.inputs["omega_l1"] >= abs(a.inputs["A"]) * (1 - 1e-12)


def test_constant_value():
    assert C0 == 1.0 / (128.0 * np.pi**2)


# plane small-delta lemma --------------------------------------------------------

G128 = TorusGrid(128, 128)


def narrow_pair(grid, scale=1.0):
    x1, x2 = grid.mesh()
    b = lemmas.smooth_bump
    return scale * (b(x1, x2, 0.0, 0.9, 1.4, 0.5) - b(x1, x2, 0.0, -0.9, 1.4, 0.5))


def test_part_a_narrow_bumps_case_one():
    rep = lemmas.check_smallinx1_a(G128, narrow_pair(G128))
    assert rep.case == "1" and rep.passed, rep.text()
    assert rep.intermediates["lattice_error"] < 5e-3 * rep.inputs["A"]


def test_part_a_scaling():
    r1 = lemmas.check_smallinx1_a(G128, narrow_pair(G128))
    r2 = lemmas.check_smallinx1_a(G128, narrow_pair(G128, 2.0))
    assert r2.inputs["A"] == pytest.approx(4 * r1.inputs["A"], rel=1e-12)
    assert r2.inputs["delta"] == pytest.approx(4 * r1.inputs["delta"], rel=1e-12)
    assert r2.inputs["B"] == pytest.approx(2 * r1.inputs["B"], rel=1e-12)
    assert r2.passed


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**31))
def test_part_a_delta_below_A(seed):
    g = TorusGrid(64, 64)
    rep = lemmas.check_smallinx1_a(g, lemmas.random_compact_odd(np.random.default_rng(seed), g), pad=4)
    assert check(rep, "delta_le_A").passed


def test_part_a_input_errors():
    x1, x2 = G128.mesh()
    with pytest.raises(AssumptionError):
        lemmas.check_smallinx1_a(G128, np.zeros(G128.shape))
    with pytest.raises(AssumptionError):
        lemmas.check_smallinx1_a(G128, np.abs(narrow_pair(G128)))
    with pytest.raises(AssumptionError):
        lemmas.check_smallinx1_a(G128, np.sin(x2))


# periodic small-delta lemma -----------------------------------------------------

G64 = TorusGrid(64, 64)


def test_part_b_closed_forms():
    x1, x2 = G64.mesh()
    rep = lemmas.check_smallinx1_b(G64, (1 - np.cos(x1)) * np.sin(x2))
    assert rep.passed, rep.text()
    assert rep.intermediates["g_mean"] == pytest.approx(np.pi / 2, rel=1e-12)
    assert rep.intermediates["g_fluct"] == pytest.approx(np.pi**2 / 4, rel=1e-12)
    assert rep.inputs["delta"] == pytest.approx(np.pi**2 / 2, rel=1e-12)
    assert check(rep, "g_zero_at_origin").lhs - check(rep, "g_zero_at_origin").rhs == 0.0
    assert any("not asserted" in n for n in rep.notes)


def test_holder_constant_closed_form():
    integral = np.sqrt(np.pi) * gamma(0.25) / gamma(0.75)
    assert lemmas.holder_constant() == pytest.approx((np.pi * integral) ** -2, rel=1e-10)


def test_part_b_lists_violations():
    x1, x2 = G64.mesh()
    with pytest.raises(AssumptionError, match="nonnegative"):
        lemmas.check_smallinx1_b(G64, -(1 - np.cos(x1)) * np.sin(x2))
    with pytest.raises(AssumptionError, match="vanishes on the x2-axis"):
        lemmas.check_smallinx1_b(G64, (2 - np.cos(x1)) * np.sin(x2))
    with pytest.raises(AssumptionError, match="even in x1"):
        lemmas.check_smallinx1_b(G64, (1 - np.cos(x1) + 0.5 * np.sin(x1)) * np.sin(x2))
    with pytest.raises(ValueError):
        lemmas.check_smallinx1_b(G64, (1 - np.cos(x1)) * np.sin(x2), s_list=(0.5,))


# suites ---------------------------------------------------------------------------

@pytest.mark.parametrize("kind", lemmas.KINDS)
def test_suite_is_deterministic(kind):
    res = 64 if kind != "omega-lp" else 65
    a = lemmas.run_suite(kind, 3, seed=11, resolution=res)
    b = lemmas.run_suite(kind, 3, seed=11, resolution=res)
    assert lemmas.suite_rows(a, 11) == lemmas.suite_rows(b, 11)
    assert lemmas.suite_summary(kind, a) == lemmas.suite_summary(kind, b)


def test_suite_unknown_kind():
    with pytest.raises(ValueError):
        lemmas.run_suite("nope", 1)
