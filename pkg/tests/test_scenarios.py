import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boussinesq_lab.errors import AssumptionError, ConfigError
from boussinesq_lab.grids import AnnulusGrid, StripGrid, TorusGrid
from boussinesq_lab.scenarios import ScenarioSpec, make_scenario, turning_points, validate_assumptions
from boussinesq_lab.symmetry import AXISYM, STRIP, TORUS, is_consistent, symmetry_project

T = TorusGrid(64, 64)
GRIDS = {"viscous-t2": T, "inviscid-t2": T, "strip-invB": StripGrid(64, 33), "axisym-3d": AnnulusGrid(33, 64)}


# symmetry ---------------------------------------------------------------------

def test_classes_consistent_with_curl():
    assert is_consistent(TORUS) and is_consistent(STRIP) and is_consistent(AXISYM)


def test_symmetric_field_unchanged():
    x1, x2 = T.mesh()
    f = np.cos(x1) * np.sin(x2) + 0.2 * np.cos(3 * x1) * np.sin(2 * x2)
    g, moved = symmetry_project(f, TORUS["rho"])
    assert np.max(np.abs(g - f)) <= 1e-15 and moved <= 1e-15


def test_wrong_parity_removed():
    x1, x2 = T.mesh()
    g, _ = symmetry_project(np.sin(x1) * np.cos(x2), TORUS["rho"])
    assert np.max(np.abs(g)) <= 1e-15


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([(1, -1), (-1, -1), (-1, 1), (1, 0), (0, -1)]))
def test_projection_idempotent(seed, parity):
    f = np.random.default_rng(seed).standard_normal(T.shape)
    once, _ = symmetry_project(f, parity)
    twice, moved = symmetry_project(once, parity)
    assert np.max(np.abs(twice - once)) <= 1e-15 and moved <= 1e-15


# scenarios --------------------------------------------------------------------

def test_inviscid_turning_points():
    data = make_scenario(ScenarioSpec("inviscid-t2"), T)
    assert data.info.k0 == pytest.approx(1.0, abs=1e-14)
    assert data.a == pytest.approx(np.pi / 2, abs=1e-7)
    assert data.b == pytest.approx(np.arcsin(0.5), abs=1e-12)
    assert data.tracers.x2 == (data.a, data.b)


def test_turning_points_needs_a_drop():
    with pytest.raises(AssumptionError):
        turning_points(lambda s: 1.0 + 0 * s)


def test_strip_default_boundary_values():
    g = GRIDS["strip-invB"]
    data = make_scenario(ScenarioSpec("strip-invB"), g)
    rho = data.fields["rho"]
    assert data.info.k0 == pytest.approx(1.0)
    assert np.allclose(rho[g.index_of(0, 0.0)], 1.0) and np.allclose(rho[g.index_of(0, np.pi)], -1.0)
    assert data.info.A0 == 0.0 and data.info.T0 == 0.0


def test_axisym_default_boundary_values():
    g = GRIDS["axisym-3d"]
    data = make_scenario(ScenarioSpec("axisym-3d"), g)
    ut = data.fields["u_theta"]
    assert np.allclose(ut[:, g.index_of(1, np.pi)], 1.0) and np.allclose(ut[:, g.index_of(1, 0.0)], 0.0)


def test_viscous_default_vanishes_on_axis():
    data = make_scenario(ScenarioSpec("viscous-t2"), T)
    assert not data.fields["rho"][T.index_of(0, 0.0)].any()
    assert not data.fields["omega"].any()


def test_energy_constant_for_strip_default():
    g = StripGrid(64, 65)
    data = make_scenario(ScenarioSpec("strip-invB"), g)
    # zero velocity, so E0 = 4 pi * int_Q |cos x1| = 4 pi * 2 * pi
    assert data.info.E0 == pytest.approx(8 * np.pi**2, rel=2e-3)


@settings(max_examples=16, deadline=None)
@given(st.sampled_from(sorted(GRIDS)), st.integers(0, 10_000), st.floats(0.0, 1.0), st.floats(0.1, 3.0))
def test_generated_data_pass_validation(name, seed, eps, amp):
    spec = ScenarioSpec(name, amplitude=amp, perturbation=eps, seed=seed)
    data = make_scenario(spec, GRIDS[name])
    assert all(c.passed for c in validate_assumptions(GRIDS[name], data.fields, spec, data.info.k0))


def test_wrong_parity_rho_fails_validation():
    x1, x2 = T.mesh()
    rep = validate_assumptions(T, {"rho": np.sin(x1) * np.sin(x2), "omega": 0 * x1}, ScenarioSpec("inviscid-t2"))
    failed = [c.clause for c in rep if not c.passed]
    assert "rho even in x1" in failed


def test_zero_density_fails_validation():
    z = np.zeros(T.shape)
    rep = validate_assumptions(T, {"rho": z, "omega": z}, ScenarioSpec("viscous-t2"))
    assert "rho not identically zero" in [c.clause for c in rep if not c.passed]


def test_bad_parameters():
    with pytest.raises(AssumptionError):
        ScenarioSpec("inviscid-t2", amplitude=0.0)
    with pytest.raises(AssumptionError):
        ScenarioSpec("inviscid-t2", perturbation=1.5)
    with pytest.raises(ConfigError):
        ScenarioSpec("nope")
    with pytest.raises(ConfigError):
        make_scenario(ScenarioSpec("strip-invB"), T)
