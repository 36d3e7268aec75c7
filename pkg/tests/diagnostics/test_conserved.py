import numpy as np
import pytest
from hofflab.diagnostics.conserved import conserved_integrals, energy_bounds


def test_constant_run(constant_traj):
    integrals = conserved_integrals(constant_traj, constant_traj.params)
    np.testing.assert_array_equal(integrals.mass, 1.0)
    np.testing.assert_array_equal(integrals.energy, 1.0)
    np.testing.assert_array_equal(integrals.momentum, 0.0)
    np.testing.assert_array_equal(integrals.pressure_int, 1.0)
    np.testing.assert_array_equal(integrals.kinetic_int, 0.0)
    assert integrals.mass_drift == 0.0
    assert integrals.energy_drift == 0.0
    assert integrals.momentum_drift == 0.0


def test_smooth_run(smooth_traj):
    integrals = conserved_integrals(smooth_traj, smooth_traj.params)
    assert integrals.mass[0] == pytest.approx(1.0, rel=1e-14)
    assert integrals.mass_drift == 0.0
    assert integrals.energy_drift < 1e-10
    assert integrals.momentum_drift < 1e-10


def test_pressure_integral_is_internal_energy_times_gamma_minus_one(smooth_traj):
    params = smooth_traj.params
    integrals = conserved_integrals(smooth_traj, params)
    internal = integrals.energy - integrals.kinetic_int
    np.testing.assert_allclose(integrals.pressure_int, (params.gamma - 1) * internal, rtol=1e-12)


def test_energy_bounds_hold(smooth_traj):
    bounds = energy_bounds(smooth_traj, smooth_traj.params)
    assert bounds.passed
    assert bounds.sup_int_kinetic <= bounds.bound_int_kinetic


def test_energy_bounds_are_sharp_at_rest(constant_traj):
    bounds = energy_bounds(constant_traj, constant_traj.params)
    assert bounds.passed
    assert bounds.sup_int_p == bounds.bound_int_p == 1.0
    assert bounds.sup_int_abs_momentum == 0.0
