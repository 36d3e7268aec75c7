import math

import pytest
from hofflab.diagnostics.stress import dtinv_sigma_check
from hofflab.errors import NormalizationError


def test_constant_state_closed_form(constant_traj):
    """σ ≡ -1 over T = 1: |D_t⁻¹σ| = t, bound 2√2 + 3."""
    check = dtinv_sigma_check(constant_traj, constant_traj.params)
    assert check.max_abs == pytest.approx(1.0, rel=1e-12)
    assert check.bound == pytest.approx(2 * math.sqrt(2) + 3, rel=1e-14)
    assert check.mass == 1.0
    assert check.energy == 1.0
    assert check.passed
    assert check.density_envelope == pytest.approx(math.e, rel=1e-12)
    assert check.density_envelope_respected


def test_smooth_run_respects_the_bound(smooth_traj):
    check = dtinv_sigma_check(smooth_traj, smooth_traj.params)
    assert check.passed
    assert 0 < check.max_abs < check.bound
    assert check.density_envelope_respected


def test_net_momentum_is_rejected(drifting_traj):
    with pytest.raises(NormalizationError, match="Galilean boost") as exc:
        dtinv_sigma_check(drifting_traj, drifting_traj.params)
    assert exc.value.context["mean_velocity"] == pytest.approx(5.0)


def test_tolerance_is_configurable(drifting_traj):
    check = dtinv_sigma_check(drifting_traj, drifting_traj.params, momentum_tol=10.0)
    assert check.max_abs > 0
