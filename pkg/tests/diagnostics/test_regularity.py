import pytest
from hofflab.diagnostics.regularity import weighted_regularity


def test_vanishes_without_conductivity(smooth_traj_no_conduction):
    traj = smooth_traj_no_conduction
    reg = weighted_regularity(traj, traj.params, alpha=0.3)
    assert reg.alpha == 0.3
    assert all(value == 0.0 for key, value in reg.model_dump().items() if key != "alpha")


def test_vanishes_for_uniform_data(constant_traj):
    reg = weighted_regularity(constant_traj, constant_traj.params)
    assert reg.initial_D0 == 0.0
    assert reg.sup_kappa_sup_dxtheta_sq == 0.0


def test_weights(smooth_traj):
    kappa = smooth_traj.params.kappa
    reg = weighted_regularity(smooth_traj, smooth_traj.params, alpha=0.5)
    assert reg.initial_D0 > 0
    assert reg.sup_kalpha_int_dxtheta_sq / reg.sup_kappa_int_dxtheta_sq == pytest.approx(
        kappa**-0.5, rel=1e-12
    )
    assert reg.kalpha_m1_int_int_dx_kappa_dxtheta_sq > 0


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.5])
def test_alpha_range(smooth_traj, alpha):
    with pytest.raises(ValueError, match="alpha"):
        weighted_regularity(smooth_traj, smooth_traj.params, alpha=alpha)
