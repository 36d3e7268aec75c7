import math

import numpy as np
import pytest
from hofflab.errors import QuadratureFailure
from hofflab.lemma.bound import (
    BoundProblem,
    compute_threshold,
    psi,
    tau_bar_for,
    verify_bound,
)


def riccati(D: float = 0.0, Phi=lambda y: y**2) -> BoundProblem:
    return BoundProblem(
        D=D,
        delta=lambda t: 1.0,
        delta_grid=np.linspace(0.0, 1.0, 201),
        Phi=Phi,
        tau0=1.0,
        T=1.0,
    )


class TestPsi:
    def test_closed_form(self):
        problem = riccati()
        assert psi(problem, 1.0) == 0.0
        assert psi(problem, 2.0) == pytest.approx(0.5, rel=1e-9)
        assert psi(problem, 1e4) == pytest.approx(1 - 1e-4, rel=1e-9)

    def test_below_tau0_is_negative(self):
        assert psi(riccati(), 0.5) == pytest.approx(-1.0, rel=1e-9)

    def test_nonpositive_phi(self):
        problem = riccati(Phi=lambda y: 1.0 - y)
        with pytest.raises(QuadratureFailure):
            psi(problem, 3.0)


class TestThreshold:
    def test_riccati(self):
        result = compute_threshold(riccati())
        assert result.int_delta == pytest.approx(1.0)
        assert result.sup_psi == pytest.approx(1.0, rel=1e-9)
        assert result.kappa0 == pytest.approx(0.999, rel=1e-8)
        assert result.tau_bar == pytest.approx(1000.0, rel=1e-5)
        assert result.scale == 1.0

    def test_linear_phi_has_no_threshold(self):
        result = compute_threshold(riccati(Phi=lambda y: 2.0))
        assert result.sup_psi == math.inf
        assert result.kappa0 == math.inf
        assert result.tau_bar == math.inf

    def test_growth_is_reduced(self):
        result = compute_threshold(riccati(D=1.0))
        assert result.scale == pytest.approx(math.e)
        assert result.kappa0 == pytest.approx(0.999 * math.exp(-2), rel=1e-8)
        assert result.tau_bar == pytest.approx(1000.0 * math.e, rel=1e-5)

    def test_negative_growth_is_ignored(self):
        problem = riccati(D=-3.0)
        assert problem.D == 0.0
        assert problem.reduced() is problem

    def test_nonpositive_phi(self):
        with pytest.raises(QuadratureFailure) as exc:
            compute_threshold(riccati(Phi=lambda y: 0.0))
        assert exc.value.context["phi"] == 0.0


class TestTauBar:
    def test_riccati(self):
        problem = riccati()
        assert tau_bar_for(problem, 0.5) == pytest.approx(2.0, rel=1e-8)
        assert tau_bar_for(problem, 0.0) == 1.0

    def test_beyond_sup_psi(self):
        assert tau_bar_for(riccati(), 1.5) == math.inf

    def test_unbounded_psi(self):
        problem = riccati(Phi=lambda y: 2.0)
        assert tau_bar_for(problem, 3.0) == pytest.approx(7.0, rel=1e-8)


class TestVerify:
    def test_bound_holds_below_threshold(self):
        verification = verify_bound(riccati(), [0.25, 0.5, 0.9])
        assert verification.passed
        for check in verification.checks:
            assert check.below_kappa0
            assert check.blowup_time is None
            assert check.sup_tau == pytest.approx(1 / (1 - check.kappa), rel=1e-6)

    def test_blowup_above_threshold(self):
        verification = verify_bound(riccati(), [0.5, 1.1])
        check = verification.checks[-1]
        assert not check.below_kappa0
        assert check.passed is None
        assert check.sup_tau == math.inf
        assert check.blowup_time == pytest.approx(1 / 1.1, abs=1e-3)
        assert check.error["error"] == "IntegrationBlowup"
        assert verification.passed

    def test_frame(self):
        frame = verify_bound(riccati(), [0.5]).to_frame()
        assert frame.loc[0, "tau_bar_kappa"] == pytest.approx(2.0, rel=1e-8)
        assert bool(frame.loc[0, "passed"])
