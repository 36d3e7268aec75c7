from typing import Optional

import numpy as np

from hofflab.core.operators import deriv
from hofflab.core.state import InitialFields
from hofflab.sweep.mollifier import mollify, phi_prime_l1
from hofflab.utilities.logging import get_logger
from hofflab.utilities.types import FrozenModel

logger = get_logger(__name__)

# envelope checks compare discrete derivatives against continuum bounds
ENVELOPE_SLACK = 1.05


class PreparationReport(FrozenModel):
    """Size of the mollification and the √κ-weighted derivative envelopes."""

    kappa: float
    eta_rho_theta: Optional[float] = None
    eta_u: Optional[float] = None
    l2_change_rho: float = 0.0
    l2_change_u: float = 0.0
    l2_change_theta: float = 0.0
    sqrt_kappa_sup_dxrho: float = 0.0
    sup_dxrho_envelope: float = 0.0
    sqrt_kappa_sup_dxtheta: float = 0.0
    sup_dxtheta_envelope: float = 0.0
    sqrt_kappa_l2_dxxu: float = 0.0
    l2_dxxu_envelope: float = 0.0
    kappa_quarter_l2_dxrho: float = 0.0
    l2_dxrho_envelope: float = 0.0
    envelopes_respected: bool = True


class PreparedData(FrozenModel):
    data: InitialFields
    report: PreparationReport


def _l2(f: np.ndarray, dx: float) -> float:
    return float(np.sqrt(np.sum(f**2) * dx))


def prepare_data(base: InitialFields, kappa: float) -> PreparedData:
    """
    Well-prepared data for conductivity κ: ρ₀ and θ₀ mollified at width
    κ^{1/4}, u₀ at width κ^{1/2}. κ = 0 returns `base` unchanged.

    Raises:
        KernelUnderresolved: a width falls below two cells.
    """
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    if kappa == 0:
        return PreparedData(data=base, report=PreparationReport(kappa=0.0))

    grid = base.grid
    dx = grid.dx
    eta_rt = kappa**0.25
    eta_u = kappa**0.5
    rho = mollify(base.rho0, eta_rt, grid)
    theta = mollify(base.theta0, eta_rt, grid)
    u = mollify(base.u0, eta_u, grid)
    logger.debug(f"prepared data for κ={kappa!r}: η={eta_rt!r} (ρ, θ), {eta_u!r} (u)")

    dphi = phi_prime_l1()
    sqrt_k = kappa**0.5
    report = PreparationReport(
        kappa=kappa,
        eta_rho_theta=eta_rt,
        eta_u=eta_u,
        l2_change_rho=_l2(rho - base.rho0, dx),
        l2_change_u=_l2(u - base.u0, dx),
        l2_change_theta=_l2(theta - base.theta0, dx),
        sqrt_kappa_sup_dxrho=sqrt_k * float(np.max(np.abs(deriv(rho, grid)))),
        sup_dxrho_envelope=eta_rt * float(np.max(base.rho0)) * dphi,
        sqrt_kappa_sup_dxtheta=sqrt_k * float(np.max(np.abs(deriv(theta, grid)))),
        sup_dxtheta_envelope=eta_rt * float(np.max(base.theta0)) * dphi,
        sqrt_kappa_l2_dxxu=sqrt_k * _l2(deriv(deriv(u, grid), grid), dx),
        l2_dxxu_envelope=_l2(deriv(base.u0, grid), dx) * dphi,
        kappa_quarter_l2_dxrho=eta_rt * _l2(deriv(rho, grid), dx),
        l2_dxrho_envelope=_l2(base.rho0, dx) * dphi,
    )
    respected = all(
        getattr(report, value) <= ENVELOPE_SLACK * getattr(report, bound)
        for value, bound in (
            ("sqrt_kappa_sup_dxrho", "sup_dxrho_envelope"),
            ("sqrt_kappa_sup_dxtheta", "sup_dxtheta_envelope"),
            ("sqrt_kappa_l2_dxxu", "l2_dxxu_envelope"),
            ("kappa_quarter_l2_dxrho", "l2_dxrho_envelope"),
        )
    )
    if not respected:
        logger.warning(f"mollified data for κ={kappa!r} exceeds a derivative envelope")
    return PreparedData(
        data=InitialFields(rho0=rho, u0=u, theta0=theta),
        report=report.model_copy(update={"envelopes_respected": respected}),
    )
