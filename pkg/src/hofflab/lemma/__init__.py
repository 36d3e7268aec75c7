from .bound import (
    BoundCheck,
    BoundProblem,
    BoundResult,
    BoundVerification,
    compute_threshold,
    psi,
    tau_bar_for,
    verify_bound,
)
from .pairing import (
    PairingResult,
    conduction_intensity,
    pair_with_simulation,
    stress_phi_coefficients,
    stress_growth_constant,
    stress_phi,
)
