from .grid import Grid
from .gas import GasParams
from .state import InitialFields, LagState
from .operators import (
    antideriv,
    deriv,
    face_average,
    face_diffusion,
    face_heating,
    flow_jacobian,
    forward_deriv,
)
from .thermo import DerivedFields, entropy_h, relative_entropy_density, stress, thermo
