from .config import SolverConfig
from .trajectory import Trajectory
from .tridiagonal import implicit_diffusion_solve, solve_cyclic
from .imex import semidiscrete_rates, stable_dt, step
from .integrate import run
from .flow import (
    flow_map_consistency,
    galilean_normalize,
    material_antiderivative,
    material_remainder,
)
