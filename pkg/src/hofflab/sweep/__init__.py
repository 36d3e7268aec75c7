from .mollifier import MollifierKernel, bump, mollify, phi, phi_prime_l1
from .prepare import PreparationReport, PreparedData, prepare_data
from .distance import (
    DISTANCE_NORMS,
    DistanceComponents,
    DistanceNorm,
    distance_components,
    trajectory_distance,
)
from .study import (
    SimulationResult,
    StabilityConfig,
    StabilityResult,
    SweepConfig,
    SweepResult,
    SweepRow,
    UniformityCheck,
    check_kappa_list,
    kappa_limit_study,
    merge_runs,
    simulate,
    stability_probe,
    uniformity_check,
)
