"""Event-based backstepping boundary control of 2x2 hyperbolic systems."""

from .errors import (
    AssumptionViolated,
    CflViolation,
    ConfigMismatch,
    DtTooCoarse,
    GateSubmerged,
    GridMismatch,
    HypetcError,
    InvalidCoefficients,
    MuBarNonpositive,
    MuOutOfRange,
    NonConvergence,
    NonNegativeM,
    OutputDirUnwritable,
    SlopeMismatch,
    SupercriticalFlow,
    VarrhoNotPositive,
)
from .experiments import (
    InitialConditions,
    RawCoefficients,
    RunConfig,
    RunSummary,
    StcParams,
    compare_modes,
    config_from_dict,
    constants_report,
    default_config,
    load_config,
    run_scenario,
)
from .kernels import (
    CONTROLLER_K,
    INVERSE_L,
    INVERSE_R,
    OBSERVER_P,
    GainProfiles,
    KernelSet,
    PlantCoefficients,
    TriangularGrid,
    gain_profiles,
    kernel_residuals,
    solve_kernels,
)
from .petc import PetcConfig, gamma_p, petc_should_trigger, select_h
from .saint_venant import (
    CanalConfig,
    LinearizedModel,
    from_characteristic,
    gate_opening,
    linearize,
    to_characteristic,
)
from .sim import (
    HyperbolicState,
    SimConfig,
    VolterraMap,
    control_law,
    l2_norm,
    step_error,
    step_observer,
    step_plant,
)
from .stc import StcConstants, calF, next_event_gap, stc_constants, vbar2
from .triggers import (
    DesignConstants,
    EtcParams,
    TriggerState,
    cetc_should_trigger,
    design_constants,
    dwell_time,
    gamma_c,
    mu_upper_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
