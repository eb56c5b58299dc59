"""Simulation and optimization toolkit for a driven two-mode charger/battery
system with local damping, coherent mode coupling, and an engineered shared
(zero-temperature) reservoir.

The moment equations are exact for this linear model; a truncated-Fock
master-equation oracle certifies them, closed-form stationary energies are
cross-checked against a direct linear steady solve, and every optimization
closed form is certified against a deterministic numeric search.
"""

from .errors import (
    ConfigError,
    DivergentSteadyState,
    NegativeRate,
    NonFinite,
    PoleAtResonance,
    QBatteryError,
    SingularSystem,
    StepUnderflow,
    TruncationOverflow,
    ZeroCoupling,
    ZeroRate,
)
from .fock import (
    FockDensityMatrix,
    FockEvolution,
    coherent_density_matrix,
    evolve,
    extract_moments,
    lindblad_rhs,
    vacuum_density_matrix,
)
from .moments import (
    VACUUM,
    MomentState,
    StepControl,
    Trajectory,
    energies,
    integrate,
    purity_residual,
    rhs,
    slowest_decay_rate,
)
from .optimize import (
    ComparisonReport,
    DetuningOptimum,
    RatioOptimum,
    compare_charging,
    delta_E_coh,
    delta_E_coh_limit,
    delta_E_diss,
    optimal_detuning_conventional,
    optimal_detuning_numeric,
    optimal_detuning_shared,
    ratio_argmax_numeric,
    redistribution_gap,
    single_battery_energy,
    super_optimal_energies,
    super_optimal_ratio,
)
from .params import (
    CoherentCoupling,
    DriveParams,
    LocalBaths,
    SharedBath,
    SystemParams,
    builtin_detuning,
    derived_rates,
    make_params,
    normalize_shared,
    validate,
)
from .scenarios import (
    FIGURE_IDS,
    ScenarioConfig,
    VerifyReport,
    load_config,
    reproduce_figure,
    run_scenario,
    verify,
)
from .steady import (
    SteadyKernels,
    SteadyStateReport,
    battery_energy,
    charger_energy,
    kernels,
    response_denominator,
    steady_moments,
    steady_state_report,
    total_energy,
)
from .supermode import (
    SupermodeCouplings,
    SupermodeState,
    decoherence_free_mode,
    from_supermode,
    integrate_global,
    rhs_global,
    supermode_couplings,
    to_supermode,
)

__version__ = "0.1.0"
