"""Phase transitions of a microtubule reaction-diffusion model.

Analysis and simulation toolkit for a three-field reaction-diffusion
system (growing microtubule density, shrinking density, free tubulin) on
an interval: uniform steady states, mode-by-mode linear stability,
instability thresholds along parameter rays, transition classification
via center-manifold reduction (continuous, jump, and mixed scenarios),
an IMEX time integrator to validate the predicted branches, and a
deterministic CSV/manifest artifact pipeline with a CLI.

The public API is re-exported here; see the module docstrings for
details (``model``, ``spectral``, ``threshold``, ``transition``,
``simulator``, ``config``, ``output``, ``sweep``, ``artifacts``,
``verification``, ``cli``).
"""

from .errors import (
    ComplexCrossing,
    ConfigError,
    CurveLeftDomain,
    DegenerateCoefficient,
    GridTooCoarse,
    InsufficientData,
    K1NotPositive,
    MTPhaseError,
    NoSignChange,
    NonPositiveParameter,
    NotAnEigenvalue,
    NumericalError,
    OutOfTheory,
    ParseError,
    Resonance,
    StepCollapse,
    StepUnstable,
    UnknownKey,
    ValidationError,
)
from .model import (
    BoundaryCondition,
    ConditionReport,
    ModelParams,
    SteadyState,
    check_conditions,
    diffusion_matrix,
    linearization_matrix,
    quadratic_nonlinearity,
    reaction_rhs,
    steady_state,
    validate_params,
)
from .spectral import (
    Basis,
    LaplacianMode,
    ModeSpectrum,
    adjoint_eigenvector,
    char_poly_coeffs,
    companion_roots,
    cubic_roots,
    eigenvector,
    laplacian_eigenvalue,
    laplacian_mode,
    mode_matrix,
    mode_spectra,
    principal_eigenvalue,
    solve_spectrum,
)
from .threshold import (
    ParameterPlane,
    ParameterRay,
    Region,
    RegionReport,
    StabilityExchangeReport,
    ThresholdPoint,
    classify_region,
    det_principal_mode,
    find_threshold,
    stability_exchange_report,
    trace_threshold_curve,
)
from .transition import (
    CenterManifoldCoefficients,
    CubicReduction,
    PredictedState,
    QuadraticCoefficient,
    TransitionReport,
    TransitionType,
    center_manifold_coefficients,
    classify_transition,
    cubic_reduction,
    predicted_state,
    principal_mode_vectors,
    quadratic_coefficient,
    transition_number,
    transition_number_simplified,
)
from .simulator import (
    AmplitudeFit,
    AmplitudeSeries,
    FieldState,
    Grid,
    MIN_GRID_POINTS,
    SimulationResult,
    Stepper,
    amplitude,
    dt_max,
    fit_amplitude_dynamics,
    initial_state,
    laplacian_apply,
    make_grid,
    simulate,
)
from .config import (
    AnalysisConfig,
    OutputConfig,
    RunConfig,
    SimulateConfig,
    SweepConfig,
    config_sha256,
    parse_config,
    parse_config_text,
    serialize_config,
)
from .output import (
    MANIFEST_NAME,
    RunManifest,
    read_manifest,
    sha256_file,
    write_csv,
    write_manifest,
)
from .sweep import SweepCell, region_evaluator, resolve_workers, sweep
from .artifacts import (
    run_phase_diagram,
    run_simulate,
    run_spectrum,
    run_steady_state,
    run_threshold,
    run_transition,
)
from .verification import (
    CRITERIA,
    CriterionResult,
    DEFAULT_SEED,
    default_verify_config,
    run_all,
)
from .cli import main
from .version import __version__

__all__ = [
    "__version__",
    # errors
    "MTPhaseError",
    "ConfigError",
    "ParseError",
    "UnknownKey",
    "ValidationError",
    "NonPositiveParameter",
    "K1NotPositive",
    "NumericalError",
    "NotAnEigenvalue",
    "NoSignChange",
    "ComplexCrossing",
    "CurveLeftDomain",
    "StepCollapse",
    "Resonance",
    "DegenerateCoefficient",
    "OutOfTheory",
    "GridTooCoarse",
    "StepUnstable",
    "InsufficientData",
    # model
    "BoundaryCondition",
    "ModelParams",
    "SteadyState",
    "ConditionReport",
    "validate_params",
    "steady_state",
    "reaction_rhs",
    "linearization_matrix",
    "diffusion_matrix",
    "quadratic_nonlinearity",
    "check_conditions",
    # spectral
    "Basis",
    "LaplacianMode",
    "ModeSpectrum",
    "laplacian_eigenvalue",
    "laplacian_mode",
    "mode_matrix",
    "char_poly_coeffs",
    "solve_spectrum",
    "companion_roots",
    "cubic_roots",
    "eigenvector",
    "adjoint_eigenvector",
    "mode_spectra",
    "principal_eigenvalue",
    # threshold
    "ParameterRay",
    "ParameterPlane",
    "ThresholdPoint",
    "Region",
    "RegionReport",
    "StabilityExchangeReport",
    "det_principal_mode",
    "find_threshold",
    "classify_region",
    "stability_exchange_report",
    "trace_threshold_curve",
    # transition
    "TransitionType",
    "QuadraticCoefficient",
    "CenterManifoldCoefficients",
    "CubicReduction",
    "TransitionReport",
    "PredictedState",
    "principal_mode_vectors",
    "quadratic_coefficient",
    "center_manifold_coefficients",
    "cubic_reduction",
    "transition_number",
    "transition_number_simplified",
    "classify_transition",
    "predicted_state",
    # simulator
    "Grid",
    "FieldState",
    "AmplitudeSeries",
    "SimulationResult",
    "AmplitudeFit",
    "MIN_GRID_POINTS",
    "make_grid",
    "laplacian_apply",
    "dt_max",
    "initial_state",
    "Stepper",
    "amplitude",
    "simulate",
    "fit_amplitude_dynamics",
    # config
    "AnalysisConfig",
    "SimulateConfig",
    "SweepConfig",
    "OutputConfig",
    "RunConfig",
    "parse_config",
    "parse_config_text",
    "serialize_config",
    "config_sha256",
    # output
    "MANIFEST_NAME",
    "RunManifest",
    "write_csv",
    "sha256_file",
    "write_manifest",
    "read_manifest",
    # sweep
    "SweepCell",
    "resolve_workers",
    "region_evaluator",
    "sweep",
    # artifacts
    "run_steady_state",
    "run_spectrum",
    "run_threshold",
    "run_transition",
    "run_simulate",
    "run_phase_diagram",
    # verification
    "CriterionResult",
    "DEFAULT_SEED",
    "CRITERIA",
    "run_all",
    "default_verify_config",
    # cli
    "main",
]
