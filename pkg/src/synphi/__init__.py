"""synphi: temporal synergy and integrated information for dynamical systems.

Computes, in bits, the temporal mutual information of a system's joint
past/future, whole-minus-sum integrated information, minimum-mutual-information
redundancy and synergy, and the synergy change under disintegration (replacing
a system by its independent twin, or a recording by circular-shift
surrogates). Works on exact transition-probability systems and on empirical
multichannel time series via Gaussian or discrete plug-in estimation.
"""

from .errors import (
    AnalysisError,
    ArgumentError,
    CardinalityError,
    ConvergenceWarning,
    DegenerateChannelError,
    DegenerateCovarianceError,
    InternalConsistencyError,
    LengthError,
    ParseError,
    SynphiError,
    UnknownVariableError,
)
from .estimator import DisintegrationAnalysis
from .info import (
    CovarianceModel,
    DiscreteDistribution,
    SymbolSeries,
    conditional_mi,
    discretize,
    empirical_joint,
    entropy,
    gaussian_cmi,
    gaussian_mi,
    marginalize,
    mutual_information,
    quantile_symbols,
    sample_covariance,
    uniform_distribution,
)
from .measures import (
    EstimatorConfig,
    MeasureBundle,
    delta_synergy,
    delta_synergy_closed_form,
    measure_bundle,
    measure_bundle_gaussian,
    pair_bundle,
    past_future_structure,
    phi_wms,
    redundancy_mmi,
    single_source_mi,
    synergy_mmi,
    temporal_mi,
)
from .pipeline import (
    CorrelationResult,
    PairFailure,
    PairMetrics,
    RunSummary,
    analyze_pair,
    pearson_r,
    run_analysis,
    sample_pairs,
    write_results_csv,
    write_results_jsonl,
)
from .surrogates import (
    SurrogateConfig,
    average_bundles,
    circular_shift,
    surrogate_average,
    surrogate_offsets,
)
from .systems import (
    DynamicalSystem,
    TransitionModel,
    independent_twin,
    joint_past_future,
    make_system_x,
    make_system_y,
    marginal_transition,
    random_system,
    read_tpm,
    simulate,
    state_index,
    state_values,
    stationary_distribution,
    with_stationary_input,
    write_tpm,
)
from .timeseries import TimeSeriesMatrix, as_time_series, load_csv

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "ArgumentError",
    "CardinalityError",
    "ConvergenceWarning",
    "CorrelationResult",
    "CovarianceModel",
    "DegenerateChannelError",
    "DegenerateCovarianceError",
    "DiscreteDistribution",
    "DisintegrationAnalysis",
    "DynamicalSystem",
    "EstimatorConfig",
    "InternalConsistencyError",
    "LengthError",
    "MeasureBundle",
    "PairFailure",
    "PairMetrics",
    "ParseError",
    "RunSummary",
    "SurrogateConfig",
    "SymbolSeries",
    "SynphiError",
    "TimeSeriesMatrix",
    "TransitionModel",
    "UnknownVariableError",
    "analyze_pair",
    "as_time_series",
    "average_bundles",
    "circular_shift",
    "conditional_mi",
    "delta_synergy",
    "delta_synergy_closed_form",
    "discretize",
    "empirical_joint",
    "entropy",
    "gaussian_cmi",
    "gaussian_mi",
    "independent_twin",
    "joint_past_future",
    "load_csv",
    "make_system_x",
    "make_system_y",
    "marginal_transition",
    "marginalize",
    "measure_bundle",
    "measure_bundle_gaussian",
    "mutual_information",
    "pair_bundle",
    "past_future_structure",
    "pearson_r",
    "phi_wms",
    "quantile_symbols",
    "random_system",
    "read_tpm",
    "redundancy_mmi",
    "run_analysis",
    "sample_covariance",
    "sample_pairs",
    "simulate",
    "single_source_mi",
    "state_index",
    "state_values",
    "stationary_distribution",
    "surrogate_average",
    "surrogate_offsets",
    "synergy_mmi",
    "temporal_mi",
    "uniform_distribution",
    "with_stationary_input",
    "write_results_csv",
    "write_results_jsonl",
    "write_tpm",
]
