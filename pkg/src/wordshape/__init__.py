"""Samplers and rate functions for the shape statistics of random words
and their random-matrix counterparts, with Monte-Carlo verification.

Sampling lives in wordmodel, tableaux, and rmt; analytics in
rate_functions and variational; the experiment harness in montecarlo
and cli.
"""

from .errors import NumericFailure
from .montecarlo import (
    ConcentrationReport,
    ExperimentConfig,
    KSResult,
    SlopeTable,
    TailEstimate,
    concentration_check,
    estimate_eigen_tail,
    estimate_row_tail,
    identity_ks_test,
    ldp_slope_experiment,
)
from .rate_functions import (
    RateValue,
    k_eta_asymptotic,
    rate_I_r,
    rate_J,
    rate_J_prime,
    rate_J_second,
    rate_K_closed,
)
from .rmt import (
    BlockEnsembleSpec,
    SpectrumSample,
    brownian_functional_sample,
    log_joint_density,
    sample_block_traceless,
    sample_gue_spectrum,
    traceless,
)
from .tableaux import (
    NormalizedShape,
    YoungShape,
    lis_weak,
    normalize_nonuniform,
    normalize_uniform,
    rsk_shape,
    v1_dp,
    v1_restricted,
    v_k_oracle,
)
from .variational import (
    DiscreteMeasure,
    EquilibriumMeasure,
    equilibrium_measure,
    inf_convolution_check,
    legendre_S,
    rate_K_eta,
    rate_K_variational,
    spectral_rate,
)
from .wordmodel import (
    AlphabetDistribution,
    CountMatrix,
    Word,
    multiplicity_stats,
    prefix_counts,
    sample_word,
    uniform,
)

__version__ = "0.1.0"

__all__ = [
    "AlphabetDistribution",
    "BlockEnsembleSpec",
    "ConcentrationReport",
    "CountMatrix",
    "DiscreteMeasure",
    "EquilibriumMeasure",
    "ExperimentConfig",
    "KSResult",
    "NormalizedShape",
    "NumericFailure",
    "RateValue",
    "SlopeTable",
    "SpectrumSample",
    "TailEstimate",
    "Word",
    "YoungShape",
    "brownian_functional_sample",
    "concentration_check",
    "equilibrium_measure",
    "estimate_eigen_tail",
    "estimate_row_tail",
    "identity_ks_test",
    "inf_convolution_check",
    "k_eta_asymptotic",
    "ldp_slope_experiment",
    "legendre_S",
    "lis_weak",
    "log_joint_density",
    "multiplicity_stats",
    "normalize_nonuniform",
    "normalize_uniform",
    "prefix_counts",
    "rate_I_r",
    "rate_J",
    "rate_J_prime",
    "rate_J_second",
    "rate_K_closed",
    "rate_K_eta",
    "rate_K_variational",
    "rsk_shape",
    "sample_block_traceless",
    "sample_gue_spectrum",
    "sample_word",
    "spectral_rate",
    "traceless",
    "uniform",
    "v1_dp",
    "v1_restricted",
    "v_k_oracle",
]
