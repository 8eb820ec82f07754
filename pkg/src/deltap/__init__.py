"""Bayesian added-value analysis of binary co-occurrence data."""

from .data import (
    BinaryMatrix,
    CategoricalColumn,
    ContingencyTable,
    conjoin,
    contingency,
    one_hot_encode,
)
from .inference import (
    AnalysisConfig,
    PairResult,
    PosteriorSummary,
    analyze_all_pairs,
    analyze_pair,
    analyze_table,
    bonferroni_threshold,
    summarize,
)
from .posterior import (
    FLAT_PRIOR,
    DirichletParams,
    SampleSet,
    analytic_moments,
    derive_quantities,
    posterior_params,
    sample_direct,
    sample_mcmc,
)
from .relational import build_distance_matrix, build_edges
from .synthesis import DEFAULT_SUITE, SyntheticSpec, generate_pair, validation_run

__version__ = "0.1.0"
