"""Posterior summaries of the added value and the all-pairs screening driver."""

from __future__ import annotations

import hashlib
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .data import BinaryMatrix, ContingencyTable, contingency
from .errors import ConfigurationError, DataShapeError, PreconditionError
from .posterior import FLAT_PRIOR, DirichletParams, SampleSet, posterior_params, sample

log = logging.getLogger(__name__)

ORIENTATIONS = ("ab", "ba")
ASSOCIATED = "associated"
OPPOSED = "opposed"
INDEPENDENT = "independent-compatible"


@dataclass(frozen=True)
class AnalysisConfig:
    """Settings for one analysis run. Defaults follow the published setup."""

    base_significance: float = 0.02
    prior: DirichletParams = FLAT_PRIOR
    sampler: str = "direct"
    draws: int = 40_000
    chains: int = 4
    steps: int = 10_000
    burn_in: int = 1_000
    thin: int = 1
    seed: int = 0
    ci_level: float = 0.95
    min_draws: int = 1_000
    workers: int = 1

    def __post_init__(self):
        if not 0.0 < self.base_significance < 1.0:
            raise ConfigurationError("base_significance must lie in (0, 1)")
        if not 0.0 < self.ci_level < 1.0:
            raise ConfigurationError("ci_level must lie in (0, 1)")
        if self.sampler not in ("direct", "mcmc"):
            raise ConfigurationError(f"unknown sampler {self.sampler!r}")
        if not isinstance(self.prior, DirichletParams):
            object.__setattr__(self, "prior", DirichletParams.from_sequence(self.prior))
        for name in ("draws", "chains", "steps", "thin", "workers"):
            if int(getattr(self, name)) < 1:
                raise ConfigurationError(f"{name} must be at least 1")
        if self.sampler == "mcmc" and self.chains < 2:
            raise ConfigurationError("the MCMC sampler needs at least 2 chains")
        if self.burn_in < 0 or self.min_draws < 1:
            raise ConfigurationError("burn_in must be >= 0 and min_draws >= 1")
        if self.n_draws < self.min_draws:
            raise ConfigurationError(
                f"{self.n_draws} posterior draws is below the floor of {self.min_draws}"
            )

    @property
    def n_draws(self) -> int:
        return self.draws if self.sampler == "direct" else self.chains * self.steps

    def sample(self, params: DirichletParams, seed) -> SampleSet:
        return sample(
            params,
            self.sampler,
            size=self.draws,
            chains=self.chains,
            steps=self.steps,
            burn_in=self.burn_in,
            thin=self.thin,
            seed=seed,
        )


@dataclass(frozen=True)
class PosteriorSummary:
    """Summary of the added-value posterior in one orientation.

    ``p_value`` is the two-sided tail mass at zero. When no draw falls on the
    far side it is 0.0, which means "below ``resolution``" (1/S).
    """

    mean: float
    sd: float
    ci_low: float
    ci_high: float
    p_value: float
    mc_standard_error: float
    n_draws: int
    ci_level: float = 0.95
    prob_a: float = float("nan")
    prob_a_given_b: float = float("nan")
    prob_a_given_b_sd: float = float("nan")

    @property
    def resolution(self) -> float:
        return 1.0 / self.n_draws

    @property
    def below_resolution(self) -> bool:
        return self.p_value == 0.0

    @property
    def p_value_text(self) -> str:
        if self.below_resolution:
            return f"<{self.resolution:.6g}"
        return f"{self.p_value:.6g}"

    def significant_at(self, threshold: float) -> bool:
        if self.below_resolution:
            return self.resolution <= threshold
        return self.p_value < threshold


def tail_p_value(x: np.ndarray) -> float:
    """2 * min(P(x <= 0), P(x >= 0)) estimated from draws, clipped to [0, 1]."""
    x = np.asarray(x)
    low = np.count_nonzero(x <= 0.0) / x.size
    high = np.count_nonzero(x >= 0.0) / x.size
    return float(min(1.0, 2.0 * min(low, high)))


def summarize(
    samples: SampleSet, which: str = "ab", ci_level: float = 0.95, min_draws: int = 1_000
) -> PosteriorSummary:
    """Mean, sd, equal-tailed credible interval and tail p-value of ΔP."""
    if which not in ORIENTATIONS:
        raise ValueError(f"orientation must be 'ab' or 'ba', got {which!r}")
    if samples.size < min_draws:
        raise PreconditionError(
            f"{samples.size} draws is below the floor of {min_draws}; "
            "Monte Carlo error would dominate"
        )
    if which == "ba":
        samples = samples.transposed()
    x = samples.delta_p_ab
    lo, hi = np.quantile(x, [(1.0 - ci_level) / 2.0, (1.0 + ci_level) / 2.0])
    sd = float(x.std(ddof=1))
    ess = samples.effective_sample_size("delta_p_ab")
    return PosteriorSummary(
        mean=float(x.mean()),
        sd=sd,
        ci_low=float(lo),
        ci_high=float(hi),
        p_value=tail_p_value(x),
        mc_standard_error=sd / float(np.sqrt(ess)),
        n_draws=samples.size,
        ci_level=ci_level,
        prob_a=float(samples.prob_a.mean()),
        prob_a_given_b=float(samples.prob_a_given_b.mean()),
        prob_a_given_b_sd=float(samples.prob_a_given_b.std(ddof=1)),
    )


def bonferroni_threshold(base: float, num_tests: int) -> float:
    if num_tests < 1:
        raise ValueError("num_tests must be at least 1")
    return base / num_tests


def pair_seed(master_seed: int, a: str, b: str) -> int:
    """Stable 63-bit seed for an unordered pair, independent of processing order."""
    lo, hi = sorted((str(a), str(b)))
    digest = hashlib.sha256(f"{int(master_seed)}\x1f{lo}\x1f{hi}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass(frozen=True)
class PairResult:
    var_a: str
    var_b: str
    table: ContingencyTable
    summary_ab: PosteriorSummary
    summary_ba: PosteriorSummary
    chosen_orientation: str
    significant: bool
    relation: str
    threshold: float
    seed: int
    converged: bool = True
    warnings: tuple[str, ...] = field(default=())
    sampler_metadata: dict = field(default_factory=dict, compare=False)

    @property
    def chosen(self) -> PosteriorSummary:
        return self.summary_ab if self.chosen_orientation == "ab" else self.summary_ba

    @property
    def reported_pair(self) -> tuple[str, str]:
        """(A, B) labels in the chosen orientation."""
        if self.chosen_orientation == "ab":
            return self.var_a, self.var_b
        return self.var_b, self.var_a

    @property
    def p_value(self) -> float:
        return self.chosen.p_value

    @property
    def max_mean(self) -> float:
        return max(self.summary_ab.mean, self.summary_ba.mean)

    @property
    def degenerate(self) -> bool:
        return any(w.startswith("degenerate") for w in self.warnings)


def choose_orientation(
    var_a: str, var_b: str, ab: PosteriorSummary, ba: PosteriorSummary
) -> str:
    """Orientation with the larger |mean ΔP|; exact ties go to the smaller A label."""
    if abs(ab.mean) > abs(ba.mean):
        return "ab"
    if abs(ab.mean) < abs(ba.mean):
        return "ba"
    return "ab" if var_a <= var_b else "ba"


def classify(significant: bool, mean: float) -> str:
    if significant and mean > 0:
        return ASSOCIATED
    if significant and mean < 0:
        return OPPOSED
    return INDEPENDENT


def analyze_table(
    table: ContingencyTable,
    config: AnalysisConfig = AnalysisConfig(),
    num_tests: int = 1,
    seed: int | None = None,
) -> PairResult:
    """Sample the posterior of one table once and summarise both orientations."""
    if seed is None:
        seed = pair_seed(config.seed, table.label_a, table.label_b)
    params = posterior_params(table, config.prior)
    samples = config.sample(params, seed)
    ab = summarize(samples, "ab", config.ci_level, config.min_draws)
    ba = summarize(samples, "ba", config.ci_level, config.min_draws)
    threshold = bonferroni_threshold(config.base_significance, num_tests)
    chosen = choose_orientation(table.label_a, table.label_b, ab, ba)
    summary = ab if chosen == "ab" else ba
    significant = summary.significant_at(threshold)

    warnings = []
    if table.degenerate:
        warnings.append(
            f"degenerate input: {table.label_a!r} or {table.label_b!r} is constant"
        )
    if table.n == 0:
        warnings.append("no complete observations for this pair")
    converged = bool(samples.metadata.get("converged", True))
    if not converged:
        warnings.append("MCMC not converged (split R-hat above threshold)")
    for w in warnings:
        log.warning("%s/%s: %s", table.label_a, table.label_b, w)

    return PairResult(
        var_a=table.label_a,
        var_b=table.label_b,
        table=table,
        summary_ab=ab,
        summary_ba=ba,
        chosen_orientation=chosen,
        significant=significant,
        relation=classify(significant, summary.mean),
        threshold=threshold,
        seed=int(seed),
        converged=converged,
        warnings=tuple(warnings),
        sampler_metadata=dict(samples.metadata),
    )


def analyze_pair(
    matrix: BinaryMatrix,
    a: str,
    b: str,
    config: AnalysisConfig = AnalysisConfig(),
    num_tests: int = 1,
    seed: int | None = None,
) -> PairResult:
    return analyze_table(contingency(matrix, a, b), config, num_tests, seed)


def analyze_all_pairs(
    matrix: BinaryMatrix, config: AnalysisConfig = AnalysisConfig()
) -> list[PairResult]:
    """Analyse every unordered pair of variables with a Bonferroni threshold.

    Pairs are formed from the sorted labels, A being the smaller label, so
    the output does not depend on column order. Each pair's seed depends only
    on the master seed and the two labels, so results do not depend on the
    number of workers either.
    """
    if matrix.n_variables < 2:
        raise DataShapeError("pairwise analysis needs at least two variables")
    labels = sorted(matrix.variable_names)
    pairs = list(itertools.combinations(labels, 2))
    num_tests = len(pairs)

    def run(pair):
        return analyze_pair(matrix, pair[0], pair[1], config, num_tests)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(run, pairs))
    return [run(p) for p in pairs]


def with_overrides(config: AnalysisConfig, **changes) -> AnalysisConfig:
    """Copy of ``config`` with the non-None entries of ``changes`` applied."""
    return replace(config, **{k: v for k, v in changes.items() if v is not None})
