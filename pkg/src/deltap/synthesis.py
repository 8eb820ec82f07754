"""Synthetic binary pairs with prescribed P(A=1), P(B=1) and ΔP(A, B).

B is drawn first; A is then drawn from P(A=1|B=1) = P(A) + ΔP when B=1 and
from the complementary conditional when B=0. The latter follows from the law
of total probability so that the marginal of A comes out as requested:

    P(A=1|B=0) = (P(A) - P(A=1|B=1) P(B)) / (1 - P(B))
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .data import BinaryMatrix, contingency
from .errors import ConfigurationError
from .inference import AnalysisConfig, PosteriorSummary, analyze_pair, summarize
from .posterior import SampleSet, posterior_params

_EPS = 1e-12


@dataclass(frozen=True)
class SyntheticSpec:
    prob_a: float
    prob_b: float
    delta_p: float
    n: int
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.prob_a < 1.0:
            raise ConfigurationError(f"prob_a must lie in (0, 1), got {self.prob_a}")
        if not 0.0 < self.prob_b < 1.0:
            raise ConfigurationError(f"prob_b must lie in (0, 1), got {self.prob_b}")
        if int(self.n) < 1:
            raise ConfigurationError(f"n must be at least 1, got {self.n}")
        given_b = self.prob_a + self.delta_p
        if not -_EPS <= given_b <= 1.0 + _EPS:
            raise ConfigurationError(
                f"prob_a + delta_p = {given_b:.6g} violates the bound 0 <= P(A=1|B=1) <= 1"
            )
        given_not_b = self._given_not_b()
        if not -_EPS <= given_not_b <= 1.0 + _EPS:
            raise ConfigurationError(
                f"(prob_a - (prob_a + delta_p) * prob_b) / (1 - prob_b) = {given_not_b:.6g} "
                "violates the bound 0 <= P(A=1|B=0) <= 1"
            )

    def _given_not_b(self) -> float:
        return (self.prob_a - (self.prob_a + self.delta_p) * self.prob_b) / (1.0 - self.prob_b)

    @property
    def prob_a_given_b(self) -> float:
        return min(1.0, max(0.0, self.prob_a + self.delta_p))

    @property
    def prob_a_given_not_b(self) -> float:
        return min(1.0, max(0.0, self._given_not_b()))

    def cell_probabilities(self) -> tuple[float, float, float, float]:
        """Population (p00, p01, p10, p11) implied by the spec."""
        pb, g1, g0 = self.prob_b, self.prob_a_given_b, self.prob_a_given_not_b
        return ((1 - pb) * (1 - g0), pb * (1 - g1), (1 - pb) * g0, pb * g1)

    def with_seed(self, seed: int) -> "SyntheticSpec":
        return SyntheticSpec(self.prob_a, self.prob_b, self.delta_p, self.n, seed)


def generate_pair(spec: SyntheticSpec, names=("A", "B")) -> BinaryMatrix:
    """Draw ``spec.n`` instances of (A, B); deterministic given ``spec.seed``."""
    rng = np.random.default_rng(spec.seed)
    b = rng.random(spec.n) < spec.prob_b
    u = rng.random(spec.n)
    a = u < np.where(b, spec.prob_a_given_b, spec.prob_a_given_not_b)
    return BinaryMatrix(tuple(names), np.column_stack([a, b]).astype(np.int8))


def derive_seed(*parts) -> int:
    digest = hashlib.sha256("\x1f".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def replicate(spec: SyntheticSpec, repetitions: int) -> list[SyntheticSpec]:
    """Copies of ``spec`` with independent seeds derived from its own."""
    return [spec.with_seed(derive_seed(spec.seed, "rep", i)) for i in range(repetitions)]


def _sampling_seed(spec: SyntheticSpec, config: AnalysisConfig) -> int:
    return derive_seed(config.seed, spec.seed, "posterior")


def validation_run(
    specs, config: AnalysisConfig = AnalysisConfig()
) -> list[tuple[SyntheticSpec, PosteriorSummary]]:
    """Generate data for each spec and summarise the ΔP(A, B) posterior."""
    out = []
    for spec in specs:
        matrix = generate_pair(spec)
        result = analyze_pair(matrix, "A", "B", config, 1, _sampling_seed(spec, config))
        out.append((spec, result.summary_ab))
    return out


def simulate_spec(
    spec: SyntheticSpec, config: AnalysisConfig = AnalysisConfig()
) -> tuple[BinaryMatrix, SampleSet, PosteriorSummary]:
    """Like one step of :func:`validation_run` but also returns data and draws."""
    matrix = generate_pair(spec)
    params = posterior_params(contingency(matrix, "A", "B"), config.prior)
    samples = config.sample(params, _sampling_seed(spec, config))
    return matrix, samples, summarize(samples, "ab", config.ci_level, config.min_draws)


# Eight settings covering positive, negative and null added values, rare and
# common marginals, and N in {100, 1000, 10000}. Specs 0-2 differ only in N.
DEFAULT_SUITE = (
    SyntheticSpec(prob_a=0.3, prob_b=0.4, delta_p=0.2, n=100, seed=101),
    SyntheticSpec(prob_a=0.3, prob_b=0.4, delta_p=0.2, n=1_000, seed=102),
    SyntheticSpec(prob_a=0.3, prob_b=0.4, delta_p=0.2, n=10_000, seed=103),
    SyntheticSpec(prob_a=0.4, prob_b=0.3, delta_p=-0.15, n=1_000, seed=104),
    SyntheticSpec(prob_a=0.5, prob_b=0.5, delta_p=0.0, n=1_000, seed=105),
    SyntheticSpec(prob_a=0.05, prob_b=0.1, delta_p=0.05, n=10_000, seed=106),
    SyntheticSpec(prob_a=0.1, prob_b=0.2, delta_p=-0.03, n=10_000, seed=107),
    SyntheticSpec(prob_a=0.2, prob_b=0.1, delta_p=0.3, n=1_000, seed=108),
)
