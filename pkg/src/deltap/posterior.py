"""Dirichlet posterior over the four cell probabilities of a 2x2 table.

Two samplers target the same distribution:

* :func:`sample_direct` draws exactly by normalising independent gamma
  variates (the fast default).
* :func:`sample_mcmc` runs random-walk Metropolis on the additive log-ratio
  transform of the simplex, with several independently seeded chains.

Both return a :class:`SampleSet` whose derived quantities (marginals,
conditionals and added values in both orientations) are computed per draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .data import ContingencyTable
from .diagnostics import effective_sample_size, split_rhat
from .errors import ConfigurationError, PreconditionError

CELLS = ("p00", "p01", "p10", "p11")
DERIVED = (
    "prob_a",
    "prob_b",
    "prob_a_given_b",
    "prob_b_given_a",
    "delta_p_ab",
    "delta_p_ba",
)
RHAT_THRESHOLD = 1.01
DENOMINATOR_FLOOR = 1e-300
TARGET_ACCEPTANCE = 0.30


@dataclass(frozen=True)
class DirichletParams:
    """Concentration parameters, ordered as the cells (00, 01, 10, 11)."""

    alpha00: float = 1.0
    alpha01: float = 1.0
    alpha10: float = 1.0
    alpha11: float = 1.0

    def __post_init__(self):
        for name in ("alpha00", "alpha01", "alpha10", "alpha11"):
            value = float(getattr(self, name))
            if not (value > 0.0 and math.isfinite(value)):
                raise ConfigurationError(
                    f"Dirichlet parameter {name} must be positive and finite, got {value!r}"
                )
            object.__setattr__(self, name, value)

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "DirichletParams":
        values = list(values)
        if len(values) == 1:
            values = values * 4
        if len(values) != 4:
            raise ConfigurationError(f"need 1 or 4 Dirichlet parameters, got {len(values)}")
        return cls(*values)

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha00, self.alpha01, self.alpha10, self.alpha11])

    def transpose(self) -> "DirichletParams":
        return DirichletParams(self.alpha00, self.alpha10, self.alpha01, self.alpha11)

    @property
    def total(self) -> float:
        return float(self.as_array().sum())


FLAT_PRIOR = DirichletParams()


def posterior_params(
    table: ContingencyTable, prior: DirichletParams = FLAT_PRIOR
) -> DirichletParams:
    """Conjugate update: counts plus prior concentrations."""
    if not isinstance(prior, DirichletParams):
        prior = DirichletParams.from_sequence(prior)
    return DirichletParams(*(np.array(table.counts, dtype=float) + prior.as_array()))


def derive_quantities(draws: np.ndarray) -> dict[str, np.ndarray]:
    """Marginals, conditionals and added values for each simplex draw.

    ``draws`` has shape ``(S, 4)`` in cell order (00, 01, 10, 11). The added
    values use the identity p11 - P(A)P(B) = p00*p11 - p01*p10 (valid on the
    simplex), so both orientations share one numerator and therefore always
    have the same sign.
    """
    draws = np.asarray(draws, dtype=float)
    p00, p01, p10, p11 = draws.T
    prob_a = p10 + p11
    prob_b = p01 + p11
    association = p00 * p11 - p01 * p10
    return {
        "prob_a": prob_a,
        "prob_b": prob_b,
        "prob_a_given_b": p11 / prob_b,
        "prob_b_given_a": p11 / prob_a,
        "delta_p_ab": association / prob_b,
        "delta_p_ba": association / prob_a,
    }


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Posterior draws of the cell probabilities plus per-draw derived values.

    ``draws`` is ``(S, 4)``; for MCMC output the rows are chain-major so
    ``draws.reshape(chains, -1, 4)`` recovers the individual chains.
    """

    draws: np.ndarray
    sampler: str
    chains: int = 1
    metadata: Mapping = field(default_factory=dict)

    def __post_init__(self):
        draws = np.array(self.draws, dtype=float)
        if draws.ndim != 2 or draws.shape[1] != 4:
            raise ValueError(f"draws must have shape (S, 4), got {draws.shape}")
        if draws.shape[0] % self.chains:
            raise ValueError("draw count is not a multiple of the chain count")
        draws.setflags(write=False)
        object.__setattr__(self, "draws", draws)
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))
        for name, values in derive_quantities(draws).items():
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    def __len__(self) -> int:
        return self.draws.shape[0]

    @property
    def size(self) -> int:
        return self.draws.shape[0]

    def cell(self, name: str) -> np.ndarray:
        return self.draws[:, CELLS.index(name)]

    def quantity(self, name: str) -> np.ndarray:
        if name in CELLS:
            return self.cell(name)
        if name not in DERIVED:
            raise KeyError(f"unknown quantity {name!r}")
        return getattr(self, name)

    def by_chain(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values).reshape(self.chains, -1)

    def transposed(self) -> "SampleSet":
        """The same draws seen with A and B swapped (p01 <-> p10)."""
        return SampleSet(
            self.draws[:, [0, 2, 1, 3]], self.sampler, self.chains, self.metadata
        )

    def effective_sample_size(self, name: str) -> float:
        if self.sampler == "direct":
            return float(self.size)
        return effective_sample_size(self.by_chain(self.quantity(name)))

    def same_draws(self, other: "SampleSet") -> bool:
        return np.array_equal(self.draws, other.draws)


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def _bad_rows(p: np.ndarray) -> np.ndarray:
    return (
        ((p[:, 1] + p[:, 3]) < DENOMINATOR_FLOOR)
        | ((p[:, 2] + p[:, 3]) < DENOMINATOR_FLOOR)
        | ~np.all((p > 0.0) & (p < 1.0), axis=1)
    )


def sample_direct(params: DirichletParams, size: int = 40_000, seed=0) -> SampleSet:
    """Exact i.i.d. Dirichlet draws from normalised unit-scale gamma variates."""
    if size < 1:
        raise PreconditionError(f"size must be at least 1, got {size}")
    rng = np.random.Generator(np.random.PCG64(_seed_sequence(seed)))
    alpha = params.as_array()
    redraws = 0
    # All-zero gamma rows (possible for tiny concentrations) give NaN and are
    # redrawn together with the rows that fail the denominator guard.
    with np.errstate(invalid="ignore", divide="ignore"):
        g = rng.standard_gamma(alpha, size=(size, 4))
        p = g / g.sum(axis=1, keepdims=True)
        bad = _bad_rows(p)
        while bad.any():
            k = int(bad.sum())
            redraws += k
            g = rng.standard_gamma(alpha, size=(k, 4))
            p[bad] = g / g.sum(axis=1, keepdims=True)
            bad = _bad_rows(p)
    return SampleSet(
        p,
        "direct",
        1,
        {"sampler": "direct", "size": size, "seed": seed, "redraws": redraws},
    )


# -- MCMC on the additive log-ratio transform ------------------------------
#
# With y_i = log(p_i / p00) for i in (01, 10, 11), the Dirichlet density times
# the Jacobian prod(p) collapses to  sum_i alpha_i * log p_i(y), a concave
# function of y.


def alr(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return np.log(p[..., 1:]) - np.log(p[..., :1])


def alr_inverse(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    full = np.concatenate([np.zeros(y.shape[:-1] + (1,)), y], axis=-1)
    full -= full.max(axis=-1, keepdims=True)
    e = np.exp(full)
    return e / e.sum(axis=-1, keepdims=True)


def alr_log_target(y: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Unnormalised log density of ALR coordinates under Dirichlet(alpha)."""
    y = np.asarray(y, dtype=float)
    top = np.maximum(y.max(axis=-1), 0.0)
    lse = top + np.log(np.exp(-top) + np.exp(y - top[..., None]).sum(axis=-1))
    return y @ alpha[1:] - alpha.sum() * lse


def _laplace_cholesky(alpha: np.ndarray) -> np.ndarray:
    """Cholesky factor of the inverse Hessian of the ALR target at its mode."""
    total = alpha.sum()
    q = alpha[1:] / total
    cov = (np.diag(1.0 / q) + 1.0 / (alpha[0] / total)) / total
    return np.linalg.cholesky(cov)


def sample_mcmc(
    params: DirichletParams,
    chains: int = 4,
    steps: int = 10_000,
    burn_in: int = 1_000,
    seed=0,
    thin: int = 1,
    adapt_every: int = 50,
) -> SampleSet:
    """Random-walk Metropolis on the ALR coordinates of the simplex.

    Proposals are Gaussian with the Laplace-approximation covariance times a
    per-chain scale. The scale is tuned toward 30% acceptance during burn-in
    and frozen afterwards. ``thin`` Metropolis updates are made per retained
    draw, so each chain keeps exactly ``steps`` draws. Each chain uses its own stream spawned from
    ``seed``; chains are advanced in lockstep, which gives the same result as
    running them one after another.
    """
    if chains < 2:
        raise PreconditionError("MCMC needs at least 2 chains for convergence diagnostics")
    if steps < 1 or burn_in < 0 or thin < 1:
        raise PreconditionError("steps and thin must be >= 1, burn_in >= 0")
    alpha = params.as_array()
    dim = 3
    total_steps = burn_in + steps * thin
    chol = _laplace_cholesky(alpha)
    mode = np.log(alpha[1:] / alpha[0])

    streams = _seed_sequence(seed).spawn(chains)
    start = np.empty((chains, dim))
    noise = np.empty((chains, total_steps, dim))
    log_u = np.empty((chains, total_steps))
    for c, ss in enumerate(streams):
        rng = np.random.Generator(np.random.PCG64(ss))
        # Over-dispersed start so that split-R-hat is meaningful.
        start[c] = mode + 2.0 * chol @ rng.standard_normal(dim)
        noise[c] = rng.standard_normal((total_steps, dim)) @ chol.T
        log_u[c] = np.log(rng.random(total_steps))

    y = start
    lp = alr_log_target(y, alpha)
    scale = np.full(chains, 2.38 / math.sqrt(dim))
    out = np.empty((chains, steps, dim))
    accepted = np.zeros(chains, dtype=np.int64)
    window = np.zeros(chains, dtype=np.int64)
    guarded = 0

    for t in range(total_steps):
        proposal = y + scale[:, None] * noise[:, t]
        lp_prop = alr_log_target(proposal, alpha)
        accept = log_u[:, t] < lp_prop - lp
        if accept.any():
            p = alr_inverse(proposal[accept])
            ok = ~_bad_rows(p)
            guarded += int((~ok).sum())
            accept[accept] = ok
            y = np.where(accept[:, None], proposal, y)
            lp = np.where(accept, lp_prop, lp)
        if t < burn_in:
            window += accept
            if (t + 1) % adapt_every == 0:
                rate = window / adapt_every
                gain = 1.0 / math.sqrt((t + 1) / adapt_every)
                scale *= np.exp(gain * (rate - TARGET_ACCEPTANCE))
                window[:] = 0
        else:
            accepted += accept
            k, r = divmod(t - burn_in + 1, thin)
            if r == 0:
                out[:, k - 1] = y

    draws = alr_inverse(out.reshape(-1, dim))
    per_chain = draws.reshape(chains, steps, 4)
    rhat = {name: split_rhat(per_chain[:, :, i]) for i, name in enumerate(CELLS)}
    converged = all(r <= RHAT_THRESHOLD for r in rhat.values())
    meta = {
        "sampler": "mcmc",
        "chains": chains,
        "steps": steps,
        "burn_in": burn_in,
        "thin": thin,
        "seed": seed,
        "rhat": rhat,
        "converged": converged,
        "acceptance_rate": (accepted / (steps * thin)).tolist(),
        "proposal_scale": scale.tolist(),
        "redraws": guarded,
    }
    return SampleSet(draws, "mcmc", chains, meta)


@dataclass(frozen=True)
class AnalyticMoments:
    """Closed-form posterior means (and variances) under Dirichlet(params)."""

    cell_means: tuple[float, float, float, float]
    cell_variances: tuple[float, float, float, float]
    prob_a: float
    prob_b: float
    prob_a_given_b: float
    prob_b_given_a: float
    prob_a_var: float
    prob_a_given_b_var: float

    @property
    def delta_p_ab(self) -> float:
        return self.prob_a_given_b - self.prob_a

    @property
    def delta_p_ba(self) -> float:
        return self.prob_b_given_a - self.prob_b


def _beta_var(a: float, b: float) -> float:
    return a * b / ((a + b) ** 2 * (a + b + 1.0))


def analytic_moments(params: DirichletParams) -> AnalyticMoments:
    """Means of the cells, marginals and conditionals.

    Aggregating Dirichlet components gives P(A=1) ~ Beta(a10+a11, a00+a01)
    and P(A=1|B=1) = p11/(p01+p11) ~ Beta(a11, a01).
    """
    a00, a01, a10, a11 = params.as_array()
    total = a00 + a01 + a10 + a11
    cells = params.as_array()
    means = cells / total
    variances = cells * (total - cells) / (total**2 * (total + 1.0))
    return AnalyticMoments(
        cell_means=tuple(float(m) for m in means),
        cell_variances=tuple(float(v) for v in variances),
        prob_a=float((a10 + a11) / total),
        prob_b=float((a01 + a11) / total),
        prob_a_given_b=float(a11 / (a01 + a11)),
        prob_b_given_a=float(a11 / (a10 + a11)),
        prob_a_var=_beta_var(a10 + a11, a00 + a01),
        prob_a_given_b_var=_beta_var(a11, a01),
    )


def sample(params: DirichletParams, kind: str = "direct", *, size=40_000, chains=4,
           steps=10_000, burn_in=1_000, thin=1, seed=0) -> SampleSet:
    """Dispatch to the direct or MCMC sampler by name."""
    if kind == "direct":
        return sample_direct(params, size=size, seed=seed)
    if kind == "mcmc":
        return sample_mcmc(
            params, chains=chains, steps=steps, burn_in=burn_in, seed=seed, thin=thin
        )
    raise ConfigurationError(f"unknown sampler {kind!r} (expected 'direct' or 'mcmc')")
