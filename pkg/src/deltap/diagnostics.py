"""MCMC convergence and Monte Carlo error diagnostics.

All functions take draws shaped ``(chains, n)``. A 1-D array is treated as a
single chain.
"""

from __future__ import annotations

import numpy as np


def _as_chains(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2:
        raise ValueError(f"expected (chains, n) draws, got shape {x.shape}")
    return x


def split_rhat(x) -> float:
    """Split-chain potential scale reduction factor.

    Each chain is cut in half so that within-chain drift also inflates the
    statistic. Returns 1.0 for constant input.
    """
    x = _as_chains(x)
    n = x.shape[1] // 2
    if n < 2:
        return float("nan")
    halves = np.concatenate([x[:, :n], x[:, -n:]], axis=0)
    chain_means = halves.mean(axis=1)
    chain_vars = halves.var(axis=1, ddof=1)
    within = chain_vars.mean()
    between = n * chain_means.var(ddof=1)
    if within == 0.0:
        return 1.0 if between == 0.0 else float("inf")
    var_plus = (n - 1) / n * within + between / n
    return float(np.sqrt(var_plus / within))


def _autocovariance(x: np.ndarray) -> np.ndarray:
    """Autocovariance of each row via FFT (biased estimator, lag 0..n-1)."""
    n = x.shape[-1]
    centered = x - x.mean(axis=-1, keepdims=True)
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(centered, n=size, axis=-1)
    acov = np.fft.irfft(f * np.conjugate(f), n=size, axis=-1)[..., :n]
    return acov / n


def effective_sample_size(x) -> float:
    """Multi-chain effective sample size with Geyer's initial monotone sequence."""
    x = _as_chains(x)
    m, n = x.shape
    if n < 4:
        return float(m * n)
    acov = _autocovariance(x)
    chain_var = acov[:, 0] * n / (n - 1.0)
    within = chain_var.mean()
    if within == 0.0:
        return float(m * n)
    var_plus = within * (n - 1.0) / n
    if m > 1:
        var_plus += x.mean(axis=1).var(ddof=1)
    rho = 1.0 - (within - acov.mean(axis=0)) / var_plus
    rho[0] = 1.0

    # Pairwise sums Gamma_k = rho_2k + rho_2k+1, truncated at the first
    # non-positive pair and forced monotone.
    n_pairs = n // 2
    pairs = rho[: 2 * n_pairs].reshape(n_pairs, 2).sum(axis=1)
    positive = pairs > 0
    stop = int(np.argmin(positive)) if not positive.all() else n_pairs
    pairs = np.minimum.accumulate(pairs[:stop]) if stop else pairs[:1]
    tau = -1.0 + 2.0 * pairs.sum()
    tau = max(tau, 1.0 / np.log10(m * n))
    return float(m * n / tau)


def mc_standard_error(x, iid: bool = False) -> float:
    """Monte Carlo standard error of the mean of ``x``."""
    x = _as_chains(x)
    sd = x.std(ddof=1) if x.size > 1 else 0.0
    ess = x.size if iid else effective_sample_size(x)
    return float(sd / np.sqrt(ess))
