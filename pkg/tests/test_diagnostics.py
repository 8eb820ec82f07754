import numpy as np
import pytest

from deltap.diagnostics import effective_sample_size, mc_standard_error, split_rhat


def ar1(phi, n, chains, seed):
    rng = np.random.default_rng(seed)
    x = np.empty((chains, n))
    x[:, 0] = rng.normal(size=chains) / np.sqrt(1 - phi**2)
    eps = rng.normal(size=(chains, n))
    for t in range(1, n):
        x[:, t] = phi * x[:, t - 1] + eps[:, t]
    return x


class TestRhat:
    def test_iid_chains(self):
        x = np.random.default_rng(0).normal(size=(4, 5_000))
        assert split_rhat(x) < 1.005

    def test_separated_chains(self):
        x = np.random.default_rng(1).normal(size=(4, 1_000)) + np.arange(4)[:, None]
        assert split_rhat(x) > 1.5

    def test_drifting_chain_caught_by_split(self):
        x = np.random.default_rng(2).normal(size=(2, 2_000)) + np.linspace(0, 3, 2_000)
        assert split_rhat(x) > 1.1


class TestESS:
    def test_iid(self):
        x = np.random.default_rng(3).normal(size=(4, 10_000))
        assert effective_sample_size(x) == pytest.approx(40_000, rel=0.1)

    def test_ar1(self):
        phi = 0.8
        x = ar1(phi, 20_000, 4, seed=4)
        expected = x.size * (1 - phi) / (1 + phi)
        assert effective_sample_size(x) == pytest.approx(expected, rel=0.2)

    def test_mcse_iid(self):
        x = np.random.default_rng(5).normal(size=10_000)
        assert mc_standard_error(x, iid=True) == pytest.approx(0.01, rel=0.05)
