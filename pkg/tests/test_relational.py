from fractions import Fraction

import numpy as np
import pytest

from deltap.data import BinaryMatrix, ContingencyTable
from deltap.inference import AnalysisConfig, PosteriorSummary, PairResult, analyze_all_pairs
from deltap.relational import build_distance_matrix, build_edges


def summary(mean, p=0.0):
    return PosteriorSummary(mean, 0.01, mean - 0.02, mean + 0.02, p, 1e-4, 40_000)


def result(a, b, m_ab, m_ba, significant=True):
    chosen = "ab" if abs(m_ab) >= abs(m_ba) else "ba"
    relation = ("associated" if m_ab > 0 else "opposed") if significant else "independent-compatible"
    return PairResult(
        a, b, ContingencyTable(1, 1, 1, 1, a, b), summary(m_ab), summary(m_ba),
        chosen, significant, relation, 4.6e-5, 0,
    )


class TestEdges:
    def test_empty(self):
        assert len(build_edges([])) == 0
        assert len(build_edges([result("a", "b", 0.1, 0.05, significant=False)])) == 0

    def test_grief_sadness_like_edge(self):
        (edge,) = build_edges([result("grief", "sadness", 0.04, 0.65)])
        assert (edge.var_a, edge.var_b) == ("sadness", "grief")
        assert edge.weight == 0.65

    def test_opposed_excluded(self):
        assert len(build_edges([result("a", "b", -0.2, -0.1)])) == 0


class TestDistances:
    def test_formula_and_floor(self):
        rs = [result("a", "b", 0.3, 0.1), result("a", "c", -0.1, -0.2), result("b", "c", 0.02, 0.05)]
        d = build_distance_matrix(rs)
        assert d.labels == ("a", "b", "c")
        assert d["a", "b"] == 0.01
        assert d["a", "c"] == pytest.approx(0.01 + 0.3 - (-0.1), abs=1e-12)
        assert d["b", "c"] == pytest.approx(0.01 + 0.3 - 0.05, abs=1e-12)
        assert np.array_equal(d.values, d.values.T)
        assert np.all(np.diag(d.values) == 0)

    def test_three_variable_run_against_hand_values(self):
        # Patterns (x, y, z) with multiplicities; pair counts worked out by hand:
        # (x,y): n00=135 n01=20 n10=10 n11=35; (x,z): 140, 15, 40, 5; (y,z): 130, 15, 50, 5.
        patterns = {(1, 1, 0): 30, (1, 0, 0): 10, (0, 1, 0): 20, (0, 0, 1): 15,
                    (1, 1, 1): 5, (0, 0, 0): 120}
        rows = [p for p, k in patterns.items() for _ in range(k)]
        m = BinaryMatrix(("x", "y", "z"), np.array(rows))
        results = analyze_all_pairs(m, AnalysisConfig(seed=5))
        F = Fraction
        # flat-prior posterior means: a11/(a01+a11) - (a10+a11)/total, total = 204
        means = {
            ("x", "y"): max(F(36, 57) - F(47, 204), F(36, 47) - F(57, 204)),
            ("x", "z"): max(F(6, 22) - F(47, 204), F(6, 47) - F(22, 204)),
            ("y", "z"): max(F(6, 22) - F(57, 204), F(6, 57) - F(22, 204)),
        }
        top = max(means.values())
        d = build_distance_matrix(results)
        for (a, b), m_ in means.items():
            assert d[a, b] == pytest.approx(float(F(1, 100) + top - m_), abs=0.004)
        # and exactly the formula on the sampled means
        top_s = max(r.max_mean for r in results)
        for r in results:
            assert abs(d[r.var_a, r.var_b] - (0.01 + (top_s - r.max_mean))) <= 1e-12
        assert min(d.values[~np.eye(3, dtype=bool)]) == 0.01
