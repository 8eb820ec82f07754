"""Edge lists and distance matrices derived from all-pairs results."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .inference import PairResult

DISTANCE_FLOOR = 0.01


@dataclass(frozen=True)
class Edge:
    var_a: str
    var_b: str
    weight: float
    p_value: float
    p_value_text: str = ""


@dataclass(frozen=True)
class EdgeList:
    edges: tuple[Edge, ...]

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)


def build_edges(results: Sequence[PairResult]) -> EdgeList:
    """Significant pairs whose reported (largest |ΔP|) orientation is positive.

    The weight is the larger of the two orientation means.
    """
    edges = []
    for r in results:
        if r.significant and r.chosen.mean > 0:
            a, b = r.reported_pair
            edges.append(Edge(a, b, r.max_mean, r.p_value, r.chosen.p_value_text))
    return EdgeList(tuple(edges))


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", values)

    def __getitem__(self, pair: tuple[str, str]) -> float:
        i, j = (self.labels.index(x) for x in pair)
        return float(self.values[i, j])


def build_distance_matrix(results: Sequence[PairResult]) -> DistanceMatrix:
    """d(A, B) = 0.01 + M - max(<ΔP(A,B)>, <ΔP(B,A)>) for every pair.

    M is the largest pairwise maximum over all pairs, so the closest pair
    sits at exactly 0.01. Non-significant pairs are included; the diagonal
    is 0.
    """
    labels = sorted({r.var_a for r in results} | {r.var_b for r in results})
    index = {name: i for i, name in enumerate(labels)}
    values = np.zeros((len(labels), len(labels)))
    if not results:
        return DistanceMatrix(tuple(labels), values)
    top = max(r.max_mean for r in results)
    for r in results:
        d = DISTANCE_FLOOR + (top - r.max_mean)
        i, j = index[r.var_a], index[r.var_b]
        values[i, j] = values[j, i] = d
    return DistanceMatrix(tuple(labels), values)
