"""Deterministic quadrature over the probability simplex.

A test oracle for the samplers: posterior expectations are computed by the
centroid (midpoint) rule on a uniform subdivision of the 3-simplex into
``resolution**3`` tetrahedra of equal volume, self-normalised by the
integral of the density on the same grid.

The subdivision uses cumulative coordinates y = (p00, p00+p01, p00+p01+p10)
scaled by ``resolution``, in which the simplex becomes the ordered region
0 <= y1 <= y2 <= y3 <= r. That region is an exact union of Kuhn tetrahedra of
the unit lattice, so no cell straddles the boundary.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ConfigurationError, OracleRangeError
from .posterior import CELLS, DERIVED, DirichletParams, derive_quantities

MIN_RESOLUTION = 20
MAX_RESOLUTION = 256  # 16.8M cells, a few seconds
MAX_CONCENTRATION = 200.0

Functional = Union[str, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class GridSpec:
    resolution: int
    params: DirichletParams

    def __post_init__(self):
        if not MIN_RESOLUTION <= self.resolution <= MAX_RESOLUTION:
            raise ConfigurationError(
                f"resolution must lie in [{MIN_RESOLUTION}, {MAX_RESOLUTION}], "
                f"got {self.resolution}"
            )
        if self.params.total > MAX_CONCENTRATION:
            raise OracleRangeError(
                f"total concentration {self.params.total:g} exceeds {MAX_CONCENTRATION:g}; "
                "use analytic_moments or the direct sampler for this table"
            )


def _evaluate(functional: Functional, p: np.ndarray) -> np.ndarray:
    if callable(functional):
        return np.asarray(functional(p), dtype=float)
    if functional == "indicator_delta_p_negative":
        return (derive_quantities(p)["delta_p_ab"] < 0.0).astype(float)
    if functional in CELLS:
        return p[:, CELLS.index(functional)]
    if functional in DERIVED:
        return derive_quantities(p)[functional]
    raise ValueError(f"unknown functional {functional!r}")


def _kuhn_offsets() -> list[tuple[np.ndarray, tuple[int, int]]]:
    """Centroid offsets of the six Kuhn tetrahedra of a unit cube.

    The tetrahedron where the fractional parts are ordered f[s0] > f[s1] > f[s2]
    has its centroid at f[s0]=3/4, f[s1]=1/2, f[s2]=1/4.
    """
    out = []
    for perm in itertools.permutations(range(3)):
        offset = np.empty(3)
        offset[list(perm)] = (0.75, 0.5, 0.25)
        out.append(offset)
    return out


def _slab_points(c: int, r: int) -> np.ndarray:
    """Cell centroids with y3 in [c, c+1), as simplex points (n, 4)."""
    a, b = np.triu_indices(c + 1)  # 0 <= a <= b <= c
    corners = np.column_stack([a, b, np.full_like(a, c)]).astype(float)
    pieces = []
    for offset in _kuhn_offsets():
        keep = np.ones(len(corners), bool)
        # Within a cube shared by the ordered boundary, only the tetrahedra
        # whose fractional order agrees with y1 <= y2 <= y3 belong to the simplex.
        if offset[0] > offset[1]:
            keep &= a < b
        if offset[1] > offset[2]:
            keep &= b < c
        pieces.append(corners[keep] + offset)
    y = np.concatenate(pieces) / r
    return np.column_stack([y[:, 0], y[:, 1] - y[:, 0], y[:, 2] - y[:, 1], 1.0 - y[:, 2]])


def grid_expectation(spec: GridSpec, functional: Functional) -> float:
    """E[functional(p)] under Dirichlet(spec.params) by self-normalised quadrature."""
    alpha = spec.params.as_array()
    log_norm = math.lgamma(alpha.sum()) - sum(math.lgamma(x) for x in alpha)
    numerators, denominators = [], []
    for c in range(spec.resolution):
        p = _slab_points(c, spec.resolution)
        w = np.exp(log_norm + np.log(p) @ (alpha - 1.0))
        numerators.append(float(np.dot(w, _evaluate(functional, p))))
        denominators.append(float(w.sum()))
    return math.fsum(numerators) / math.fsum(denominators)


def grid_size(resolution: int) -> int:
    return resolution**3
