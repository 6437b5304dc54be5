"""Dyadic frequency grids and Chebyshev interpolation along segments.

A segment of length 2**level wavelengths gets a uniform grid of
2**(level+1) * m_freq + 1 frequencies covering [-omega, omega]. Rounding
the modulation frequency onto this grid is what aligns the per-segment
transforms with a plain FFT: grid spacing times point spacing equals
2*pi / (2**level * m_freq * p) exactly.

Chebyshev nodes of the first kind (no interval endpoints) are placed in
the arclength interval of a segment; interpolation from the nodes to the
segment's own points uses the barycentric form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FrequencyGrid",
    "frequency_grid",
    "round_to_grid",
    "chebyshev_nodes",
    "interpolation_matrix",
    "ChebGrid",
]


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency grid {-omega + j * dk} for one segment level."""

    omega: float
    level: int
    m_freq: int
    points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n_bins = 2 ** (self.level + 1) * self.m_freq + 1
        dk = self.omega / (2**self.level * self.m_freq)
        object.__setattr__(self, "points", -self.omega + dk * np.arange(n_bins))

    @property
    def spacing(self) -> float:
        return self.omega / (2**self.level * self.m_freq)

    @property
    def size(self) -> int:
        return 2 ** (self.level + 1) * self.m_freq + 1

    def round_index(self, k: float) -> int:
        """Index of the nearest gridpoint; exact midpoints round toward +inf."""
        # tolerate float overshoot of |a.t| <= 1 by a few ulps
        if abs(k) > self.omega * (1.0 + 1e-9):
            raise ValueError(f"frequency {k!r} outside [-omega, omega]")
        idx = int(np.floor((k + self.omega) / self.spacing + 0.5))
        return min(max(idx, 0), self.size - 1)


def frequency_grid(omega: float, level: int, m_freq: int) -> FrequencyGrid:
    return FrequencyGrid(omega, level, m_freq)


def round_to_grid(k: float, grid: FrequencyGrid) -> float:
    """Nearest gridpoint value to k (ties toward +inf); |k - result| <= dk/2."""
    return float(grid.points[grid.round_index(k)])


def chebyshev_nodes(lo: float, hi: float, m: int) -> np.ndarray:
    """m Chebyshev points of the first kind mapped to [lo, hi], descending."""
    j = np.arange(m)
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(np.pi * (2 * j + 1) / (2 * m))


def interpolation_matrix(s_values: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Barycentric Lagrange interpolation matrix from ``nodes`` to ``s_values``.

    Rows sum to 1 and the matrix reproduces polynomials up to degree
    len(nodes) - 1 exactly. Evaluation points that coincide with a node
    get the corresponding unit row.
    """
    m = len(nodes)
    j = np.arange(m)
    # barycentric weights for first-kind Chebyshev points (up to scale)
    weights = (-1.0) ** j * np.sin(np.pi * (2 * j + 1) / (2 * m))
    diff = s_values[:, None] - nodes[None, :]
    exact = diff == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = weights[None, :] / diff
        matrix = terms / terms.sum(axis=1)[:, None]
    hit_rows = exact.any(axis=1)
    if hit_rows.any():
        matrix[hit_rows] = 0.0
        matrix[hit_rows, exact[hit_rows].argmax(axis=1)] = 1.0
    return matrix


@dataclass(frozen=True)
class ChebGrid:
    """Chebyshev data for one segment: node arclengths, their boundary
    images (positions and normals), and the points-from-nodes
    interpolation matrix."""

    node_s: np.ndarray
    positions: np.ndarray
    normals: np.ndarray
    matrix: np.ndarray  # (n_points, m_cheb)
