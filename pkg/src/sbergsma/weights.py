"""Spatial proximity matrices: construction, validation, row standardization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    DuplicatePointError,
    IsolatedRegionError,
    NegativeWeightError,
    NonFiniteError,
    RegionIndexError,
    SelfLoopError,
    SizeError,
)

_ROWSUM_TOL = 1e-12


@dataclass(frozen=True)
class ProximityMatrix:
    """Nonnegative R x R weight matrix with zero diagonal.

    ``standardized`` records whether every row sums to one.  The matrix is
    immutable once built.
    """

    weights: np.ndarray
    region_labels: tuple[str, ...] = field(default=())
    standardized: bool = False

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionMismatchError(f"W must be square, got shape {w.shape}")
        if w.shape[0] < 2:
            raise SizeError(f"need at least 2 regions, got {w.shape[0]}")
        if not np.all(np.isfinite(w)):
            raise NonFiniteError("W contains non-finite entries")
        if np.any(w < 0):
            raise NegativeWeightError("W contains negative weights")
        if np.any(np.diagonal(w) != 0):
            raise SelfLoopError("diagonal of W must be zero")
        labels = self.region_labels or tuple(f"R{i+1}" for i in range(w.shape[0]))
        if len(labels) != w.shape[0]:
            raise DimensionMismatchError(
                f"{len(labels)} labels for {w.shape[0]} regions"
            )
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "region_labels", tuple(labels))
        if self.standardized:
            sums = w.sum(axis=1)
            if not np.allclose(sums, 1.0, rtol=0, atol=_ROWSUM_TOL):
                raise IsolatedRegionError("standardized W has rows not summing to 1")

    @property
    def n_regions(self) -> int:
        return self.weights.shape[0]

    @property
    def s0(self) -> float:
        """S0 = sum of all weights; equals R when row-standardized."""
        return float(self.weights.sum())


def adjacency_from_edges(edges, R: int, labels=None) -> ProximityMatrix:
    """Symmetric 0/1 adjacency matrix from unordered region pairs (1-based)."""
    w = np.zeros((R, R))
    for i, j in edges:
        if not (1 <= i <= R and 1 <= j <= R):
            raise RegionIndexError(f"edge ({i},{j}) outside [1, {R}]")
        if i == j:
            raise SelfLoopError(f"self-loop ({i},{i}) not allowed")
        w[i - 1, j - 1] = 1.0
        w[j - 1, i - 1] = 1.0
    return ProximityMatrix(w, tuple(labels) if labels else ())


def inverse_distance(points, labels=None) -> ProximityMatrix:
    """w_ij = 1 / euclidean distance between planar points i and j."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DimensionMismatchError(f"expected R x 2 coordinates, got {pts.shape}")
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt((diff**2).sum(axis=2))
    off = ~np.eye(len(pts), dtype=bool)
    if np.any(d[off] == 0):
        i, j = np.argwhere((d == 0) & off)[0]
        raise DuplicatePointError(f"regions {i+1} and {j+1} share coordinates")
    w = np.zeros_like(d)
    w[off] = 1.0 / d[off]
    return ProximityMatrix(w, tuple(labels) if labels else ())


def linear_chain(R: int, labels=None) -> ProximityMatrix:
    """Lag-1 adjacency of regions arranged on a line: w_ij = 1 iff |i-j| = 1."""
    if R < 2:
        raise SizeError(f"linear chain needs R >= 2, got {R}")
    w = np.zeros((R, R))
    idx = np.arange(R - 1)
    w[idx, idx + 1] = 1.0
    w[idx + 1, idx] = 1.0
    return ProximityMatrix(w, tuple(labels) if labels else ())


def row_standardize(W: ProximityMatrix) -> ProximityMatrix:
    """Divide every row by its sum so that S0 = R.

    Raises :class:`IsolatedRegionError` naming every all-zero row; silent
    zero rows would break the statistic's monotonicity in the dependence
    strength.
    """
    w = W.weights
    sums = w.sum(axis=1)
    isolated = np.flatnonzero(sums <= 0)
    if isolated.size:
        names = ", ".join(W.region_labels[i] for i in isolated)
        raise IsolatedRegionError(f"cannot standardize: zero-weight rows for {names}")
    return ProximityMatrix(w / sums[:, None], W.region_labels, standardized=True)
