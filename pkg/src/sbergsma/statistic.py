"""The spatial Bergsma statistic over a time-by-region panel.

    S~_B = sum_{i<j} (w_ij + w_ji) * rho~(X_i, X_j) / S0,   S0 = sum_ij w_ij.

Each region's centered kernel matrix is built exactly once (R kernel builds,
not R^2), then all pairwise covariances come from one strict-upper-triangle
cross product.  Asymmetric W is handled through the (w_ij + w_ji) form; no
implicit symmetrization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bergsma import DEGENERACY_TOL, panel_kernel_stack, pairwise_kappa
from .exceptions import (
    DegenerateRegionError,
    DimensionMismatchError,
    LengthError,
    NonFiniteError,
    SizeError,
)
from .weights import ProximityMatrix


@dataclass(frozen=True)
class SpatialPanel:
    """T x R matrix of observations; rows are time points, columns regions."""

    data: np.ndarray
    region_labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        d = np.asarray(self.data, dtype=float)
        if d.ndim != 2:
            raise DimensionMismatchError(f"panel must be 2-d, got shape {d.shape}")
        if d.shape[0] < 3:
            raise LengthError(f"need T >= 3 time points, got {d.shape[0]}")
        if d.shape[1] < 2:
            raise SizeError(f"need R >= 2 regions, got {d.shape[1]}")
        if not np.all(np.isfinite(d)):
            raise NonFiniteError("panel contains NaN or infinite values")
        labels = self.region_labels or tuple(f"R{i+1}" for i in range(d.shape[1]))
        if len(labels) != d.shape[1]:
            raise DimensionMismatchError(
                f"{len(labels)} labels for {d.shape[1]} regions"
            )
        d.setflags(write=False)
        object.__setattr__(self, "data", d)
        object.__setattr__(self, "region_labels", tuple(labels))

    @property
    def n_time(self) -> int:
        return self.data.shape[0]

    @property
    def n_regions(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class SBResult:
    """Value of S~_B plus the full pairwise rho~ matrix and S0."""

    value: float
    pair_rho: np.ndarray
    s0: float
    scaled_value: float  # T * value
    standardized_w: bool

    def __post_init__(self):
        self.pair_rho.setflags(write=False)


def _pair_rho_from_kappa(kappa: np.ndarray, labels) -> np.ndarray:
    diag = np.diagonal(kappa)
    bad = np.flatnonzero(diag <= DEGENERACY_TOL)
    if bad.size:
        names = ", ".join(labels[i] for i in bad)
        raise DegenerateRegionError(f"degenerate (constant) region column(s): {names}")
    denom = np.sqrt(np.outer(diag, diag))
    rho = kappa / denom
    np.fill_diagonal(rho, 1.0)
    return rho


def sb_statistic(panel: SpatialPanel, W: ProximityMatrix) -> SBResult:
    """Compute S~_B for a panel against a proximity matrix.

    S0 is taken as the actual weight sum even for unstandardized W; the
    result records whether W was standardized so downstream reports can
    flag the general-denominator case.
    """
    if W.n_regions != panel.n_regions:
        raise DimensionMismatchError(
            f"W has {W.n_regions} regions, panel has {panel.n_regions}"
        )
    H = panel_kernel_stack(panel.data)
    kappa = pairwise_kappa(H)
    rho = _pair_rho_from_kappa(kappa, panel.region_labels)
    value = _weighted_average(rho, W)
    T = panel.n_time
    return SBResult(
        value=value,
        pair_rho=rho,
        s0=W.s0,
        scaled_value=T * value,
        standardized_w=W.standardized,
    )


def _weighted_average(rho: np.ndarray, W: ProximityMatrix) -> float:
    # diagonal of W is zero, so this equals sum_{i<j} (w_ij + w_ji) rho_ij
    return float((W.weights * rho).sum() / W.s0)


def sb_values_batch(panels: np.ndarray, W: ProximityMatrix) -> np.ndarray:
    """S~_B for a (B, T, R) stack of panels, fully vectorized.

    The simulation workhorse: avoids per-replicate Python overhead in the
    Monte Carlo null and the power/sweep studies.  Raises if any replicate
    has a degenerate column.
    """
    X = np.asarray(panels, dtype=float)
    B, T, R = X.shape
    if W.n_regions != R:
        raise DimensionMismatchError(f"W has {W.n_regions} regions, panels have {R}")
    Xt = X.transpose(0, 2, 1)  # (B, R, T)
    D = np.abs(Xt[:, :, :, None] - Xt[:, :, None, :])  # (B, R, T, T)
    A = D.mean(axis=3)
    grand = A.mean(axis=2)
    f = T / (T - 1.0)
    H = -0.5 * (D - f * (A[:, :, :, None] + A[:, :, None, :] - grand[:, :, None, None]))
    iu = np.triu_indices(T, k=1)
    U = H[:, :, iu[0], iu[1]]  # (B, R, npairs)
    kappa = np.einsum("brm,bsm->brs", U, U) / (T * (T - 1) // 2)
    diag = np.diagonal(kappa, axis1=1, axis2=2)  # (B, R)
    if np.any(diag <= DEGENERACY_TOL):
        raise DegenerateRegionError("a replicate contains a degenerate region column")
    denom = np.sqrt(diag[:, :, None] * diag[:, None, :])
    rho = kappa / denom
    ii = np.arange(R)
    rho[:, ii, ii] = 1.0
    return np.einsum("brs,rs->b", rho, W.weights) / W.s0
