"""Empirical Bergsma kernel and U-statistic covariance/correlation estimators.

For a series z_1..z_T the empirically centered kernel is

    h~[m, n] = -1/2 [ |z_m - z_n|
                      - T/(T-1) * ( A_m + A_n - B ) ],

where A_m is the m-th row mean of the absolute-difference matrix and B its
grand mean.  The covariance estimator is the strict-upper-triangle average

    kappa~(x, y) = C(T,2)^{-1} * sum_{m<n} Hx[m,n] * Hy[m,n],

and rho~ = kappa~(x,y) / sqrt(kappa~(x,x) kappa~(y,y)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateSeriesError,
    DimensionMismatchError,
    LengthError,
    NonFiniteError,
)

#: self-covariance at or below this is treated as a degenerate (constant) series
DEGENERACY_TOL = 1e-14

#: above this length, kappa~ accumulates with math.fsum for thread-count-stable results
_FSUM_THRESHOLD = 10_000


@dataclass(frozen=True)
class CenteredKernelMatrix:
    """Immutable T x T matrix of empirically centered kernel values."""

    entries: np.ndarray
    source_length: int

    def __post_init__(self):
        self.entries.setflags(write=False)


def _validated_series(z, min_length: int) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-d series, got shape {z.shape}")
    if z.size < min_length:
        raise LengthError(f"series length {z.size} < required {min_length}")
    if not np.all(np.isfinite(z)):
        raise NonFiniteError("series contains NaN or infinite values")
    return z


def _kernel_entries(z: np.ndarray) -> np.ndarray:
    """Centered kernel matrix for a validated series (vectorized, O(T^2))."""
    T = z.size
    D = np.abs(z[:, None] - z[None, :])
    A = D.mean(axis=1)
    B = A.mean()
    f = T / (T - 1.0)
    return -0.5 * (D - f * (A[:, None] + A[None, :] - B))


def empirical_kernel_matrix(z) -> CenteredKernelMatrix:
    """Build the empirically centered kernel matrix of a series.

    Requires T >= 2 and finite values.  For T = 2 the matrix is identically
    zero (the centering cancels the single absolute difference exactly).
    """
    z = _validated_series(z, min_length=2)
    return CenteredKernelMatrix(_kernel_entries(z), z.size)


def _upper(entries: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(entries.shape[0], k=1)
    return entries[iu]


def kappa_tilde(Hx: CenteredKernelMatrix, Hy: CenteredKernelMatrix) -> float:
    """U-statistic covariance estimate from two kernel matrices.

    Averages elementwise products over the strict upper triangle only; the
    diagonal never enters.
    """
    ex, ey = Hx.entries, Hy.entries
    if ex.shape != ey.shape:
        raise DimensionMismatchError(f"kernel shapes differ: {ex.shape} vs {ey.shape}")
    T = ex.shape[0]
    ux, uy = _upper(ex), _upper(ey)
    npairs = T * (T - 1) // 2
    if T > _FSUM_THRESHOLD:
        total = math.fsum(ux * uy)
    else:
        total = float(ux @ uy)
    return total / npairs


def rho_tilde(x, y) -> float:
    """Bergsma correlation estimate rho~ between two equal-length series.

    Invariant under separate affine maps of each argument (including sign
    flips); raises on constant series, whose self-covariance vanishes.
    """
    x = _validated_series(x, min_length=3)
    y = _validated_series(y, min_length=3)
    if x.size != y.size:
        raise DimensionMismatchError(f"series lengths differ: {x.size} vs {y.size}")
    Hx = empirical_kernel_matrix(x)
    Hy = empirical_kernel_matrix(y)
    kxx = kappa_tilde(Hx, Hx)
    kyy = kappa_tilde(Hy, Hy)
    for name, k in (("x", kxx), ("y", kyy)):
        if k <= DEGENERACY_TOL:
            raise DegenerateSeriesError(f"series {name} is degenerate (kappa~ = {k:g})")
    return kappa_tilde(Hx, Hy) / math.sqrt(kxx * kyy)


# -- batched panel kernels ---------------------------------------------------

def panel_kernel_stack(data: np.ndarray) -> np.ndarray:
    """Centered kernel matrices for every column of a T x R panel.

    Returns an (R, T, T) stack; each region's matrix is built exactly once.
    """
    X = np.asarray(data, dtype=float).T  # (R, T)
    T = X.shape[1]
    D = np.abs(X[:, :, None] - X[:, None, :])  # (R, T, T)
    A = D.mean(axis=2)  # (R, T)
    B = A.mean(axis=1)  # (R,)
    f = T / (T - 1.0)
    return -0.5 * (D - f * (A[:, :, None] + A[:, None, :] - B[:, None, None]))


def pairwise_kappa(H: np.ndarray) -> np.ndarray:
    """All-pairs kappa~ matrix (R x R) from an (R, T, T) kernel stack."""
    T = H.shape[1]
    iu = np.triu_indices(T, k=1)
    U = H[:, iu[0], iu[1]]  # (R, npairs)
    return (U @ U.T) / (T * (T - 1) // 2)
