"""SMA / SAR spatially dependent panel simulators and theta sweeps.

    SMA:  y = (I + theta W) eps
    SAR:  y = (I - theta W)^{-1} eps

with row-standardized W and i.i.d. noise rows over time, so the temporal
i.i.d. assumption behind the asymptotics is preserved; theta = 0 is the null
case of no spatial association.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .exceptions import InvalidParameterError, SingularSystemError
from .reference import ReferenceDistribution
from .rng import stream
from .statistic import SpatialPanel, sb_values_batch
from .timeseries import moments
from .weights import ProximityMatrix

_COND_LIMIT = 1e12
_COND_WARN = 1e3

STANDARD_NORMAL = ReferenceDistribution("normal")


def _spectral_radius(W: ProximityMatrix) -> float:
    if W.standardized:
        # the all-ones vector is an eigenvector with eigenvalue exactly 1
        return 1.0
    return float(np.max(np.abs(np.linalg.eigvals(W.weights))))


@dataclass(frozen=True)
class DependenceSpec:
    """Model family, dependence strength and ingredients of one simulator."""

    model: str  # "SMA" | "SAR"
    theta: float
    W: ProximityMatrix
    noise: ReferenceDistribution = STANDARD_NORMAL

    def __post_init__(self):
        if self.model not in ("SMA", "SAR"):
            raise InvalidParameterError(f"model must be SMA or SAR, got {self.model!r}")
        if not np.isfinite(self.theta):
            raise InvalidParameterError("theta must be finite")
        if self.model == "SAR":
            radius = _spectral_radius(self.W)
            if abs(self.theta) * radius >= 1.0:
                raise InvalidParameterError(
                    f"SAR needs |theta| < 1/spectral_radius(W) = {1.0/radius:.6g}, "
                    f"got theta = {self.theta}"
                )


class _SarFactor:
    """LU factorization of I - theta W, computed once and reused across rows."""

    def __init__(self, spec: DependenceSpec):
        A = np.eye(spec.W.n_regions) - spec.theta * spec.W.weights
        cond = np.linalg.cond(A)
        if cond > _COND_LIMIT:
            raise SingularSystemError(
                f"I - theta W is numerically singular (theta = {spec.theta}, "
                f"condition {cond:.3g})"
            )
        if cond > _COND_WARN:
            warnings.warn(
                f"I - theta W is badly conditioned (theta = {spec.theta}, "
                f"condition {cond:.3g})",
                RuntimeWarning,
                stacklevel=3,
            )
        self.lu = linalg.lu_factor(A)

    def solve_rows(self, eps: np.ndarray) -> np.ndarray:
        # eps is (T, R); solve A y = eps_row for each row
        return linalg.lu_solve(self.lu, eps.T).T


def _apply_dependence(spec: DependenceSpec, eps: np.ndarray, factor=None) -> np.ndarray:
    if spec.theta == 0.0:
        return eps  # bitwise-identical to the raw noise draw
    if spec.model == "SMA":
        A = np.eye(spec.W.n_regions) + spec.theta * spec.W.weights
        return eps @ A.T
    factor = factor or _SarFactor(spec)
    return factor.solve_rows(eps)


def simulate_panel(spec: DependenceSpec, T: int, seed: int = 0) -> SpatialPanel:
    """Draw a T x R panel with rows i.i.d. under the chosen dependence model."""
    if T < 3:
        raise InvalidParameterError(f"need T >= 3, got {T}")
    eps = spec.noise.sample((T, spec.W.n_regions), stream(seed))
    return SpatialPanel(_apply_dependence(spec, eps), spec.W.region_labels)


@dataclass(frozen=True)
class SweepResult:
    """Per-theta S~_B samples and moment summaries from a sweep."""

    model: str
    thetas: tuple[float, ...]
    samples: dict  # theta -> np.ndarray of S~_B values
    summaries: dict = field(default_factory=dict)  # theta -> (mean, sd, skew, kurt)


def theta_sweep(
    model: str,
    W: ProximityMatrix,
    thetas,
    T: int,
    reps: int = 2000,
    seed: int = 0,
    noise: ReferenceDistribution = STANDARD_NORMAL,
    chunk: int = 200,
) -> SweepResult:
    """reps independent panels per theta, each reduced to its S~_B value.

    Replicate r draws its noise from stream (seed, r) for every theta
    (common random numbers), so per-theta means are compared on shared noise
    and the theta = 0 samples coincide bitwise with a Monte Carlo null run
    at the same seed, up to the T scaling.
    """
    thetas = tuple(float(t) for t in thetas)
    R = W.n_regions
    samples = {}
    summaries = {}
    for theta in thetas:
        spec = DependenceSpec(model, theta, W, noise)
        factor = _SarFactor(spec) if (model == "SAR" and theta != 0.0) else None
        vals = np.empty(reps)
        for lo in range(0, reps, chunk):
            hi = min(lo + chunk, reps)
            eps = np.empty((hi - lo, T, R))
            for r in range(lo, hi):
                eps[r - lo] = noise.sample((T, R), stream(seed, r))
            if theta != 0.0:
                if model == "SMA":
                    A = np.eye(R) + theta * W.weights
                    panels = eps @ A.T
                else:
                    panels = linalg.lu_solve(factor.lu, eps.reshape(-1, R).T).T.reshape(
                        hi - lo, T, R
                    )
            else:
                panels = eps
            vals[lo:hi] = sb_values_batch(panels, W)
        samples[theta] = vals
        summaries[theta] = moments(vals)
    return SweepResult(model, thetas, samples, summaries)
