"""End-to-end testing workflow: statistic, p-value, bootstrap CI, pair screen."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bergsma import DEGENERACY_TOL, panel_kernel_stack, pairwise_kappa
from .exceptions import EmptyNullError, TooManyDegenerateResamplesError
from .nulldist import (
    NullDistribution,
    asymptotic_null_sample,
    monte_carlo_null,
    nystrom_eigenvalues,
    p_value,
)
from .reference import ReferenceDistribution
from .rng import stream
from .statistic import SBResult, SpatialPanel, sb_statistic, sb_values_batch
from .weights import ProximityMatrix

STANDARD_NORMAL = ReferenceDistribution("normal")


@dataclass(frozen=True)
class TestReport:
    """Everything Table-1-style reporting needs for one panel/W test."""

    sb: SBResult
    p_value: float
    ci: tuple  # (lower, upper, level, "bootstrap_percentile") or None
    null_meta: dict
    pairwise_flags: np.ndarray | None = None
    pairwise_cutoff: float | None = None
    notes: tuple[str, ...] = field(default=())

    def table_row(self, model_name: str = "panel") -> str:
        lo, hi = (self.ci[0], self.ci[1]) if self.ci else (float("nan"),) * 2
        return (
            f"{model_name}\t{self.sb.value:.4f}\t({lo:.4f}, {hi:.4f})\t"
            f"{self.p_value:.4f}"
        )


def test_spatial_independence(
    panel: SpatialPanel,
    W: ProximityMatrix,
    null_method: str = "monte_carlo",
    null_dist: ReferenceDistribution = STANDARD_NORMAL,
    reps: int = 10_000,
    seed: int = 0,
    K: int = 100,
    m: int = 2000,
    alternative: str = "greater",
    null: NullDistribution | None = None,
    ci_resamples: int | None = None,
    ci_level: float = 0.95,
) -> TestReport:
    """Test the null of spatial pairwise independence via T * S~_B.

    ``null_method`` selects Monte Carlo simulation or the eigenvalue-based
    asymptotic law; a precomputed ``null`` can be passed to amortize it over
    many tests.  The reference distribution defaults to standard normal: the
    null law is insensitive to F, and residual inputs are continuous.
    """
    sb = sb_statistic(panel, W)
    if null is None:
        if null_method == "monte_carlo":
            null = monte_carlo_null(
                null_dist, panel.n_regions, panel.n_time, W, reps=reps, seed=seed
            )
        elif null_method == "asymptotic_eigen":
            spectrum = nystrom_eigenvalues(null_dist, K=K, m=m)
            null = asymptotic_null_sample(
                [spectrum] * panel.n_regions, W, n_draws=reps, seed=seed
            )
        else:
            raise EmptyNullError(f"unknown null method {null_method!r}")
    p_up = p_value(sb.scaled_value, null)
    if alternative == "greater":
        p = p_up
    elif alternative == "two-sided":
        s = null.samples
        p_lo = (1 + int(np.count_nonzero(s <= sb.scaled_value))) / (s.size + 1)
        p = min(1.0, 2.0 * min(p_up, p_lo))
    else:
        raise EmptyNullError(f"unknown alternative {alternative!r}")
    ci = None
    notes = []
    if ci_resamples:
        lo, hi = bootstrap_ci(panel, W, B=ci_resamples, level=ci_level, seed=seed)
        ci = (lo, hi, ci_level, "bootstrap_percentile")
        if not (lo <= sb.value <= hi):
            notes.append("percentile CI excludes the point estimate")
    if not W.standardized:
        notes.append("W not row-standardized; S0 taken as the raw weight sum")
    return TestReport(
        sb=sb,
        p_value=p,
        ci=ci,
        null_meta={"method": null.method, **null.meta, "alternative": alternative},
        notes=tuple(notes),
    )


def bootstrap_ci(
    panel: SpatialPanel,
    W: ProximityMatrix,
    B: int = 1000,
    level: float = 0.95,
    seed: int = 0,
) -> tuple[float, float]:
    """Percentile bootstrap CI for S~_B, resampling time rows jointly.

    Rows are resampled with replacement across all regions at once, which
    preserves the cross-sectional dependence being measured.  A resample
    that leaves some region constant is redrawn, up to 10*B total attempts.
    No clamping at 0 is applied; raw percentiles are reported.
    """
    if B < 200:
        raise EmptyNullError(f"need B >= 200 bootstrap resamples, got {B}")
    if not (0.0 < level < 1.0):
        raise EmptyNullError(f"level must be in (0,1), got {level}")
    T = panel.n_time
    data = panel.data
    values = np.empty(B)
    attempts = 0
    for b in range(B):
        rng = stream(seed, b)
        while True:
            attempts += 1
            if attempts > 10 * B:
                raise TooManyDegenerateResamplesError(
                    f"more than {10*B} resample attempts were degenerate"
                )
            idx = rng.integers(0, T, size=T)
            sub = data[idx]
            # constant column <=> degenerate kernel; cheap max-min check
            if np.all(sub.max(axis=0) - sub.min(axis=0) > 0):
                break
        values[b] = sb_values_batch(sub[None, :, :], W)[0]
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(values, [alpha, 1.0 - alpha])
    return float(lo), float(hi)


def independence_rho_quantile(
    T: int,
    q: float = 0.95,
    n_sim: int = 10_000,
    seed: int = 0,
    chunk: int = 2000,
) -> float:
    """Monte Carlo quantile of rho~ for independent standard normal pairs.

    This is the empirical cutoff used to flag individually significant
    region pairs (about 0.17 at T = 19).
    """
    # for R = 2 with the symmetric 0/1 pair matrix, S~_B reduces to rho~ itself
    from .weights import linear_chain

    W2 = linear_chain(2)
    vals = np.empty(n_sim)
    for lo in range(0, n_sim, chunk):
        hi = min(lo + chunk, n_sim)
        rng = stream(seed, lo)
        X = rng.standard_normal((hi - lo, T, 2))
        vals[lo:hi] = sb_values_batch(X, W2)
    return float(np.quantile(vals, q))


def pairwise_screen(
    panel: SpatialPanel,
    cutoff: float | None = None,
    seed: int = 0,
    n_sim: int = 10_000,
):
    """Flag region pairs whose rho~ exceeds the cutoff.

    With ``cutoff=None`` the threshold is derived by simulation as the 95th
    percentile of rho~ under independent normal pairs at the panel's T.
    Returns ``(flags, rho, cutoff)``; the diagonal is never flagged.
    """
    H = panel_kernel_stack(panel.data)
    kappa = pairwise_kappa(H)
    diag = np.diagonal(kappa)
    if np.any(diag <= DEGENERACY_TOL):
        from .exceptions import DegenerateRegionError

        bad = np.flatnonzero(diag <= DEGENERACY_TOL)
        names = ", ".join(panel.region_labels[i] for i in bad)
        raise DegenerateRegionError(f"degenerate region column(s): {names}")
    rho = kappa / np.sqrt(np.outer(diag, diag))
    np.fill_diagonal(rho, 1.0)
    if cutoff is None:
        cutoff = independence_rho_quantile(panel.n_time, seed=seed, n_sim=n_sim)
    flags = rho > cutoff
    np.fill_diagonal(flags, False)
    return flags, rho, float(cutoff)
