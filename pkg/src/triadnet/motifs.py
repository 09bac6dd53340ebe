"""Whole-graph triad Z-score profiles and their correlation analyses."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from . import randomize, triads
from .graphs import DirectedGraph

# z-score entry states
OK = 0
DEGENERATE_ZERO = 1  # sigma = 0 and original count equals the ensemble mean
DEGENERATE_INF = 2  # sigma = 0 but the original count deviates

N_CONNECTED = len(triads.CONNECTED_IDS)


class UndefinedProfileError(ValueError):
    pass


@dataclass
class ZProfile:
    """Connected-pattern Z scores (ids 4..16) against the switching null."""

    z: np.ndarray  # (13,)
    counts: np.ndarray  # (13,) original connected census
    mean: np.ndarray  # (13,) ensemble mean
    sigma: np.ndarray  # (13,) ensemble standard deviation
    instances: int
    flags: np.ndarray  # (13,) OK / DEGENERATE_*

    def defined(self) -> np.ndarray:
        return self.flags == OK


@dataclass
class SignificanceProfile:
    sp: np.ndarray  # (13,), unit Euclidean norm


def zscores_from_counts(
    original: np.ndarray,
    ensemble_counts: np.ndarray,
    variance_mode: str = "population",
) -> ZProfile:
    """Z profile from an original count vector and per-instance ensembles.

    ``ensemble_counts`` has one row per randomized instance.  The mean
    and variance are accumulated in one sweep (sum and sum of squares);
    ``variance_mode`` picks the 1/I (population) or 1/(I-1) (sample)
    normalization.  Entries with zero ensemble variance are flagged
    rather than divided: z = 0 when the original count matches the mean,
    +/-inf otherwise.
    """
    if variance_mode not in ("population", "sample"):
        raise ValueError("variance_mode must be 'population' or 'sample'")
    ens = np.asarray(ensemble_counts, dtype=np.float64)
    instances = ens.shape[0]
    if instances < 2:
        raise ValueError("need at least 2 ensemble instances")
    original = np.asarray(original, dtype=np.float64)
    s1 = ens.sum(axis=0)
    s2 = (ens * ens).sum(axis=0)
    mean = s1 / instances
    var = np.maximum(s2 / instances - mean * mean, 0.0)
    if variance_mode == "sample":
        var = var * instances / (instances - 1)
    sigma = np.sqrt(var)
    z = np.zeros_like(mean)
    flags = np.full(mean.shape, OK, dtype=np.uint8)
    good = sigma > 0
    z[good] = (original[good] - mean[good]) / sigma[good]
    stuck = ~good
    matches = stuck & (original == mean)
    flags[matches] = DEGENERATE_ZERO
    off = stuck & ~matches
    flags[off] = DEGENERATE_INF
    z[off] = np.sign(original[off] - mean[off]) * np.inf
    return ZProfile(z, original, mean, sigma, instances, flags)


def z_profile(
    g: DirectedGraph,
    instances: int = 1000,
    steps_per_edge: float = 100.0,
    variance_mode: str = "population",
    rng_seed: int = 0,
) -> ZProfile:
    """Connected-triad Z profile of ``g`` against its randomized ensemble."""
    orig = triads.census(g, connected_only=True)[3:]
    ens = np.empty((instances, N_CONNECTED), dtype=np.int64)
    for i, rg in enumerate(randomize.ensemble(g, instances, steps_per_edge, rng_seed)):
        ens[i] = triads.census(rg, connected_only=True)[3:]
    return zscores_from_counts(orig, ens, variance_mode)


def significance_profile(profile: ZProfile) -> SignificanceProfile:
    """Z vector scaled to unit norm; degenerate entries enter as zero."""
    z = np.where(profile.defined(), profile.z, 0.0)
    norm = np.sqrt((z * z).sum())
    if norm == 0.0:
        raise UndefinedProfileError("all Z scores are zero or degenerate")
    return SignificanceProfile(z / norm)


def _pearson_with_flags(cols: np.ndarray, alpha: float = 0.05):
    """Pearson matrix over columns plus significance/defined masks."""
    n, k = cols.shape
    std = cols.std(axis=0)
    defined = std > 0
    centered = cols - cols.mean(axis=0)
    denom = np.outer(std, std) * n
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = (centered.T @ centered) / denom
    corr[~defined, :] = np.nan
    corr[:, ~defined] = np.nan
    if n > 2:
        r = np.clip(corr, -1.0, 1.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            t = r * np.sqrt((n - 2) / np.maximum(1.0 - r * r, 1e-300))
        crit = sps.t.ppf(1.0 - alpha / 2.0, n - 2)
        significant = np.abs(t) > crit
    else:
        significant = np.zeros_like(corr, dtype=bool)
    significant &= ~np.isnan(corr)
    return corr, significant, defined


@dataclass
class CorrelationMatrix:
    corr: np.ndarray
    significant: np.ndarray  # two-sided t-test at the given level
    defined: np.ndarray  # per-column: column was not constant
    alpha: float


def z_cross_correlation(profiles, alpha: float = 0.05) -> CorrelationMatrix:
    """Pairwise Pearson correlations of Z scores across many networks.

    Rows are networks, columns the 13 connected patterns; degenerate z
    entries contribute their 0/inf-free value of 0.
    """
    rows = []
    for p in profiles:
        rows.append(np.where(p.defined(), p.z, 0.0))
    data = np.array(rows, dtype=np.float64)
    if data.shape[0] < 3:
        raise ValueError("need at least 3 profiles")
    corr, significant, defined = _pearson_with_flags(data, alpha)
    return CorrelationMatrix(corr, significant, defined, alpha)
