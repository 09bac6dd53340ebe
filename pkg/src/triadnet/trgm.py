"""Triadic random graphs: pattern distributions on Steiner triples.

A graph of admissible order n is sampled by assigning every Steiner
triple one of the 16 triad patterns (i.i.d. from a distribution, or by
randomly permuting an exact counts vector) and writing a uniformly
chosen isomorphic configuration of that pattern onto the triple's three
nodes.  Steiner triples are dyad-disjoint, so the assignments never
conflict and the arc count is the exact sum of per-pattern arc counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import comb, exp

import numpy as np

from . import steiner, triads
from .graphs import DirectedGraph

_PERMS = tuple(permutations(range(3)))

#: Patterns without mutual dyads; restricting mass to these yields graphs
#: with unidirectional links only.
UNIDIRECTIONAL_IDS = tuple(
    p.pattern_id for p in triads.PATTERNS if p.mutual_dyads == 0
)

#: Example parameter vectors for 49-node graphs (392 Steiner triples,
#: 98 arcs) in which the feed-forward loop / the cyclic triangle is
#: strongly overrepresented.
FFL_SEED_COUNTS_49 = np.array(
    [357, 2, 0, 1, 1, 1, 0, 30, 0, 0, 0, 0, 0, 0, 0, 0], dtype=np.int64
)
LOOP_SEED_COUNTS_49 = np.array(
    [359, 0, 1, 0, 0, 0, 0, 0, 32, 0, 0, 0, 0, 0, 0, 0], dtype=np.int64
)


class InfeasibleTargetError(ValueError):
    pass


def check_distribution(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (16,):
        raise ValueError("pattern distribution needs 16 entries")
    if (p < 0).any() or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("pattern distribution must be non-negative and sum to 1")
    return p


def check_counts(t, n: int) -> np.ndarray:
    t = np.asarray(t, dtype=np.int64)
    if t.shape != (16,):
        raise ValueError("pattern counts need 16 entries")
    expected = n * (n - 1) // 6
    if (t < 0).any() or t.sum() != expected:
        raise ValueError(f"pattern counts must be >= 0 and sum to {expected}")
    return t


def er_distribution(p: float) -> np.ndarray:
    """Pattern probabilities of a dyad-independent directed random graph.

    With every ordered arc present independently with probability p, a
    pattern's probability is its configuration-class size times
    p^arcs (1-p)^(6-arcs).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("arc probability must lie in [0, 1]")
    out = np.empty(16)
    for info in triads.PATTERNS:
        out[info.pattern_id - 1] = (
            info.orbit_size * p**info.arcs * (1.0 - p) ** (6 - info.arcs)
        )
    return out


def expected_density(dist) -> float:
    """Expected arc probability: sum_i p_i * arcs(i) / 6."""
    dist = check_distribution(dist)
    return float((dist * triads.ARCS_PER_PATTERN).sum() / 6.0)


def uniform_simplex_counts(n: int, rng_seed: int) -> np.ndarray:
    """Counts vector drawn uniformly from all 16-part compositions.

    Stars-and-bars: place the K = n(n-1)/6 triples and 15 delimiters in
    a uniformly shuffled row; the 16 gaps are the counts.
    """
    if not steiner.is_admissible(n):
        raise steiner.AdmissibilityError(
            f"order {n} is not admissible (need n mod 6 in {{1, 3}}); nearest "
            f"admissible order is {steiner.next_admissible(n)}"
        )
    k = n * (n - 1) // 6
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(rng_seed)))
    delimiters = np.sort(rng.choice(k + 15, size=15, replace=False))
    edges = np.concatenate(([-1], delimiters, [k + 15]))
    return np.diff(edges) - 1


@lru_cache(maxsize=32)
def _system(n: int) -> steiner.SteinerTripleSystem:
    return steiner.sts_construct(n)


def sample_trgm(n: int, spec, rng_seed: int) -> DirectedGraph:
    """Sample one triadic random graph of order n.

    ``spec`` is either a 16-entry probability distribution (patterns
    drawn i.i.d. per Steiner triple) or a 16-entry integer counts vector
    (the exact multiset of patterns, assigned by a uniform permutation).
    """
    system = _system(n)
    n_triples = len(system.triples)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(rng_seed)))
    spec_arr = np.asarray(spec)
    if np.issubdtype(spec_arr.dtype, np.integer):
        counts = check_counts(spec_arr, n)
        pattern_ids = np.repeat(np.arange(1, 17), counts)
        rng.shuffle(pattern_ids)
    else:
        dist = check_distribution(spec_arr)
        pattern_ids = rng.choice(16, size=n_triples, p=dist) + 1
    perm_draws = rng.integers(0, 6, size=n_triples)
    arcs = []
    for triple, pid, pdx in zip(system.triples, pattern_ids, perm_draws):
        code = triads.PATTERNS[pid - 1].canonical_code
        perm = _PERMS[pdx]
        for u, v in triads.code_arcs(code):
            arcs.append((triple[perm[u]] - 1, triple[perm[v]] - 1))
    return DirectedGraph(n, arcs)


def _slot_degree_fractions(direction: str) -> tuple:
    """Per-pattern probabilities that a uniformly placed node has one or
    two incident arcs of the given direction inside its triple."""
    f1 = np.zeros(16)
    f2 = np.zeros(16)
    for info in triads.PATTERNS:
        code = info.canonical_code
        degs = (
            triads._in_slot_degrees(code)
            if direction == "in"
            else triads._out_slot_degrees(code)
        )
        f1[info.pattern_id - 1] = sum(1 for d in degs if d == 1) / 3.0
        f2[info.pattern_id - 1] = sum(1 for d in degs if d == 2) / 3.0
    return f1, f2


def degree_distribution(
    dist,
    n: int,
    direction: str = "in",
    form: str = "exact",
) -> np.ndarray:
    """Analytic degree distribution over degrees 0..n-1.

    A node sits in (n-1)/2 Steiner triples; each contributes 0, 1, or 2
    incident arcs with pattern-derived probabilities, so the degree is
    s + 2d with (s, d) multinomial.  ``form='exact'`` evaluates the
    finite-n multinomial; ``form='limit'`` the large-n compound-Poisson
    form, which reduces to a pure Poissonian when d's rate vanishes.
    """
    if direction not in ("in", "out"):
        raise ValueError("direction must be 'in' or 'out'")
    if form not in ("exact", "limit"):
        raise ValueError("form must be 'exact' or 'limit'")
    dist = check_distribution(dist)
    f1, f2 = _slot_degree_fractions(direction)
    p_s = float(dist @ f1)
    p_d = float(dist @ f2)
    trials = (n - 1) // 2
    out = np.zeros(n)
    if form == "exact":
        p_0 = 1.0 - p_s - p_d
        for n_d in range(trials + 1):
            for n_s in range(trials - n_d + 1):
                kappa = n_s + 2 * n_d
                if kappa >= n:
                    continue
                weight = (
                    comb(trials, n_s)
                    * comb(trials - n_s, n_d)
                    * p_s**n_s
                    * p_d**n_d
                    * p_0 ** (trials - n_s - n_d)
                )
                out[kappa] += weight
        return out
    mean_s = trials * p_s
    mean_d = trials * p_d
    scale = exp(-mean_s - mean_d)
    from math import factorial

    for kappa in range(n):
        acc = 0.0
        for n_d in range(kappa // 2 + 1):
            n_s = kappa - 2 * n_d
            acc += mean_s**n_s / factorial(n_s) * mean_d**n_d / factorial(n_d)
        out[kappa] = scale * acc
    return out


def cross_pearson(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """corr(x_col, y_col) matrix, NaN where a column is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.shape[0]
    xc = x - x.mean(axis=0)
    yc = y - y.mean(axis=0)
    sx = x.std(axis=0)
    sy = y.std(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = (yc.T @ xc) / (np.outer(sy, sx) * n)
    corr[:, sx == 0] = np.nan
    corr[sy == 0, :] = np.nan
    return corr


def p_to_z_correlation(samples) -> np.ndarray:
    """13x16 Pearson matrix between input distributions and Z scores.

    ``samples`` holds (distribution, ZProfile) pairs from a parameter
    sweep; entry [j, i] correlates pattern i's input probability with
    connected pattern j's Z score.  NaN marks constant columns.
    """
    ps = []
    zs = []
    for dist, prof in samples:
        ps.append(check_distribution(dist))
        zs.append(np.where(prof.defined(), prof.z, 0.0))
    if len(ps) < 10:
        raise ValueError("need at least 10 samples")
    return cross_pearson(np.array(ps), np.array(zs))


@dataclass
class DesignResult:
    distribution: np.ndarray  # (16,) non-negative, sums to 1
    predicted_sp: np.ndarray  # (13,) unit norm, forward map of the result
    clipped_mass: float  # negative mass removed from the raw solution
    lstsq_residual: float


def design_distribution(target_sp, c_matrix, allowed_patterns=None) -> DesignResult:
    """Invert the linear profile map to find an input distribution.

    Solves the least-squares problem C p = target over the allowed
    pattern columns, clips negative components to zero and renormalizes.
    The returned prediction re-applies the forward map so infeasible
    targets are visible as a mismatch; a solution that clips to nothing
    raises InfeasibleTargetError.
    """
    target = np.asarray(target_sp, dtype=np.float64)
    c = np.asarray(c_matrix, dtype=np.float64)
    if target.shape != (13,) or c.shape != (13, 16):
        raise ValueError("need a 13-entry target and a 13x16 matrix")
    cols = (
        np.array([pid - 1 for pid in allowed_patterns], dtype=np.intp)
        if allowed_patterns is not None
        else np.arange(16)
    )
    a = np.nan_to_num(c[:, cols])
    x, *_ = np.linalg.lstsq(a, target, rcond=None)
    raw = np.zeros(16)
    raw[cols] = x
    residual = float(np.linalg.norm(a @ x - target))
    clipped = np.maximum(raw, 0.0)
    total = clipped.sum()
    if total <= 0.0:
        raise InfeasibleTargetError("no non-negative mass remains after clipping")
    dist = clipped / total
    pred = np.nan_to_num(c) @ dist
    norm = np.linalg.norm(pred)
    if norm == 0.0:
        raise InfeasibleTargetError("designed distribution predicts a zero profile")
    return DesignResult(dist, pred / norm, float(-raw[raw < 0].sum()), residual)
