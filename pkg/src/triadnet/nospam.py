"""Node-specific triad pattern mining and derived node analyses.

For every node the abundance of the 30 directed focal-node orbits (13
signed patterns on signed graphs) is compared against the
degree-preserving switching ensemble, giving per-node Z-score profiles.
Ensemble means and variances accumulate in one sweep as sums and sums
of squares, so no per-instance storage is kept.
"""

from __future__ import annotations

import multiprocessing as mp
from dataclasses import dataclass

import numpy as np

from . import randomize, triads
from .graphs import DirectedGraph, SignedGraph
from .motifs import DEGENERATE_INF, DEGENERATE_ZERO, OK, ZProfile


class UndefinedMeasureError(ValueError):
    pass


@dataclass
class NodeZProfiles:
    """Per-node Z scores over orbits (directed: 30, signed: 13)."""

    z: np.ndarray  # (n, k); +/-inf on DEGENERATE_INF entries
    counts: np.ndarray  # (n, k) original counts
    mean: np.ndarray  # (n, k) ensemble mean
    sigma: np.ndarray  # (n, k) ensemble std (population)
    flags: np.ndarray  # (n, k)
    instances: int
    signed: bool = False

    @property
    def n_nodes(self) -> int:
        return self.z.shape[0]

    def defined(self) -> np.ndarray:
        return self.flags == OK


@dataclass
class MappedProfiles:
    """Orbit-averaged node scores on the 13 connected patterns."""

    m: np.ndarray  # (n, 13)
    flags: np.ndarray  # (n, 13); degenerate when every orbit entry is

    def defined(self) -> np.ndarray:
        return self.flags == OK


def _zscores_from_sums(orig, s1, s2, instances):
    mean = s1 / instances
    var = np.maximum(s2 / instances - mean * mean, 0.0)
    sigma = np.sqrt(var)
    z = np.zeros_like(mean)
    flags = np.full(mean.shape, OK, dtype=np.uint8)
    good = sigma > 0
    z[good] = (orig[good] - mean[good]) / sigma[good]
    stuck = ~good
    matches = stuck & (orig == mean)
    flags[matches] = DEGENERATE_ZERO
    off = stuck & ~matches
    flags[off] = DEGENERATE_INF
    z[off] = np.sign(orig[off] - mean[off]) * np.inf
    return z, mean, sigma, flags


def _count_chunk(args):
    n, arcs, signed_edges, steps, base_seed, indices = args
    if signed_edges is not None:
        g = SignedGraph(n, signed_edges)
        counter, chain_cls = (
            triads.signed_node_specific_counts,
            randomize.SignedSwitchChain,
        )
    else:
        g = DirectedGraph(n, arcs)
        counter, chain_cls = triads.node_specific_counts, randomize.DirectedSwitchChain
    s1 = None
    s2 = None
    for i in indices:
        counts = counter(
            chain_cls(g, randomize.instance_seed(base_seed, i)).run(steps).graph()
        )
        if s1 is None:
            s1 = counts.astype(np.float64)
            s2 = (counts * counts).astype(np.float64)
        else:
            s1 += counts
            s2 += counts * counts
    return s1, s2


def _ensemble_sums(g, instances, steps_per_edge, rng_seed, workers):
    signed = isinstance(g, SignedGraph)
    size = g.edge_count if signed else g.arc_count
    steps = int(np.ceil(steps_per_edge * size))
    if signed:
        payload = (g.n, None, [(u, v, s) for (u, v), s in sorted(g.edges.items())])
    else:
        payload = (g.n, sorted(g.arcs), None)
    all_indices = list(range(instances))
    if workers <= 1:
        s1, s2 = _count_chunk((*payload, steps, rng_seed, all_indices))
        return s1, s2
    chunks = [all_indices[w::workers] for w in range(workers)]
    jobs = [(*payload, steps, rng_seed, c) for c in chunks if c]
    with mp.get_context("fork").Pool(len(jobs)) as pool:
        parts = pool.map(_count_chunk, jobs)
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    return s1, s2


def nospam_directed(
    g: DirectedGraph,
    instances: int = 1000,
    steps_per_edge: float = 100.0,
    rng_seed: int = 0,
    workers: int = 1,
) -> NodeZProfiles:
    """Node-specific Z profiles over the 30 directed orbits."""
    if instances < 2:
        raise ValueError("need at least 2 ensemble instances")
    orig = triads.node_specific_counts(g).astype(np.float64)
    s1, s2 = _ensemble_sums(g, instances, steps_per_edge, rng_seed, workers)
    z, mean, sigma, flags = _zscores_from_sums(orig, s1, s2, instances)
    return NodeZProfiles(z, orig, mean, sigma, flags, instances, signed=False)


def nospam_signed(
    g: SignedGraph,
    instances: int = 1000,
    steps_per_edge: float = 100.0,
    rng_seed: int = 0,
    workers: int = 1,
) -> NodeZProfiles:
    """Node-specific Z profiles over the 13 signed patterns."""
    if instances < 2:
        raise ValueError("need at least 2 ensemble instances")
    orig = triads.signed_node_specific_counts(g).astype(np.float64)
    s1, s2 = _ensemble_sums(g, instances, steps_per_edge, rng_seed, workers)
    z, mean, sigma, flags = _zscores_from_sums(orig, s1, s2, instances)
    return NodeZProfiles(z, orig, mean, sigma, flags, instances, signed=True)


def map_profiles(profiles: NodeZProfiles) -> MappedProfiles:
    """Average each node's orbit Z scores per connected pattern.

    Degenerate orbit entries drop out of the mean with the divisor
    reduced; a pattern whose orbits are all degenerate is flagged.
    """
    if profiles.signed:
        raise ValueError("mapped profiles are defined for directed profiles only")
    n = profiles.n_nodes
    m = np.zeros((n, 13))
    flags = np.full((n, 13), OK, dtype=np.uint8)
    ok = profiles.defined()
    z = np.where(ok, profiles.z, 0.0)
    for col, pid in enumerate(triads.CONNECTED_IDS):
        idx = [o - 1 for o in triads.ORBITS_OF_PATTERN[pid]]
        valid = ok[:, idx]
        k = valid.sum(axis=1)
        total = z[:, idx].sum(axis=1)
        usable = k > 0
        m[usable, col] = total[usable] / k[usable]
        flags[~usable, col] = DEGENERATE_ZERO
    return MappedProfiles(m, flags)


def _masked_pearson(x, y, mask) -> float:
    xs = x[mask]
    ys = y[mask]
    if xs.size < 2:
        return np.nan
    sx = xs.std()
    sy = ys.std()
    if sx == 0 or sy == 0:
        return np.nan
    return float(((xs - xs.mean()) * (ys - ys.mean())).mean() / (sx * sy))


@dataclass
class HomogeneityResult:
    mean: float
    std: float
    excluded_nodes: int


def homogeneity(mapped: MappedProfiles, whole: ZProfile) -> HomogeneityResult:
    """Mean and spread of per-node correlation with the whole-graph profile."""
    whole_ok = whole.defined()
    whole_z = np.where(whole_ok, whole.z, 0.0)
    corrs = []
    excluded = 0
    for a in range(mapped.m.shape[0]):
        mask = mapped.defined()[a] & whole_ok
        c = _masked_pearson(mapped.m[a], whole_z, mask)
        if np.isnan(c):
            excluded += 1
        else:
            corrs.append(c)
    if not corrs:
        raise UndefinedMeasureError("no node has a defined profile correlation")
    arr = np.array(corrs)
    return HomogeneityResult(float(arr.mean()), float(arr.std()), excluded)


def homophily(profiles: NodeZProfiles, g) -> float:
    """Connected-pairs mean profile correlation minus the all-pairs mean.

    A pair counts as connected if any arc or edge joins it.  Pairs whose
    correlation is undefined are excluded from both means.
    """
    n = profiles.n_nodes
    ok = profiles.defined()
    z = np.where(ok, profiles.z, 0.0)
    if isinstance(g, SignedGraph):
        connected = {pair for pair in g.edges}
    else:
        connected = {(u, v) if u < v else (v, u) for u, v in g.arcs}
    if not connected:
        raise UndefinedMeasureError("homophily needs at least one link")
    if ok.all():
        std = z.std(axis=1)
        good = std > 0
        zc = z - z.mean(axis=1, keepdims=True)
        denom = np.outer(std, std) * z.shape[1]
        with np.errstate(invalid="ignore", divide="ignore"):
            cm = (zc @ zc.T) / denom
        cm[~good, :] = np.nan
        cm[:, ~good] = np.nan
        iu = np.triu_indices(n, k=1)
        vals = cm[iu]
        conn_mask = np.zeros((n, n), dtype=bool)
        for u, v in connected:
            conn_mask[u, v] = True
        conn_vals = cm[conn_mask]
        all_mean = np.nanmean(vals)
        conn_mean = np.nanmean(conn_vals)
    else:
        conn_sum = conn_k = all_sum = all_k = 0.0
        for a in range(n):
            for b in range(a + 1, n):
                c = _masked_pearson(z[a], z[b], ok[a] & ok[b])
                if np.isnan(c):
                    continue
                all_sum += c
                all_k += 1
                if (a, b) in connected:
                    conn_sum += c
                    conn_k += 1
        if all_k == 0 or conn_k == 0:
            raise UndefinedMeasureError("all pair correlations are undefined")
        all_mean = all_sum / all_k
        conn_mean = conn_sum / conn_k
    if np.isnan(conn_mean) or np.isnan(all_mean):
        raise UndefinedMeasureError("all pair correlations are undefined")
    return float(conn_mean - all_mean)


@dataclass
class Dendrogram:
    """Agglomerative merge sequence under the complete-link rule.

    Item i starts as cluster i; the merge at step t creates cluster
    n_items + t.  Distances are the squared-Euclidean complete-link
    cluster distances and are non-decreasing along the sequence.
    """

    n_items: int
    merges: list  # (cluster_a, cluster_b, distance)

    def labels_at(self, k: int) -> np.ndarray:
        """Cluster labels (0..k-1, by smallest member) after n-k merges."""
        if not 1 <= k <= self.n_items:
            raise ValueError("k must lie in 1..n_items")
        parent = list(range(self.n_items + len(self.merges)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, (a, b, _) in enumerate(self.merges[: self.n_items - k]):
            new = self.n_items + t
            parent[find(a)] = new
            parent[find(b)] = new
        roots = {}
        labels = np.empty(self.n_items, dtype=np.int64)
        for i in range(self.n_items):
            r = find(i)
            if r not in roots:
                roots[r] = len(roots)
            labels[i] = roots[r]
        return labels

    def labels_at_distance(self, threshold: float) -> np.ndarray:
        """Merge while the smallest cluster distance stays <= threshold."""
        k = self.n_items
        for _, _, dist in self.merges:
            if dist > threshold:
                break
            k -= 1
        return self.labels_at(max(k, 1))


def complete_link_cluster(points, k: int | None = None, threshold: float | None = None):
    """Agglomerate profile vectors; returns (Dendrogram, labels).

    The node metric is the squared Euclidean distance between profiles;
    the cluster distance is the maximum over cross-cluster node pairs.
    Ties break on the smallest cluster indices, so runs are
    deterministic.
    """
    pts = np.asarray(points, dtype=np.float64)
    m = pts.shape[0]
    if m < 2:
        raise ValueError("need at least 2 profiles to cluster")
    sq = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    big = np.inf
    np.fill_diagonal(sq, big)
    dist = sq.copy()
    cluster_id = list(range(m))
    active = list(range(m))
    merges = []
    for step in range(m - 1):
        best = (big, -1, -1)
        for ai, i in enumerate(active):
            row = dist[i]
            for j in active[ai + 1 :]:
                d = row[j]
                if d < best[0]:
                    best = (d, i, j)
        d, i, j = best
        merges.append((cluster_id[i], cluster_id[j], float(d)))
        new_row = np.maximum(dist[i], dist[j])
        dist[i, :] = new_row
        dist[:, i] = new_row
        dist[i, i] = big
        cluster_id[i] = m + step
        active.remove(j)
    dendro = Dendrogram(m, merges)
    if threshold is not None:
        return dendro, dendro.labels_at_distance(threshold)
    return dendro, dendro.labels_at(k if k is not None else 1)


@dataclass
class HistogramResult:
    bin_edges: np.ndarray
    counts: np.ndarray
    fraction_below_one: float  # share of nodes with |M| < 1
    max_value: float
    top_nodes: list  # (node, value), strongest first


def ffl_heterogeneity_histogram(
    mapped: MappedProfiles, bins: int = 40, top_k: int = 10
) -> HistogramResult:
    """Distribution of per-node mapped scores for the feed-forward loop."""
    col = triads.CONNECTED_IDS.index(triads.FFL_ID)
    ok = mapped.defined()[:, col]
    vals = mapped.m[ok, col]
    nodes = np.nonzero(ok)[0]
    if vals.size == 0:
        return HistogramResult(np.array([0.0, 1.0]), np.array([0]), 0.0, 0.0, [])
    counts, edges = np.histogram(vals, bins=bins)
    order = np.argsort(-vals)[:top_k]
    top = [(int(nodes[i]), float(vals[i])) for i in order]
    return HistogramResult(
        edges,
        counts,
        float((np.abs(vals) < 1.0).mean()),
        float(vals.max()),
        top,
    )
