"""Classical graph measures and the Erdos-Renyi reference generator."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graphs import DirectedGraph, SignedGraph


class UndefinedInputError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass
class PathStats:
    avg_path_length: float | None
    diameter: int | None
    unreachable_pairs: int


@dataclass
class GraphStats:
    density: float
    weak_components: list
    strong_components: list
    avg_path_length: float | None
    diameter: int | None
    unreachable_pairs: int = 0


def degrees(g: DirectedGraph) -> list:
    """Per-node (in, out) degree pairs."""
    return [(g.in_degree(i), g.out_degree(i)) for i in range(g.n)]


def density(g) -> float:
    """Realized fraction of possible links (directed or undirected)."""
    n = g.n
    if n < 2:
        raise UndefinedInputError("density needs at least 2 nodes")
    if isinstance(g, SignedGraph):
        return 2.0 * g.edge_count / (n * (n - 1))
    return g.arc_count / (n * (n - 1))


def connected_components(g: DirectedGraph, mode: str = "weak") -> list:
    """Partition of the node set into weakly or strongly connected components."""
    if mode == "weak":
        return _weak_components(g)
    if mode == "strong":
        return _strong_components(g)
    raise ValueError(f"mode must be 'weak' or 'strong', got {mode!r}")


def _weak_components(g: DirectedGraph) -> list:
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        comp = set()
        queue = deque([start])
        seen[start] = True
        while queue:
            u = queue.popleft()
            comp.add(u)
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        comps.append(comp)
    return comps


def _strong_components(g: DirectedGraph) -> list:
    # Iterative Tarjan; recursion would overflow on long paths.
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            u, pi = work[-1]
            if pi == 0:
                index[u] = low[u] = counter
                counter += 1
                stack.append(u)
                on_stack[u] = True
            advanced = False
            out = g.out_neighbors(u)
            while pi < len(out):
                v = out[pi]
                pi += 1
                if index[v] == -1:
                    work[-1] = (u, pi)
                    work.append((v, 0))
                    advanced = True
                    break
                if on_stack[v]:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if low[u] == index[u]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.add(w)
                    if w == u:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
    return comps


def clustering(g: DirectedGraph, mode: str = "local"):
    """Watts-Strogatz clustering on the symmetrized graph.

    Nodes with symmetrized degree < 2 get a local coefficient of 0.
    """
    a = g.adjacency()
    sym = ((a + a.T) > 0).astype(np.float64)
    k = sym.sum(axis=1)
    closed = np.einsum("ij,jk,ki->i", sym, sym, sym)  # 2x triangle count per node
    pairs = k * (k - 1)
    local = np.divide(closed, pairs, out=np.zeros(g.n), where=pairs > 0)
    if mode == "local":
        return local
    if mode == "average":
        return float(local.mean()) if g.n else 0.0
    if mode == "global":
        denom = pairs.sum()
        return float(closed.sum() / denom) if denom > 0 else 0.0
    raise ValueError(f"mode must be local|average|global, got {mode!r}")


def _bfs_dists(g: DirectedGraph, s: int) -> list:
    dist = [-1] * g.n
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in g.out_neighbors(u):
            if dist[v] < 0:
                dist[v] = du + 1
                queue.append(v)
    return dist


def shortest_path_stats(g: DirectedGraph) -> PathStats:
    """Average geodesic length and diameter over reachable ordered pairs.

    Unreachable pairs are excluded from the average and counted
    separately rather than treated as infinite.
    """
    total = 0
    reached = 0
    diameter = 0
    for s in range(g.n):
        for t, d in enumerate(_bfs_dists(g, s)):
            if t == s:
                continue
            if d < 0:
                continue
            total += d
            reached += 1
            if d > diameter:
                diameter = d
    all_pairs = g.n * (g.n - 1)
    if reached == 0:
        return PathStats(None, None, all_pairs)
    return PathStats(total / reached, diameter, all_pairs - reached)


def betweenness(g: DirectedGraph) -> np.ndarray:
    """Fractional geodesic betweenness (endpoints excluded), Brandes' method."""
    n = g.n
    b = np.zeros(n)
    for s in range(n):
        order = []
        preds = [[] for _ in range(n)]
        sigma = [0.0] * n
        dist = [-1] * n
        sigma[s] = 1.0
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in g.out_neighbors(u):
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
                if dist[v] == dist[u] + 1:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        delta = [0.0] * n
        for v in reversed(order):
            for u in preds[v]:
                delta[u] += sigma[u] / sigma[v] * (1.0 + delta[v])
            if v != s:
                b[v] += delta[v]
    return b


def pagerank(
    g: DirectedGraph,
    d: float = 0.85,
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> np.ndarray:
    """Stationary teleporting-random-walk probabilities.

    Dangling nodes (out-degree 0) redistribute their mass uniformly over
    all nodes so the vector stays a probability distribution.
    """
    if not 0.0 <= d <= 1.0:
        raise ValueError("damping d must lie in [0, 1]")
    n = g.n
    if n == 0:
        return np.zeros(0)
    out_deg = np.array([g.out_degree(i) for i in range(n)], dtype=np.float64)
    dangling = out_deg == 0
    a = g.adjacency().astype(np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(dangling[:, None], 0.0, a / np.where(out_deg == 0, 1, out_deg)[:, None])
    p = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = d * (t.T @ p + p[dangling].sum() / n) + (1.0 - d) / n
        if np.abs(nxt - p).sum() < tol:
            return nxt
        p = nxt
    raise ConvergenceError(f"pagerank did not converge within {max_iter} iterations")


def generate_er(n: int, p: float, rng_seed: int) -> DirectedGraph:
    """Directed Erdos-Renyi graph: each ordered arc present independently."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("arc probability must lie in [0, 1]")
    rng = np.random.default_rng(rng_seed)
    mat = rng.random((n, n)) < p
    np.fill_diagonal(mat, False)
    us, vs = np.nonzero(mat)
    return DirectedGraph(n, zip(us.tolist(), vs.tolist()))


def graph_stats(g: DirectedGraph) -> GraphStats:
    ps = shortest_path_stats(g)
    return GraphStats(
        density=density(g),
        weak_components=connected_components(g, "weak"),
        strong_components=connected_components(g, "strong"),
        avg_path_length=ps.avg_path_length,
        diameter=ps.diameter,
        unreachable_pairs=ps.unreachable_pairs,
    )
