"""Graph containers, loaders, classical measures, and the ER generator."""

import numpy as np
import pytest

from triadnet import graphs, measures
from triadnet.graphs import DirectedGraph, SignedGraph


def random_graph(n, p, seed):
    return measures.generate_er(n, p, seed)


# Worked example: arcs 1->2, 1->3, 1->4, 3->1, 4->3 (0-based below).
ADJ_EXAMPLE = DirectedGraph(4, [(0, 1), (0, 2), (0, 3), (2, 0), (3, 2)])

# Two weak components {1..10} and {11..13}; strong components {1-6}, {7},
# {8-10}, {11-13}; node 7 has no outgoing arcs.
COMPONENT_EXAMPLE = DirectedGraph(
    13,
    [
        (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0),  # cycle 1..6
        (5, 6), (7, 6),                                   # node 7 is a sink
        (7, 8), (8, 9), (9, 7),                           # cycle 8..10
        (10, 11), (11, 12), (12, 10),                     # cycle 11..13
    ],
)

# Five-node worked betweenness example: b = (0, 1, 2, 4, 0).
BETWEENNESS_EXAMPLE = DirectedGraph(
    5, [(0, 1), (0, 2), (1, 3), (2, 3), (2, 1), (3, 2), (3, 4)]
)


class TestContainers:
    def test_dedup_and_self_arcs(self):
        g = DirectedGraph(3, [(0, 1), (0, 1), (1, 1), (1, 2)])
        assert g.arc_count == 2
        assert g.has_arc(0, 1) and g.has_arc(1, 2)

    def test_degree_sums_match_arc_count(self):
        g = random_graph(40, 0.1, 3)
        degs = measures.degrees(g)
        assert sum(d[0] for d in degs) == sum(d[1] for d in degs) == g.arc_count

    def test_signed_graph_rejects_bad_sign(self):
        with pytest.raises(ValueError):
            SignedGraph(3, [(0, 1, 2)])

    def test_signed_degrees(self):
        g = SignedGraph(4, [(0, 1, 1), (0, 2, -1), (0, 3, -1)])
        assert g.signed_degrees(0) == (1, 2)


class TestLoader:
    def test_round_trip(self):
        res = graphs.load_edge_list("a b\nb a\n")
        assert res.graph.n == 2
        assert res.graph.arcs == frozenset({(0, 1), (1, 0)})

    def test_duplicate_count(self):
        res = graphs.load_edge_list("a b\na b\n")
        assert res.graph.arc_count == 1
        assert res.duplicate_arcs == 1

    def test_self_arc_count(self):
        res = graphs.load_edge_list("a a\n")
        assert res.graph.arc_count == 0
        assert res.self_arcs == 1

    def test_comments_and_errors(self):
        res = graphs.load_edge_list("# header\n1 2\n")
        assert res.graph.arc_count == 1
        with pytest.raises(graphs.ParseError) as err:
            graphs.load_edge_list("1 2\n1 2 3\n")
        assert err.value.line_number == 2

    def test_signed_loader(self):
        res = graphs.load_signed_edge_list("x y +1\ny z -1\n")
        assert res.graph.sign(0, 1) == 1
        assert res.graph.sign(1, 2) == -1


class TestDegreesAndDensity:
    def test_worked_out_degrees(self):
        degs = measures.degrees(ADJ_EXAMPLE)
        assert [d[1] for d in degs] == [3, 0, 1, 1]

    def test_empty_graph(self):
        assert measures.degrees(DirectedGraph(4, [])) == [(0, 0)] * 4

    def test_complete_graph_degrees(self):
        n = 6
        g = DirectedGraph(n, [(i, j) for i in range(n) for j in range(n) if i != j])
        assert measures.degrees(g) == [(n - 1, n - 1)] * n

    def test_density_directed(self):
        assert measures.density(ADJ_EXAMPLE) == pytest.approx(5 / 12)

    def test_density_complete(self):
        g = DirectedGraph(5, [(i, j) for i in range(5) for j in range(5) if i != j])
        assert measures.density(g) == 1.0

    def test_density_empty_and_undirected(self):
        assert measures.density(DirectedGraph(10, [])) == 0.0
        sg = SignedGraph(4, [(0, 1, 1), (2, 3, -1)])
        assert measures.density(sg) == pytest.approx(2 * 2 / (4 * 3))

    def test_density_undefined(self):
        with pytest.raises(measures.UndefinedInputError):
            measures.density(DirectedGraph(1, []))


class TestComponents:
    def test_worked_component_structure(self):
        weak = measures.connected_components(COMPONENT_EXAMPLE, "weak")
        strong = measures.connected_components(COMPONENT_EXAMPLE, "strong")
        assert sorted(map(sorted, weak)) == [list(range(10)), [10, 11, 12]]
        assert sorted(map(sorted, strong)) == [
            [0, 1, 2, 3, 4, 5],
            [6],
            [7, 8, 9],
            [10, 11, 12],
        ]

    def test_empty_graph_singletons(self):
        g = DirectedGraph(3, [])
        for mode in ("weak", "strong"):
            comps = measures.connected_components(g, mode)
            assert sorted(map(sorted, comps)) == [[0], [1], [2]]

    def _strong_oracle(self, g):
        # mutual reachability via O(N^2) BFS
        reach = []
        for s in range(g.n):
            seen = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for v in g.out_neighbors(u):
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            reach.append(seen)
        comps = []
        assigned = set()
        for i in range(g.n):
            if i in assigned:
                continue
            comp = {j for j in range(g.n) if j in reach[i] and i in reach[j]}
            comps.append(comp)
            assigned |= comp
        return comps

    def test_strong_against_reachability_oracle(self):
        g = random_graph(50, 0.05, 11)
        got = sorted(map(sorted, measures.connected_components(g, "strong")))
        want = sorted(map(sorted, self._strong_oracle(g)))
        assert got == want


class TestClustering:
    def test_triangle(self):
        g = DirectedGraph(3, [(0, 1), (1, 2), (2, 0)])
        assert measures.clustering(g, "local").tolist() == [1.0, 1.0, 1.0]
        assert measures.clustering(g, "global") == 1.0

    def test_star_has_no_closed_triads(self):
        g = DirectedGraph(4, [(0, 1), (0, 2), (0, 3)])
        assert measures.clustering(g, "global") == 0.0
        assert measures.clustering(g, "local")[1] == 0.0  # degree-1 convention

    def test_er_average_matches_edge_probability(self):
        # undirected-style ER: each unordered pair bidirectional with prob p
        n, p = 100, 0.3
        rng = np.random.default_rng(5)
        arcs = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    arcs += [(i, j), (j, i)]
        g = DirectedGraph(n, arcs)
        local = measures.clustering(g, "local")
        # <C> tracks the realized density, whose fluctuation dominates
        se = np.sqrt(p * (1 - p) / (n * (n - 1) / 2))
        assert abs(local.mean() - p) < 3 * se

    def test_global_matches_triple_enumeration(self):
        g = random_graph(25, 0.15, 21)
        a = g.adjacency()
        sym = ((a + a.T) > 0).astype(int)
        closed = opened = 0
        for i in range(g.n):
            for j in range(g.n):
                for k in range(g.n):
                    if len({i, j, k}) < 3:
                        continue
                    if sym[i][j] and sym[j][k]:
                        opened += 1
                        if sym[k][i]:
                            closed += 1
        want = closed / opened
        assert measures.clustering(g, "global") == pytest.approx(want)


class TestShortestPaths:
    def test_directed_three_cycle(self):
        g = DirectedGraph(3, [(0, 1), (1, 2), (2, 0)])
        stats = measures.shortest_path_stats(g)
        assert stats.avg_path_length == pytest.approx(1.5)
        assert stats.diameter == 2
        assert stats.unreachable_pairs == 0

    def test_isolated_nodes(self):
        stats = measures.shortest_path_stats(DirectedGraph(2, []))
        assert stats.avg_path_length is None
        assert stats.unreachable_pairs == 2

    def test_against_floyd_warshall(self):
        g = random_graph(30, 0.08, 31)
        n = g.n
        inf = float("inf")
        d = np.full((n, n), inf)
        np.fill_diagonal(d, 0.0)
        for u, v in g.arcs:
            d[u][v] = 1.0
        for k in range(n):
            d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
        off = d[~np.eye(n, dtype=bool)]
        finite = off[np.isfinite(off)]
        stats = measures.shortest_path_stats(g)
        if finite.size:
            assert stats.avg_path_length == pytest.approx(finite.mean())
            assert stats.diameter == int(finite.max())
        assert stats.unreachable_pairs == int(np.isinf(off).sum())


def betweenness_oracle(g):
    """Exhaustive geodesic enumeration (for small graphs)."""
    import itertools
    from collections import deque

    n = g.n
    b = [0.0] * n
    for s, t in itertools.permutations(range(n), 2):
        # BFS layers from s
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.out_neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        if t not in dist:
            continue
        paths = []
        stack = [[s]]
        while stack:
            path = stack.pop()
            u = path[-1]
            if u == t:
                paths.append(path)
                continue
            for v in g.out_neighbors(u):
                if dist.get(v) == len(path):
                    stack.append(path + [v])
        for path in paths:
            for mid in path[1:-1]:
                b[mid] += 1.0 / len(paths)
    return np.array(b)


class TestBetweenness:
    def test_worked_values(self):
        assert measures.betweenness(BETWEENNESS_EXAMPLE).tolist() == [0, 1, 2, 4, 0]

    def test_complete_graph_zero(self):
        g = DirectedGraph(5, [(i, j) for i in range(5) for j in range(5) if i != j])
        assert measures.betweenness(g).tolist() == [0] * 5

    def test_against_enumeration_oracle(self):
        g = random_graph(25, 0.1, 41)
        np.testing.assert_allclose(
            measures.betweenness(g), betweenness_oracle(g), atol=1e-9
        )

    def test_outward_tree_ancestor_descendant_product(self):
        rng = np.random.default_rng(7)
        n = 20
        parents = [int(rng.integers(0, i)) for i in range(1, n)]
        g = DirectedGraph(n, [(p, i + 1) for i, p in enumerate(parents)])
        np.testing.assert_allclose(
            measures.betweenness(g), betweenness_oracle(g), atol=1e-9
        )


class TestPageRank:
    def test_uniform_at_zero_damping(self):
        g = random_graph(12, 0.2, 51)
        np.testing.assert_allclose(measures.pagerank(g, d=0.0), np.full(12, 1 / 12))

    def test_mutual_pair_symmetry(self):
        g = DirectedGraph(2, [(0, 1), (1, 0)])
        np.testing.assert_allclose(measures.pagerank(g, d=0.85), [0.5, 0.5])

    def test_against_linear_solve(self):
        g = random_graph(10, 0.25, 61)
        d = 0.85
        n = g.n
        a = g.adjacency().astype(float)
        out = a.sum(axis=1)
        t = np.zeros((n, n))
        for i in range(n):
            t[i] = a[i] / out[i] if out[i] > 0 else 1.0 / n
        p = np.linalg.solve(np.eye(n) - d * t.T, np.full(n, (1 - d) / n))
        got = measures.pagerank(g, d=d, tol=1e-14)
        np.testing.assert_allclose(got, p, atol=1e-10)
        assert got.sum() == pytest.approx(1.0, abs=1e-9)

    def test_permutation_equivariance(self):
        g = random_graph(15, 0.2, 71)
        perm = np.random.default_rng(2).permutation(15)
        relabeled = g.relabel(perm.tolist())
        pr = measures.pagerank(g)
        pr2 = measures.pagerank(relabeled)
        np.testing.assert_allclose(pr2[perm], pr, atol=1e-9)


class TestGenerateEr:
    def test_extremes(self):
        assert measures.generate_er(10, 0.0, 1).arc_count == 0
        g = measures.generate_er(6, 1.0, 1)
        assert g.arc_count == 30

    def test_poisson_degree_distribution(self):
        n, p = 2000, 0.002
        lam = (n - 1) * p
        degs = []
        for seed in (4, 5, 6):
            g = measures.generate_er(n, p, seed)
            degs += [g.in_degree(i) for i in range(n)]
            degs += [g.out_degree(i) for i in range(n)]
        degs = np.array(degs)
        kmax = max(degs.max() + 1, 25)
        emp = np.bincount(degs, minlength=kmax) / degs.size
        from scipy import stats as sps

        pois = sps.poisson.pmf(np.arange(kmax), lam)
        tv = 0.5 * (np.abs(emp - pois).sum() + (1.0 - pois.sum()))
        assert tv < 0.02

    def test_arc_independence(self):
        p = 0.4
        hits = np.empty((100_000, 2), dtype=bool)
        for s in range(hits.shape[0]):
            g = measures.generate_er(4, p, s)
            hits[s, 0] = g.has_arc(0, 1)
            hits[s, 1] = g.has_arc(2, 3)
        x, y = hits[:, 0].astype(float), hits[:, 1].astype(float)
        cov = (x * y).mean() - x.mean() * y.mean()
        sigma = np.sqrt((p * (1 - p)) ** 2 / hits.shape[0])
        assert abs(cov) < 3 * sigma
