"""Directed and signed graph containers plus edge-list I/O.

Graphs are immutable after construction: node ids are dense integers
0..N-1, arcs are ordered pairs without self-loops or duplicates.  All
analysis modules treat these objects as read-only; the randomizer works
on its own mutable copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ParseError(ValueError):
    """Raised for malformed edge-list input; carries the line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DirectedGraph:
    """Simple directed graph on nodes 0..n-1 (no self-arcs, no duplicates)."""

    __slots__ = ("n", "_arcs", "_out", "_in", "_nbrs")

    def __init__(self, n: int, arcs):
        if n < 0:
            raise ValueError("node count must be non-negative")
        self.n = n
        arc_set = set()
        out = [[] for _ in range(n)]
        inn = [[] for _ in range(n)]
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) outside node range 0..{n - 1}")
            if u == v or (u, v) in arc_set:
                continue
            arc_set.add((u, v))
            out[u].append(v)
            inn[v].append(u)
        self._arcs = frozenset(arc_set)
        self._out = tuple(tuple(sorted(a)) for a in out)
        self._in = tuple(tuple(sorted(a)) for a in inn)
        self._nbrs = tuple(
            tuple(sorted(set(o) | set(i))) for o, i in zip(self._out, self._in)
        )

    @property
    def arcs(self) -> frozenset:
        return self._arcs

    @property
    def arc_count(self) -> int:
        return len(self._arcs)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self._arcs

    def out_neighbors(self, u: int):
        return self._out[u]

    def in_neighbors(self, u: int):
        return self._in[u]

    def neighbors(self, u: int):
        """All nodes adjacent to u in either direction."""
        return self._nbrs[u]

    def out_degree(self, u: int) -> int:
        return len(self._out[u])

    def in_degree(self, u: int) -> int:
        return len(self._in[u])

    def adjacency(self) -> np.ndarray:
        """Dense adjacency matrix A with A[u, v] = 1 iff arc u -> v."""
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self._arcs:
            a[u, v] = 1
        return a

    def reverse(self) -> "DirectedGraph":
        return DirectedGraph(self.n, ((v, u) for u, v in self._arcs))

    def relabel(self, perm) -> "DirectedGraph":
        """Return the graph with node i renamed perm[i]."""
        return DirectedGraph(self.n, ((perm[u], perm[v]) for u, v in self._arcs))

    def subgraph_without(self, nodes) -> "DirectedGraph":
        """Drop the given nodes (keeping n and the ids of the rest)."""
        dropped = set(nodes)
        return DirectedGraph(
            self.n,
            ((u, v) for u, v in self._arcs if u not in dropped and v not in dropped),
        )

    def __eq__(self, other):
        return (
            isinstance(other, DirectedGraph)
            and self.n == other.n
            and self._arcs == other._arcs
        )

    def __hash__(self):
        return hash((self.n, self._arcs))

    def __repr__(self):
        return f"DirectedGraph(n={self.n}, arcs={self.arc_count})"


class SignedGraph:
    """Simple undirected graph with one +1/-1 sign per edge."""

    __slots__ = ("n", "_signs", "_nbrs")

    def __init__(self, n: int, edges):
        if n < 0:
            raise ValueError("node count must be non-negative")
        self.n = n
        signs = {}
        nbrs = [[] for _ in range(n)]
        for u, v, s in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside node range 0..{n - 1}")
            if s not in (1, -1):
                raise ValueError(f"edge sign must be +1 or -1, got {s!r}")
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key in signs:
                if signs[key] != s:
                    raise ValueError(f"conflicting signs for edge {key}")
                continue
            signs[key] = s
            nbrs[u].append(v)
            nbrs[v].append(u)
        self._signs = signs
        self._nbrs = tuple(tuple(sorted(a)) for a in nbrs)

    @property
    def edges(self) -> dict:
        """Mapping (u, v) with u < v -> sign."""
        return dict(self._signs)

    @property
    def edge_count(self) -> int:
        return len(self._signs)

    def sign(self, u: int, v: int) -> int:
        """Sign of edge {u, v}, or 0 if absent."""
        key = (u, v) if u < v else (v, u)
        return self._signs.get(key, 0)

    def has_edge(self, u: int, v: int) -> bool:
        return self.sign(u, v) != 0

    def neighbors(self, u: int):
        return self._nbrs[u]

    def degree(self, u: int) -> int:
        return len(self._nbrs[u])

    def signed_degrees(self, u: int) -> tuple:
        """(positive degree, negative degree) of u."""
        pos = sum(1 for v in self._nbrs[u] if self.sign(u, v) > 0)
        return pos, len(self._nbrs[u]) - pos

    def __eq__(self, other):
        return (
            isinstance(other, SignedGraph)
            and self.n == other.n
            and self._signs == other._signs
        )

    def __repr__(self):
        return f"SignedGraph(n={self.n}, edges={self.edge_count})"


@dataclass
class LoadResult:
    """Edge-list parse outcome: the graph plus dropped-record counts."""

    graph: object
    labels: list = field(default_factory=list)
    duplicate_arcs: int = 0
    self_arcs: int = 0

    def label_of(self, node_id: int) -> str:
        return self.labels[node_id]


def _iter_records(text: str, tokens_per_line: int):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != tokens_per_line:
            raise ParseError(
                f"expected {tokens_per_line} tokens, got {len(parts)}: {line!r}",
                lineno,
            )
        yield lineno, parts


def load_edge_list(text: str) -> LoadResult:
    """Parse 'src dst' lines into a DirectedGraph.

    String tokens are mapped to dense integer ids in first-seen order.
    Duplicate arcs are collapsed and self-arcs dropped; both are counted
    in the returned LoadResult.
    """
    ids: dict = {}
    labels: list = []
    arcs = []
    seen = set()
    duplicates = 0
    selfies = 0
    for _, (src, dst) in _iter_records(text, 2):
        for tok in (src, dst):
            if tok not in ids:
                ids[tok] = len(labels)
                labels.append(tok)
        u, v = ids[src], ids[dst]
        if u == v:
            selfies += 1
        elif (u, v) in seen:
            duplicates += 1
        else:
            seen.add((u, v))
            arcs.append((u, v))
    graph = DirectedGraph(len(labels), arcs)
    return LoadResult(graph, labels, duplicates, selfies)


def load_signed_edge_list(text: str) -> LoadResult:
    """Parse 'u v +1|-1' lines into a SignedGraph."""
    ids: dict = {}
    labels: list = []
    edges = []
    seen = {}
    duplicates = 0
    selfies = 0
    for lineno, (src, dst, sign_tok) in _iter_records(text, 3):
        if sign_tok not in ("+1", "-1", "+", "-", "1"):
            raise ParseError(f"bad sign token {sign_tok!r}", lineno)
        sign = -1 if sign_tok.startswith("-") else 1
        for tok in (src, dst):
            if tok not in ids:
                ids[tok] = len(labels)
                labels.append(tok)
        u, v = ids[src], ids[dst]
        if u == v:
            selfies += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            if seen[key] != sign:
                raise ParseError(f"conflicting signs for pair {src} {dst}", lineno)
            duplicates += 1
        else:
            seen[key] = sign
    graph = SignedGraph(len(labels), ((u, v, s) for (u, v), s in seen.items()))
    return LoadResult(graph, labels, duplicates, selfies)


def format_edge_list(g: DirectedGraph, labels=None) -> str:
    """Serialize arcs as 'src<TAB>dst' lines, sorted for determinism."""
    name = (lambda i: labels[i]) if labels is not None else str
    return "".join(f"{name(u)}\t{name(v)}\n" for u, v in sorted(g.arcs))


def format_signed_edge_list(g: SignedGraph, labels=None) -> str:
    name = (lambda i: labels[i]) if labels is not None else str
    return "".join(
        f"{name(u)}\t{name(v)}\t{'+1' if s > 0 else '-1'}\n"
        for (u, v), s in sorted(g.edges.items())
    )
