"""Degree-preserving Markov-chain randomization.

Directed graphs: pair switches on two node-disjoint links of the same
kind (unidirectional or bidirectional) and loop switches reversing a
unidirectional triadic loop.  Signed undirected graphs: pair switches
within a sign class.  Every draw consumes a chain step whether or not a
switch happens; this residence-time accounting is what makes the
stationary distribution uniform over the degree-constrained ensemble.

Per-node in/out degrees and per-node counts of adjacent unidirectional
and bidirectional links (positive/negative degrees in the signed case)
are conserved exactly at every step.
"""

from __future__ import annotations

import math

import numpy as np

from .graphs import DirectedGraph, SignedGraph

_BLOCK = 1 << 14


def instance_seed(base_seed: int, index: int) -> np.random.SeedSequence:
    """Derived stream for ensemble instance ``index`` (order-independent)."""
    return np.random.SeedSequence(entropy=base_seed, spawn_key=(index,))


def _generator(rng_seed) -> np.random.Generator:
    if isinstance(rng_seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(rng_seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(rng_seed)))


class DirectedSwitchChain:
    """Mutable switching-chain state owning a working copy of the graph."""

    def __init__(self, g: DirectedGraph, rng_seed):
        self.n = g.n
        self.arcs = set(g.arcs)
        self.uni = []
        self.bi = []
        for u, v in sorted(g.arcs):
            if (v, u) in self.arcs:
                if u < v:
                    self.bi.append((u, v))
            else:
                self.uni.append((u, v))
        self.uni_pos = {arc: k for k, arc in enumerate(self.uni)}
        self.steps_taken = 0
        self.rng = _generator(rng_seed)

    def graph(self) -> DirectedGraph:
        return DirectedGraph(self.n, self.arcs)

    def _dyad_free(self, u: int, v: int) -> bool:
        return (u, v) not in self.arcs and (v, u) not in self.arcs

    def run(self, steps: int) -> "DirectedSwitchChain":
        if steps < 0:
            raise ValueError("steps must be non-negative")
        n_uni = len(self.uni)
        n_bi = len(self.bi)
        m = n_uni + n_bi
        self.steps_taken += steps
        if m == 0 or (n_uni < 2 and n_bi < 2):
            return self  # no move is ever possible; the chain rests
        arcs = self.arcs
        uni = self.uni
        bi = self.bi
        uni_pos = self.uni_pos
        rng = self.rng
        done = 0
        while done < steps:
            block = min(_BLOCK, steps - done)
            first = rng.integers(0, m, size=block)
            second = rng.random(size=block)
            coins = rng.random(size=block)
            for t in range(block):
                k = int(first[t])
                if k < n_uni:
                    if n_uni < 2:
                        continue
                    j = int(second[t] * (n_uni - 1))
                    if j >= k:
                        j += 1
                    u1, v1 = uni[k]
                    u2, v2 = uni[j]
                    if u1 != u2 and u1 != v2 and v1 != u2 and v1 != v2:
                        a1 = (u1, v2)
                        a2 = (u2, v1)
                        if (
                            a1 not in arcs
                            and (v2, u1) not in arcs
                            and a2 not in arcs
                            and (v1, u2) not in arcs
                        ):
                            arcs.discard((u1, v1))
                            arcs.discard((u2, v2))
                            arcs.add(a1)
                            arcs.add(a2)
                            del uni_pos[(u1, v1)], uni_pos[(u2, v2)]
                            uni[k] = a1
                            uni[j] = a2
                            uni_pos[a1] = k
                            uni_pos[a2] = j
                    else:
                        # one shared node: loop switch if the two links lie
                        # on a unidirectional triadic loop
                        if v1 == u2:
                            x, y, z = u1, v1, v2
                        elif v2 == u1:
                            x, y, z = u2, v2, v1
                        else:
                            continue  # shared tail or head: no loop
                        if (z, x) in arcs and (x, z) not in arcs:
                            p3 = uni_pos[(z, x)]
                            pxy, pyz = (k, j) if uni[k] == (x, y) else (j, k)
                            for old in ((x, y), (y, z), (z, x)):
                                arcs.discard(old)
                                del uni_pos[old]
                            for pos, new in ((pxy, (y, x)), (pyz, (z, y)), (p3, (x, z))):
                                arcs.add(new)
                                uni[pos] = new
                                uni_pos[new] = pos
                else:
                    if n_bi < 2:
                        continue
                    kb = k - n_uni
                    j = int(second[t] * (n_bi - 1))
                    if j >= kb:
                        j += 1
                    u1, v1 = bi[kb]
                    u2, v2 = bi[j]
                    if u1 == u2 or u1 == v2 or v1 == u2 or v1 == v2:
                        continue
                    if coins[t] < 0.5:
                        p1, p2 = (u1, u2), (v1, v2)
                    else:
                        p1, p2 = (u1, v2), (v1, u2)
                    if self._dyad_free(*p1) and self._dyad_free(*p2):
                        for a, b in ((u1, v1), (u2, v2)):
                            arcs.discard((a, b))
                            arcs.discard((b, a))
                        for a, b in (p1, p2):
                            arcs.add((a, b))
                            arcs.add((b, a))
                        bi[kb] = (min(p1), max(p1))
                        bi[j] = (min(p2), max(p2))
            done += block
        return self


class SignedSwitchChain:
    """Sign-class-preserving pair-switch chain for undirected signed graphs."""

    def __init__(self, g: SignedGraph, rng_seed):
        self.n = g.n
        self.present = set(g.edges)  # (u, v) with u < v, any sign
        self.pos = sorted(e for e, s in g.edges.items() if s > 0)
        self.neg = sorted(e for e, s in g.edges.items() if s < 0)
        self.steps_taken = 0
        self.rng = _generator(rng_seed)

    def graph(self) -> SignedGraph:
        edges = [(u, v, 1) for u, v in self.pos] + [(u, v, -1) for u, v in self.neg]
        return SignedGraph(self.n, edges)

    def run(self, steps: int) -> "SignedSwitchChain":
        if steps < 0:
            raise ValueError("steps must be non-negative")
        n_pos = len(self.pos)
        n_neg = len(self.neg)
        m = n_pos + n_neg
        self.steps_taken += steps
        if m == 0 or (n_pos < 2 and n_neg < 2):
            return self
        present = self.present
        rng = self.rng
        done = 0
        while done < steps:
            block = min(_BLOCK, steps - done)
            first = rng.integers(0, m, size=block)
            second = rng.random(size=block)
            coins = rng.random(size=block)
            for t in range(block):
                k = int(first[t])
                if k < n_pos:
                    edges, kk, count = self.pos, k, n_pos
                else:
                    edges, kk, count = self.neg, k - n_pos, n_neg
                if count < 2:
                    continue
                j = int(second[t] * (count - 1))
                if j >= kk:
                    j += 1
                u1, v1 = edges[kk]
                u2, v2 = edges[j]
                if u1 == u2 or u1 == v2 or v1 == u2 or v1 == v2:
                    continue
                if coins[t] < 0.5:
                    a, b = (u1, u2), (v1, v2)
                else:
                    a, b = (u1, v2), (v1, u2)
                a = (min(a), max(a))
                b = (min(b), max(b))
                if a in present or b in present:
                    continue
                present.discard((u1, v1))
                present.discard((u2, v2))
                present.add(a)
                present.add(b)
                edges[kk] = a
                edges[j] = b
            done += block
        return self


def randomize_directed(g: DirectedGraph, steps: int, rng_seed) -> DirectedGraph:
    """Run the directed switching chain for ``steps`` draws."""
    return DirectedSwitchChain(g, rng_seed).run(steps).graph()


def randomize_signed(g: SignedGraph, steps: int, rng_seed) -> SignedGraph:
    """Run the signed switching chain for ``steps`` draws."""
    return SignedSwitchChain(g, rng_seed).run(steps).graph()


def ensemble(
    g,
    instances: int,
    steps_per_edge: float = 100.0,
    rng_seed: int = 0,
):
    """Yield independent randomizations of ``g``.

    Each instance runs its own chain of ceil(steps_per_edge * |E|) steps
    from the seed graph, on a per-instance derived RNG stream, so the
    stream is reproducible and independent of consumption order.
    """
    if instances < 1:
        raise ValueError("instances must be >= 1")
    signed = isinstance(g, SignedGraph)
    size = g.edge_count if signed else g.arc_count
    steps = math.ceil(steps_per_edge * size)
    chain_cls = SignedSwitchChain if signed else DirectedSwitchChain
    for i in range(instances):
        yield chain_cls(g, instance_seed(rng_seed, i)).run(steps).graph()
