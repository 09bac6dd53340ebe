"""Canonical triad pattern tables and censuses.

A triad on slots (a, b, c) is a 6-bit configuration code; bit k flags one
ordered arc in the fixed slot order (a->b, b->a, a->c, c->a, b->c, c->b).
The 64 codes fall into 16 isomorphism classes (patterns).  Pattern ids
are pinned here once and used everywhere:

  1  empty            2  single arc       3  mutual dyad (disconnected)
  4-6  the three connected two-arc classes, ordered by canonical code
  7,10 the two mutual-plus-arc open classes, ordered by canonical code
  8  feed-forward loop (transitive unidirectional triangle)
  9  cyclic unidirectional triangle
  11 open two-mutual path
  12-14 the closed mutual-plus-two-arc classes, ordered by canonical code
  15 five-arc closed     16 complete bidirectional

Breaking each connected pattern's symmetry at a focal node yields the 30
node-specific orbits; signed undirected triads contribute 13 more
focal-node patterns.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .graphs import DirectedGraph, SignedGraph

_SLOT_ARCS = ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1))
_ARC_BIT = {arc: k for k, arc in enumerate(_SLOT_ARCS)}
_PERMS = tuple(permutations(range(3)))

N_PATTERNS = 16
N_ORBITS = 30
N_SIGNED_PATTERNS = 13
CONNECTED_IDS = tuple(range(4, 17))
FFL_ID = 8
CYCLE_ID = 9


def code_arcs(code: int) -> tuple:
    return tuple(arc for arc, k in _ARC_BIT.items() if code >> k & 1)


def code_from_arcs(arcs) -> int:
    return sum(1 << _ARC_BIT[a] for a in arcs)


def permute_code(code: int, perm) -> int:
    """Code of the configuration after renaming slot p to perm[p]."""
    return code_from_arcs((perm[u], perm[v]) for u, v in code_arcs(code))


def _is_connected(code: int) -> bool:
    touched = [False, False, False]
    for u, v in code_arcs(code):
        touched[u] = touched[v] = True
    return all(touched)


def _mutual_dyads(code: int) -> int:
    return sum(1 for k in (0, 2, 4) if code >> k & 1 and code >> (k + 1) & 1)


def _occupied_dyads(code: int) -> int:
    return sum(1 for k in (0, 2, 4) if (code >> k & 1) or (code >> (k + 1) & 1))


def _out_slot_degrees(code: int) -> tuple:
    deg = [0, 0, 0]
    for u, _ in code_arcs(code):
        deg[u] += 1
    return tuple(deg)


def _in_slot_degrees(code: int) -> tuple:
    deg = [0, 0, 0]
    for _, v in code_arcs(code):
        deg[v] += 1
    return tuple(deg)


@dataclass(frozen=True)
class PatternInfo:
    pattern_id: int
    canonical_code: int
    configurations: tuple  # all codes isomorphic to the canonical one
    arcs: int
    mutual_dyads: int
    connected: bool
    closed: bool

    @property
    def orbit_size(self) -> int:
        return len(self.configurations)


def _build_patterns() -> tuple:
    canon = {}
    orbits = {}
    for code in range(64):
        images = {permute_code(code, p) for p in _PERMS}
        c = min(images)
        canon[code] = c
        orbits.setdefault(c, set()).add(code)

    classes = sorted(orbits)  # 16 canonical codes
    assert len(classes) == 16

    def props(c):
        return (
            bin(c).count("1"),
            _mutual_dyads(c),
            _is_connected(c),
            _occupied_dyads(c) == 3,
        )

    ids: dict = {}
    two_arc, one_mutual3, closed3, closed_mutual4 = [], [], [], []
    for c in classes:
        arcs, mut, conn, closed = props(c)
        if not conn:
            if arcs == 0:
                ids[c] = 1
            elif arcs == 1:
                ids[c] = 2
            else:
                ids[c] = 3
        elif arcs == 2:
            two_arc.append(c)
        elif arcs == 3 and mut == 1:
            one_mutual3.append(c)
        elif arcs == 3 and closed:
            closed3.append(c)
        elif arcs == 4 and mut == 2:
            ids[c] = 11
        elif arcs == 4 and mut == 1:
            closed_mutual4.append(c)
        elif arcs == 5:
            ids[c] = 15
        else:
            ids[c] = 16
    for pid, c in zip((4, 5, 6), sorted(two_arc)):
        ids[c] = pid
    for pid, c in zip((7, 10), sorted(one_mutual3)):
        ids[c] = pid
    for c in closed3:
        # the transitive triangle has a slot with two outgoing arcs
        ids[c] = FFL_ID if max(_out_slot_degrees(c)) == 2 else CYCLE_ID
    for pid, c in zip((12, 13, 14), sorted(closed_mutual4)):
        ids[c] = pid

    infos = [None] * 16
    for c, pid in ids.items():
        arcs, mut, conn, closed = props(c)
        infos[pid - 1] = PatternInfo(
            pattern_id=pid,
            canonical_code=c,
            configurations=tuple(sorted(orbits[c])),
            arcs=arcs,
            mutual_dyads=mut,
            connected=conn,
            closed=closed,
        )
    pattern_of = np.zeros(64, dtype=np.int8)
    for code in range(64):
        pattern_of[code] = ids[canon[code]]
    return tuple(infos), pattern_of


PATTERNS, _PATTERN_OF = _build_patterns()
ARCS_PER_PATTERN = np.array([p.arcs for p in PATTERNS], dtype=np.int64)
CLOSED_IDS = tuple(p.pattern_id for p in PATTERNS if p.closed)


def classify(code: int) -> int:
    """Pattern id (1..16) of a 6-bit triad configuration code."""
    if not 0 <= code < 64:
        raise ValueError("triad code must lie in [0, 63]")
    return int(_PATTERN_OF[code])


@dataclass(frozen=True)
class OrbitInfo:
    orbit_id: int  # global 1..30
    pattern_id: int
    rooted_code: int  # canonical code with the focal node in slot 0
    size: int  # number of equivalent slots in the pattern


def _rooted_code(code: int, focal: int) -> int:
    """Canonical form of (configuration, focal slot) with focal mapped to 0."""
    best = 64
    for p in _PERMS:
        if p[focal] != 0:
            continue
        best = min(best, permute_code(code, p))
    return best


def _build_orbits() -> tuple:
    orbit_infos = []
    rooted_to_orbit = {}
    next_id = 1
    for info in PATTERNS:
        if not info.connected:
            continue
        c = info.canonical_code
        rooted = {}
        for focal in range(3):
            rooted.setdefault(_rooted_code(c, focal), []).append(focal)
        for rcode in sorted(rooted):
            orbit_infos.append(
                OrbitInfo(next_id, info.pattern_id, rcode, len(rooted[rcode]))
            )
            rooted_to_orbit[(info.pattern_id, rcode)] = next_id
            next_id += 1
    orbit_at = np.zeros((64, 3), dtype=np.int8)
    for code in range(64):
        pid = int(_PATTERN_OF[code])
        if not PATTERNS[pid - 1].connected:
            continue
        for focal in range(3):
            orbit_at[code, focal] = rooted_to_orbit[(pid, _rooted_code(code, focal))]
    return tuple(orbit_infos), orbit_at


ORBITS, _ORBIT_AT = _build_orbits()
ORBITS_OF_PATTERN = {
    pid: tuple(o.orbit_id for o in ORBITS if o.pattern_id == pid)
    for pid in CONNECTED_IDS
}


def orbit_of(code: int, focal_slot: int) -> int:
    """Global node-specific orbit id (1..30) for a connected configuration."""
    oid = int(_ORBIT_AT[code, focal_slot])
    if oid == 0:
        raise ValueError(f"code {code} is not connected")
    return oid


# --- signed node-specific patterns -------------------------------------------

_SIGN_PAIRS = ((1, 1), (1, -1), (-1, -1))


@dataclass(frozen=True)
class SignedPatternInfo:
    pattern_id: int  # 1..13
    kind: str  # "path_end" | "path_middle" | "triangle"
    incident_signs: tuple  # signs on edges at the focal node
    far_sign: int | None  # remaining edge sign (None for path middles)
    balanced: bool | None  # triangles only: sign product positive


def _build_signed_patterns() -> tuple:
    infos = []
    pid = 1
    for si in (1, -1):
        for sf in (1, -1):
            infos.append(SignedPatternInfo(pid, "path_end", (si,), sf, None))
            pid += 1
    for pair in _SIGN_PAIRS:
        infos.append(SignedPatternInfo(pid, "path_middle", pair, None, None))
        pid += 1
    for pair in _SIGN_PAIRS:
        for sf in (1, -1):
            prod = pair[0] * pair[1] * sf
            infos.append(SignedPatternInfo(pid, "triangle", pair, sf, prod > 0))
            pid += 1
    return tuple(infos)


SIGNED_PATTERNS = _build_signed_patterns()
_SIGNED_END = {(si, sf): 1 + 2 * (si < 0) + (sf < 0) for si in (1, -1) for sf in (1, -1)}
_SIGNED_MID = {p: 5 + i for i, p in enumerate(_SIGN_PAIRS)}
_SIGNED_TRI = {
    (p, sf): 8 + 2 * i + (sf < 0) for i, p in enumerate(_SIGN_PAIRS) for sf in (1, -1)
}


def signed_pattern_id(incident, far_sign) -> int:
    """Focal-node signed pattern id from incident signs and the far edge.

    ``incident`` holds the focal node's edge signs inside the triad (one
    or two); ``far_sign`` is the remaining edge's sign, 0 if absent.
    """
    if len(incident) == 1:
        if far_sign == 0:
            raise ValueError("disconnected triad has no signed pattern")
        return _SIGNED_END[(incident[0], far_sign)]
    pair = tuple(sorted(incident, reverse=True))
    if far_sign == 0:
        return _SIGNED_MID[pair]
    return _SIGNED_TRI[(pair, far_sign)]


# --- censuses -----------------------------------------------------------------


def _triad_code(arcs: frozenset, x: int, y: int, z: int) -> int:
    """Configuration code of the triad (x, y, z) mapped to slots (0, 1, 2)."""
    return (
        ((x, y) in arcs)
        | ((y, x) in arcs) << 1
        | ((x, z) in arcs) << 2
        | ((z, x) in arcs) << 3
        | ((y, z) in arcs) << 4
        | ((z, y) in arcs) << 5
    )


def _connected_dyads(g: DirectedGraph):
    return sorted({(u, v) if u < v else (v, u) for u, v in g.arcs})


def _iter_connected_triads(g: DirectedGraph):
    """Yield (i, j, c) with i < j exactly once per connected triad.

    A triad is visited through its lexicographically smallest connected
    dyad (i, j); candidates c come from the dyad's joint neighborhood.
    """
    arcs = g.arcs
    nbrs = [set(g.neighbors(u)) for u in range(g.n)]
    for i, j in _connected_dyads(g):
        for c in nbrs[i] | nbrs[j]:
            if c == i or c == j:
                continue
            if c < j and (((i, c) in arcs) or ((c, i) in arcs)):
                continue
            if c < i and (((j, c) in arcs) or ((c, j) in arcs)):
                continue
            yield i, j, c


def census(g: DirectedGraph, connected_only: bool = True) -> np.ndarray:
    """Triad pattern counts, indexed by pattern id - 1.

    With ``connected_only`` the disconnected classes (ids 1-3) stay zero;
    otherwise they are derived by subtraction so that the 16 counts sum
    to C(n, 3).
    """
    counts = np.zeros(N_PATTERNS, dtype=np.int64)
    arcs = g.arcs
    for i, j, c in _iter_connected_triads(g):
        x, y, z = sorted((i, j, c))
        counts[_PATTERN_OF[_triad_code(arcs, x, y, z)] - 1] += 1
    if connected_only:
        return counts
    n = g.n
    nbrs = [set(g.neighbors(u)) for u in range(n)]
    for i, j in _connected_dyads(g):
        lonely = (n - 2) - len((nbrs[i] | nbrs[j]) - {i, j})
        if (j, i) in arcs and (i, j) in arcs:
            counts[2] += lonely
        else:
            counts[1] += lonely
    total = n * (n - 1) * (n - 2) // 6
    counts[0] = total - counts[1:].sum()
    return counts


def node_specific_counts(g: DirectedGraph) -> np.ndarray:
    """Per-node orbit counts, shape (n, 30), column o for orbit id o+1.

    Every connected triad contributes exactly once per member node, to
    the orbit the node occupies in the triad's full induced pattern.
    """
    counts = np.zeros((g.n, N_ORBITS), dtype=np.int64)
    arcs = g.arcs
    orbit_at = _ORBIT_AT
    for i, j, c in _iter_connected_triads(g):
        x, y, z = sorted((i, j, c))
        code = _triad_code(arcs, x, y, z)
        counts[x, orbit_at[code, 0] - 1] += 1
        counts[y, orbit_at[code, 1] - 1] += 1
        counts[z, orbit_at[code, 2] - 1] += 1
    return counts


def signed_node_specific_counts(g: SignedGraph) -> np.ndarray:
    """Per-node signed pattern counts, shape (n, 13)."""
    counts = np.zeros((g.n, N_SIGNED_PATTERNS), dtype=np.int64)
    nbrs = [set(g.neighbors(u)) for u in range(g.n)]
    edges = sorted(g.edges)
    for i, j in edges:
        for c in nbrs[i] | nbrs[j]:
            if c == i or c == j:
                continue
            s_ic = g.sign(i, c)
            s_jc = g.sign(j, c)
            if c < j and s_ic != 0:
                continue
            if c < i and s_jc != 0:
                continue
            s_ij = g.sign(i, j)
            counts[i, signed_pattern_id(_pair(s_ij, s_ic), s_jc) - 1] += 1
            counts[j, signed_pattern_id(_pair(s_ij, s_jc), s_ic) - 1] += 1
            counts[c, signed_pattern_id(_pair(s_ic, s_jc), s_ij) - 1] += 1
    return counts


def _pair(a: int, b: int) -> tuple:
    if a == 0:
        return (b,)
    if b == 0:
        return (a,)
    return (a, b)


def pattern_table_json() -> dict:
    """The normative 16/30/13 tables for downstream tools."""
    return {
        "patterns": [
            {
                "id": p.pattern_id,
                "canonical_code": p.canonical_code,
                "configurations": list(p.configurations),
                "arcs": p.arcs,
                "mutual_dyads": p.mutual_dyads,
                "connected": p.connected,
                "closed": p.closed,
            }
            for p in PATTERNS
        ],
        "orbits": [
            {
                "id": o.orbit_id,
                "pattern_id": o.pattern_id,
                "rooted_code": o.rooted_code,
                "size": o.size,
            }
            for o in ORBITS
        ],
        "signed_patterns": [
            {
                "id": s.pattern_id,
                "kind": s.kind,
                "incident_signs": list(s.incident_signs),
                "far_sign": s.far_sign,
                "balanced": s.balanced,
            }
            for s in SIGNED_PATTERNS
        ],
    }
