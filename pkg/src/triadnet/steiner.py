"""Steiner triple system construction and validation.

An STS(N) partitions the N(N-1)/2 node pairs into N(N-1)/6 triples so
that every pair lies in exactly one triple; it exists iff N mod 6 is 1
or 3.  Systems are built by a product construction (order N1*N2), an
extension construction (order N3 + N1*(N2 - N3), needing an order-N3
subsystem inside the order-N2 system), and a residue-mod-36 recursion
over the two.  The recursion's rule for orders 13 mod 36 demands an
order-7 subsystem inside an STS(12t+9), which no path here can supply
(and which violates the subsystem bound at t=0), so those orders fall
back to a direct cyclic construction; direct constructions also serve
as an independent route for cross-checking.

Subsystems are tracked first-class: each constructor records the
subsystems it provably creates, because the extension rules consume
them.  Node labels run 1..N.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class AdmissibilityError(ValueError):
    pass


class UnsupportedBaseError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


def is_admissible(n: int) -> bool:
    return n >= 1 and n % 6 in (1, 3)


def next_admissible(n: int) -> int:
    m = max(n, 1)
    while not is_admissible(m):
        m += 1
    return m


@dataclass(frozen=True)
class SteinerTripleSystem:
    order: int
    triples: tuple  # sorted tuples (a, b, c), labels 1..order
    tracked_subsystems: tuple = ()  # (order, frozenset of nodes) records

    def triple_count(self) -> int:
        return len(self.triples)

    def subsystems_of_order(self, k: int) -> tuple:
        return tuple(s for o, s in self.tracked_subsystems if o == k)

    def restrict(self, nodes) -> "SteinerTripleSystem":
        """Relabel the induced triples on ``nodes`` to 1..|nodes|."""
        nodes = sorted(nodes)
        relabel = {v: i + 1 for i, v in enumerate(nodes)}
        keep = set(nodes)
        triples = tuple(
            sorted(
                tuple(sorted(relabel[x] for x in t))
                for t in self.triples
                if keep.issuperset(t)
            )
        )
        return SteinerTripleSystem(len(nodes), triples)


@dataclass
class ValidationReport:
    ok: bool
    uncovered_pairs: list = field(default_factory=list)
    multiply_covered_pairs: list = field(default_factory=list)
    bad_triples: list = field(default_factory=list)
    triple_count_expected: int = 0
    triple_count_actual: int = 0


def validate(sts: SteinerTripleSystem) -> ValidationReport:
    """Check the defining property: every pair in exactly one triple."""
    n = sts.order
    bad = []
    tally: dict = {}
    for t in sts.triples:
        if len(set(t)) != 3 or any(not 1 <= x <= n for x in t):
            bad.append(t)
            continue
        a, b, c = sorted(t)
        for pair in ((a, b), (a, c), (b, c)):
            tally[pair] = tally.get(pair, 0) + 1
    uncovered = []
    multiple = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            k = tally.get((i, j), 0)
            if k == 0:
                uncovered.append((i, j))
            elif k > 1:
                multiple.append((i, j))
    expected = n * (n - 1) // 6
    ok = not (uncovered or multiple or bad) and len(sts.triples) == expected
    return ValidationReport(ok, uncovered, multiple, bad, expected, len(sts.triples))


_BASE_7 = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))
_BASE_9 = (
    (1, 2, 3), (4, 5, 6), (7, 8, 9),
    (1, 4, 7), (2, 5, 8), (3, 6, 9),
    (1, 5, 9), (2, 6, 7), (3, 4, 8),
    (1, 6, 8), (2, 4, 9), (3, 5, 7),
)


def sts_base(n: int) -> SteinerTripleSystem:
    """Explicit small systems: orders 3, 7, 9, 13, and 15."""
    if n == 3:
        return SteinerTripleSystem(3, ((1, 2, 3),))
    if n == 7:
        return SteinerTripleSystem(
            7, tuple(sorted(_BASE_7)), ((3, frozenset({1, 2, 3})),)
        )
    if n == 9:
        tracked = tuple(
            (3, frozenset(s))
            for s in ({1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {1, 4, 7}, {2, 5, 8}, {3, 6, 9})
        )
        return SteinerTripleSystem(9, tuple(sorted(_BASE_9)), tracked)
    if n == 13:
        return _skolem(13)
    if n == 15:
        return sts_extend(sts_base(3), sts_base(7), 3)
    raise UnsupportedBaseError(f"no base system of order {n}")


def sts_product(a: SteinerTripleSystem, b: SteinerTripleSystem) -> SteinerTripleSystem:
    """STS(N1*N2) on pairs (i, j), with factor-isomorphic subsystems.

    Element (i, j) gets label (i-1)*N2 + j.  Triples: the triples of A
    at each fixed fine label, the triples of B inside each coarse copy,
    and, for every A-triple and B-triple, all six assignments of the
    B-triple's labels to the A-triple's slots.
    """
    n1, n2 = a.order, b.order

    def lab(i, j):
        return (i - 1) * n2 + j

    triples = []
    for (i, j, k) in a.triples:
        for r in range(1, n2 + 1):
            triples.append(tuple(sorted((lab(i, r), lab(j, r), lab(k, r)))))
    for i in range(1, n1 + 1):
        for (r, s, u) in b.triples:
            triples.append(tuple(sorted((lab(i, r), lab(i, s), lab(i, u)))))
    for (i, j, k) in a.triples:
        for (r, s, u) in b.triples:
            for x, y, z in (
                (r, s, u), (s, u, r), (u, r, s),
                (r, u, s), (s, r, u), (u, s, r),
            ):
                triples.append(tuple(sorted((lab(i, x), lab(j, y), lab(k, z)))))
    tracked = []
    if n1 >= 3:
        for r in range(1, n2 + 1):
            tracked.append((n1, frozenset(lab(i, r) for i in range(1, n1 + 1))))
    if n2 >= 3:
        for i in range(1, n1 + 1):
            tracked.append((n2, frozenset(lab(i, r) for r in range(1, n2 + 1))))
    return SteinerTripleSystem(n1 * n2, tuple(sorted(triples)), tuple(tracked))


def _with_subsystem_first(sts: SteinerTripleSystem, n3: int) -> SteinerTripleSystem:
    """Relabel so an order-``n3`` subsystem occupies labels 1..n3."""
    if n3 == 1:
        return sts
    subsystem = None
    for order, nodes in sts.tracked_subsystems:
        if order == n3:
            subsystem = sorted(nodes)
            break
    if subsystem is None and n3 == 3 and sts.triples:
        subsystem = list(sts.triples[0])  # any triple is an order-3 subsystem
    if subsystem is None:
        raise ConstructionError(
            f"order-{sts.order} system carries no tracked subsystem of order {n3}"
        )
    rest = [v for v in range(1, sts.order + 1) if v not in set(subsystem)]
    relabel = {v: i + 1 for i, v in enumerate(subsystem + rest)}
    triples = tuple(
        sorted(tuple(sorted(relabel[x] for x in t)) for t in sts.triples)
    )
    tracked = tuple(
        (o, frozenset(relabel[v] for v in nodes))
        for o, nodes in sts.tracked_subsystems
    )
    if n3 == 3 and (3, frozenset({1, 2, 3})) not in tracked:
        tracked = tracked + ((3, frozenset({1, 2, 3})),)
    return SteinerTripleSystem(sts.order, triples, tracked)


def sts_extend(
    n1_sys: SteinerTripleSystem,
    n2_sys: SteinerTripleSystem,
    n3: int,
) -> SteinerTripleSystem:
    """STS(N3 + N1*(N2 - N3)) from the three-rule row construction.

    ``n2_sys`` must contain an order-``n3`` subsystem (or n3 = 1).  The
    result tracks the order-N3 head row, N1 copies of the order-N2
    system, and an order-N1 column system.
    """
    n1, n2 = n1_sys.order, n2_sys.order
    if not (n3 == 1 or is_admissible(n3)):
        raise ConstructionError(f"inadmissible subsystem order {n3}")
    base2 = _with_subsystem_first(n2_sys, n3)
    s = n2 - n3
    n = n3 + n1 * s

    def b(i, x):  # row i in 1..n1, position x in 1..s
        return n3 + (i - 1) * s + x

    triples = []
    head = [t for t in base2.triples if all(v <= n3 for v in t)]
    body = [t for t in base2.triples if any(v > n3 for v in t)]
    triples.extend(head)
    for i in range(1, n1 + 1):
        for t in body:
            triples.append(
                tuple(sorted(v if v <= n3 else b(i, v - n3) for v in t))
            )
    for (j, k, r) in n1_sys.triples:
        for x in range(1, s + 1):
            for y in range(1, s + 1):
                z = (-(x + y)) % s or s
                triples.append(tuple(sorted((b(j, x), b(k, y), b(r, z)))))
    tracked = []
    if n3 >= 3:
        tracked.append((n3, frozenset(range(1, n3 + 1))))
    for i in range(1, n1 + 1):
        nodes = set(range(1, n3 + 1)) | {b(i, x) for x in range(1, s + 1)}
        tracked.append((n2, frozenset(nodes)))
    if n1 >= 3:
        tracked.append((n1, frozenset(b(i, s) for i in range(1, n1 + 1))))
    return SteinerTripleSystem(n, tuple(sorted(triples)), tuple(tracked))


def _idempotent_quasigroup(m: int):
    """x*y = (x+y)(t+1) mod m on Z_m, m = 2t+1 odd; x*x = x."""
    half = (m + 1) // 2
    return lambda x, y: (x + y) * half % m


def _bose(n: int) -> SteinerTripleSystem:
    """Direct construction for n = 6t+3 on Z_{2t+1} x {0,1,2}."""
    t = (n - 3) // 6
    m = 2 * t + 1
    q = _idempotent_quasigroup(m)

    def lab(i, j):
        return 1 + j * m + i

    triples = [tuple(sorted((lab(i, 0), lab(i, 1), lab(i, 2)))) for i in range(m)]
    for j in range(3):
        for x in range(m):
            for y in range(x + 1, m):
                triples.append(
                    tuple(sorted((lab(x, j), lab(y, j), lab(q(x, y), (j + 1) % 3))))
                )
    return SteinerTripleSystem(n, tuple(sorted(triples)))


def _skolem(n: int) -> SteinerTripleSystem:
    """Direct construction for n = 6t+1 on Z_{2t} x {0,1,2} plus a point.

    Uses a half-idempotent commutative quasigroup on Z_{2t}: renaming
    the addition table so that x*x = x for x < t and x*x = x - t above.
    """
    t = (n - 1) // 6
    if t == 0:
        return SteinerTripleSystem(1, ())
    m = 2 * t
    pi = [0] * m
    for i in range(t):
        pi[2 * i % m] = i
        pi[(2 * i + 1) % m] = t + i

    def q(x, y):
        return pi[(x + y) % m]

    inf = n

    def lab(i, j):
        return 1 + j * m + i

    triples = [tuple(sorted((lab(i, 0), lab(i, 1), lab(i, 2)))) for i in range(t)]
    for j in range(3):
        for i in range(t):
            triples.append(tuple(sorted((inf, lab(t + i, j), lab(i, (j + 1) % 3)))))
        for x in range(m):
            for y in range(x + 1, m):
                triples.append(
                    tuple(sorted((lab(x, j), lab(y, j), lab(q(x, y), (j + 1) % 3))))
                )
    return SteinerTripleSystem(n, tuple(sorted(triples)))


def sts_direct(n: int) -> SteinerTripleSystem:
    """Cyclic constructions: Bose (n = 3 mod 6) or Skolem (n = 1 mod 6)."""
    if not is_admissible(n):
        raise AdmissibilityError(
            f"no Steiner triple system of order {n}; nearest admissible order "
            f"is {next_admissible(n)}"
        )
    return _bose(n) if n % 6 == 3 else _skolem(n)


# Table rows: residue of n mod 36 -> (rule, N1-of-N', N2, N3); rule (E)
# at residue 13 is unsatisfiable as printed and handled by fallback.
_RECURSION = {
    1: ("B", "n2"),
    3: ("A", "n1"),
    7: ("F", "n1"),
    9: ("D", "n1"),
    15: ("A", "n1"),
    19: ("F", "n1"),
    21: ("D", "n1"),
    25: ("B", "n2"),
    27: ("A", "n1"),
    31: ("A", "n1"),
    33: ("C", "n2"),
}

_RULES = {
    # rule: (n2 fixed order or None meaning N', n3)
    "A": (3, 1),
    "B": (None, 1),
    "C": (None, 3),
    "D": (9, 3),
    "F": (7, 1),
}


def _n_prime(n: int, rule: str) -> int:
    if rule == "A":
        return (n - 1) // 2
    if rule == "B":
        return (n + 2) // 3
    if rule == "C":
        return (n + 6) // 3
    if rule == "D":
        return (n - 3) // 6
    if rule == "F":
        return (n - 1) // 6
    raise ConstructionError(f"unknown rule {rule}")


def _construct(n: int, method: str) -> SteinerTripleSystem:
    if method == "direct":
        return sts_direct(n)
    if n == 1:
        return SteinerTripleSystem(1, ())
    if n in (3, 7, 9, 13, 15):
        return sts_base(n)
    residue = n % 36
    if residue == 13:
        return sts_direct(n)  # rule (E) precondition cannot be met
    rule, role = _RECURSION[residue]
    n_prime = _n_prime(n, rule)
    fixed_n2, n3 = _RULES[rule]
    prime_sys = _construct(n_prime, method)
    if role == "n1":
        return sts_extend(prime_sys, sts_base(fixed_n2), n3)
    return sts_extend(sts_base(3), prime_sys, n3)


def sts_construct(n: int, method: str = "auto") -> SteinerTripleSystem:
    """Build a validator-certified STS(n).

    ``method`` 'auto' follows the residue table where its subsystem
    preconditions hold and falls back to the direct route; 'direct'
    always uses the cyclic constructions.
    """
    if method not in ("auto", "direct"):
        raise ValueError("method must be 'auto' or 'direct'")
    if not is_admissible(n):
        raise AdmissibilityError(
            f"order {n} admits no Steiner triple system (need n mod 6 in {{1, 3}}); "
            f"nearest admissible order is {next_admissible(n)}"
        )
    system = _construct(n, method)
    report = validate(system)
    if not report.ok:
        raise ConstructionError(
            f"internal construction failure for order {n}: "
            f"{len(report.uncovered_pairs)} uncovered, "
            f"{len(report.multiply_covered_pairs)} multiply covered"
        )
    return system


def parse_triples(text: str) -> SteinerTripleSystem:
    """Read one 'a b c' triple per line; order is the max label seen."""
    triples = []
    top = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 3 labels, got {len(parts)}")
        t = tuple(sorted(int(p) for p in parts))
        top = max(top, t[2])
        triples.append(t)
    return SteinerTripleSystem(top, tuple(sorted(triples)))


def format_triples(sts: SteinerTripleSystem) -> str:
    return "".join(f"{a} {b} {c}\n" for a, b, c in sts.triples)
