"""Unified command-line entry point.

Every subcommand is deterministic given (inputs, flags, seed); outputs
written to files get a RunManifest JSON alongside recording the command,
flags, seed, input digests, and tool version.  Numeric output uses
full-precision shortest round-trip decimals and CSV emissions start
with a versioned schema comment.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import (
    dynamics,
    graphs,
    measures,
    motifs,
    nospam,
    randomize,
    sentiment,
    steiner,
    trgm,
    triads,
)

__version__ = "0.1.0"


@dataclass
class RunManifest:
    command: str
    flags: dict
    rng_seed: int | None
    input_digests: dict
    version: str


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


class _Emitter:
    """Collects outputs and writes them (with manifests) at the end."""

    def __init__(self, args, command: str):
        self.command = command
        self.flags = {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in ("func", "error_json") and v is not None
        }
        self.seed = getattr(args, "seed", None)
        self.inputs = {}

    def record_input(self, path: str):
        if path != "-":
            self.inputs[path] = _digest(path)

    def manifest_json(self) -> str:
        manifest = RunManifest(
            self.command, self.flags, self.seed, self.inputs, __version__
        )
        return json.dumps(asdict(manifest), sort_keys=True, indent=2) + "\n"

    def emit(self, text: str, path: str | None):
        if path is None or path == "-":
            sys.stdout.write(text)
            return
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(path + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(self.manifest_json())


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(value)


def _csv(name: str, header, rows) -> str:
    lines = [f"# schema: triadnet.{name}.v1", ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def _json_dump(obj) -> str:
    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (np.floating,)):
            return float(o)
        raise TypeError(f"not serializable: {type(o)}")

    return json.dumps(obj, sort_keys=True, indent=2, default=default) + "\n"


def _workers(args) -> int:
    env = os.environ.get("TRIADNET_WORKERS")
    if env is not None:
        return max(int(env), 1)
    return max(getattr(args, "workers", 1), 1)


def _load_directed(emitter, path: str):
    emitter.record_input(path)
    return graphs.load_edge_list(_read_input(path))


def _load_signed(emitter, path: str):
    emitter.record_input(path)
    return graphs.load_signed_edge_list(_read_input(path))


# --- subcommands ---------------------------------------------------------------


def _cmd_stats(args):
    em = _Emitter(args, "stats")
    loaded = _load_directed(em, args.input)
    g = loaded.graph
    stats = measures.graph_stats(g)
    degs = measures.degrees(g)
    betw = measures.betweenness(g)
    pr = measures.pagerank(g, d=args.damping)
    local_c = measures.clustering(g, "local")
    payload = {
        "nodes": g.n,
        "arcs": g.arc_count,
        "dropped_self_arcs": loaded.self_arcs,
        "collapsed_duplicate_arcs": loaded.duplicate_arcs,
        "density": stats.density,
        "weak_component_sizes": sorted((len(c) for c in stats.weak_components), reverse=True),
        "strong_component_sizes": sorted((len(c) for c in stats.strong_components), reverse=True),
        "avg_path_length": stats.avg_path_length,
        "diameter": stats.diameter,
        "unreachable_pairs": stats.unreachable_pairs,
        "clustering_average": measures.clustering(g, "average"),
        "clustering_global": measures.clustering(g, "global"),
    }
    em.emit(_json_dump(payload), args.json_out)
    rows = [
        (i, degs[i][0], degs[i][1], local_c[i], betw[i], pr[i])
        for i in range(g.n)
    ]
    if args.csv_out:
        em.emit(
            _csv(
                "node-stats",
                ("node_id", "in_degree", "out_degree", "clustering", "betweenness", "pagerank"),
                rows,
            ),
            args.csv_out,
        )
    return 0


def _cmd_census(args):
    em = _Emitter(args, "census")
    g = _load_directed(em, args.input).graph
    counts = triads.census(g, connected_only=not args.full)
    rows = [(pid, int(counts[pid - 1])) for pid in range(1, 17)]
    em.emit(_csv("census", ("pattern_id", "count"), rows), args.output)
    return 0


def _cmd_motifs(args):
    em = _Emitter(args, "motifs")
    g = _load_directed(em, args.input).graph
    profile = motifs.z_profile(
        g, args.instances, args.steps_per_edge, args.variance_mode, args.seed
    )
    try:
        sp = motifs.significance_profile(profile).sp
    except motifs.UndefinedProfileError:
        sp = np.zeros(13)
    payload = {
        "pattern_ids": list(triads.CONNECTED_IDS),
        "counts": profile.counts,
        "mean": profile.mean,
        "sigma": profile.sigma,
        "z": np.where(np.isinf(profile.z), np.sign(profile.z) * 1e308, profile.z),
        "sp": sp,
        "flags": profile.flags,
        "instances": profile.instances,
    }
    em.emit(_json_dump(payload), args.json_out)
    if args.csv_out:
        rows = [
            (
                pid,
                int(profile.counts[i]),
                profile.mean[i],
                profile.sigma[i],
                profile.z[i],
                sp[i],
                int(profile.flags[i]),
            )
            for i, pid in enumerate(triads.CONNECTED_IDS)
        ]
        em.emit(
            _csv(
                "motifs",
                ("pattern_id", "count", "mean", "sigma", "z", "sp", "flag"),
                rows,
            ),
            args.csv_out,
        )
    return 0


def _cmd_nospam(args):
    em = _Emitter(args, "nospam")
    workers = _workers(args)
    if args.signed:
        g = _load_signed(em, args.input).graph
        prof = nospam.nospam_signed(
            g, args.instances, args.steps_per_edge, args.seed, workers
        )
        width = triads.N_SIGNED_PATTERNS
    else:
        g = _load_directed(em, args.input).graph
        prof = nospam.nospam_directed(
            g, args.instances, args.steps_per_edge, args.seed, workers
        )
        width = triads.N_ORBITS
    header = ["node"] + [f"z{k + 1}" for k in range(width)] + [
        f"flag{k + 1}" for k in range(width)
    ]
    rows = [
        tuple([i] + list(prof.z[i]) + [int(f) for f in prof.flags[i]])
        for i in range(prof.n_nodes)
    ]
    em.emit(_csv("nospam", header, rows), args.output)

    mapped = None
    if (args.mapped or args.homogeneity or args.cluster) and not args.signed:
        mapped = nospam.map_profiles(prof)
    if args.mapped and mapped is not None:
        mheader = ["node"] + [f"m{pid}" for pid in triads.CONNECTED_IDS]
        mrows = [tuple([i] + list(mapped.m[i])) for i in range(prof.n_nodes)]
        em.emit(_csv("nospam-mapped", mheader, mrows), args.mapped)
    extras = {}
    if args.homogeneity and mapped is not None:
        whole = motifs.z_profile(g, args.instances, args.steps_per_edge, rng_seed=args.seed)
        h = nospam.homogeneity(mapped, whole)
        extras["homogeneity_mean"] = h.mean
        extras["homogeneity_std"] = h.std
        extras["homogeneity_excluded_nodes"] = h.excluded_nodes
    if args.homophily:
        extras["homophily"] = nospam.homophily(prof, g)
    if args.cluster:
        source = mapped.m if mapped is not None else prof.z
        vectors = np.where(np.isinf(source), 0.0, source)
        _, labels = nospam.complete_link_cluster(vectors, k=args.cluster)
        extras["cluster_labels"] = labels
    if extras:
        em.emit(_json_dump(extras), args.extras_out)
    return 0


def _cmd_sts(args):
    em = _Emitter(args, "sts")
    if args.validate is not None:
        em.record_input(args.validate)
        system = steiner.parse_triples(_read_input(args.validate))
        report = steiner.validate(system)
        payload = {
            "ok": report.ok,
            "order": system.order,
            "triples": report.triple_count_actual,
            "triples_expected": report.triple_count_expected,
            "uncovered_pairs": report.uncovered_pairs[:100],
            "multiply_covered_pairs": report.multiply_covered_pairs[:100],
            "bad_triples": report.bad_triples[:100],
        }
        em.emit(_json_dump(payload), args.output)
        return 0 if report.ok else 1
    system = steiner.sts_construct(args.order, method=args.method)
    em.emit(steiner.format_triples(system), args.output)
    return 0


def _cmd_trgm(args):
    em = _Emitter(args, "trgm")
    if args.counts is not None:
        em.record_input(args.counts)
        spec = np.array(
            [int(tok) for tok in _read_input(args.counts).split()], dtype=np.int64
        )
    elif args.dist is not None:
        em.record_input(args.dist)
        spec = np.array([float(tok) for tok in _read_input(args.dist).split()])
    elif args.er_p is not None:
        spec = trgm.er_distribution(args.er_p)
    else:
        spec = trgm.uniform_simplex_counts(args.order, args.seed)
    if args.degree_dist:
        dist = (
            spec.astype(np.float64) / spec.sum()
            if np.issubdtype(spec.dtype, np.integer)
            else spec
        )
        probs = trgm.degree_distribution(dist, args.order, args.direction)
        rows = [(k, probs[k]) for k in range(args.order)]
        em.emit(_csv("degree-dist", ("degree", "probability"), rows), args.degree_dist)
    g = trgm.sample_trgm(args.order, spec, args.seed)
    em.emit(graphs.format_edge_list(g), args.output)
    return 0


def _cmd_randomize(args):
    em = _Emitter(args, "randomize")
    if args.signed:
        g = _load_signed(em, args.input).graph
        steps = math.ceil(args.steps_per_edge * g.edge_count)
        out = randomize.randomize_signed(g, steps, args.seed)
        em.emit(graphs.format_signed_edge_list(out), args.output)
    else:
        g = _load_directed(em, args.input).graph
        steps = math.ceil(args.steps_per_edge * g.arc_count)
        out = randomize.randomize_directed(g, steps, args.seed)
        em.emit(graphs.format_edge_list(out), args.output)
    return 0


def _cmd_dynamics(args):
    em = _Emitter(args, "dynamics")
    g = _load_directed(em, args.input).graph
    params = dynamics.OscillatorParams(
        a=args.damping_rate,
        omega=args.omega,
        b=args.b,
        dt=args.dt,
        t0=args.transient,
        T=args.steps,
        rng_seed=args.seed,
    )
    sweep = dynamics.theta_sweep(
        g,
        params,
        grid=dynamics.default_theta_grid(args.theta_grid),
        repeats=args.repeats,
        rng_seed=args.seed,
    )
    rows = [
        (
            sweep.thetas[i],
            sweep.output[i],
            sweep.output_se[i],
            sweep.correlation[i],
            sweep.correlation_se[i],
        )
        for i in range(sweep.thetas.size)
    ]
    em.emit(
        _csv("dynamics", ("theta", "output", "output_se", "corr", "corr_se"), rows),
        args.output,
    )
    return 0


def _cmd_removal(args):
    em = _Emitter(args, "removal")
    g = _load_directed(em, args.input).graph
    ranking = args.rank
    if args.scores is not None:
        em.record_input(args.scores)
        ranking = np.array([float(t) for t in _read_input(args.scores).split()])
    series = dynamics.removal_experiment(
        g,
        ranking,
        args.k,
        recompute=args.recompute,
        rng_seed=args.seed,
        normalization=args.normalization,
    )
    rows = [
        (i, step.removed_node, step.edges_removed, step.delta)
        for i, step in enumerate(series)
    ]
    em.emit(
        _csv("removal", ("step", "node", "edges_removed_cum", "delta"), rows),
        args.output,
    )
    return 0


def _cmd_cluster(args):
    em = _Emitter(args, "cluster")
    em.record_input(args.input)
    rows = [
        [float(tok) for tok in line.split(",")]
        for line in _read_input(args.input).splitlines()
        if line.strip() and not line.startswith("#")
    ]
    dendro, labels = nospam.complete_link_cluster(
        np.array(rows), k=args.k, threshold=args.threshold
    )
    payload = {
        "labels": labels,
        "merges": [
            {"a": a, "b": b, "distance": dist} for a, b, dist in dendro.merges
        ],
    }
    em.emit(_json_dump(payload), args.output)
    return 0


def _cmd_patterns(args):
    em = _Emitter(args, "patterns")
    em.emit(_json_dump(triads.pattern_table_json()), args.output)
    return 0


def _cmd_aggregate_signed(args):
    em = _Emitter(args, "aggregate-signed")
    em.record_input(args.input)
    records = sentiment.parse_sentiment_table(_read_input(args.input))
    known = None
    if args.countries:
        em.record_input(args.countries)
        known = set(_read_input(args.countries).split())
    g, labels = sentiment.aggregate_signed_month(records, args.month, known)
    em.emit(graphs.format_signed_edge_list(g, labels), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triadnet",
        description="Triadic network analysis: censuses, motif statistics, "
        "Steiner-triple random graphs, node-specific mining, and dynamics.",
    )
    parser.add_argument("--error-json", action="store_true", help="emit errors as JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def seeded(p):
        p.add_argument("--seed", type=int, default=0, help="RNG seed")

    p = sub.add_parser("stats", help="classical measures of a directed graph")
    p.add_argument("input")
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--json", dest="json_out", default=None)
    p.add_argument("--csv", dest="csv_out", default=None)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("census", help="triad pattern counts")
    p.add_argument("input")
    p.add_argument("--full", action="store_true", help="include disconnected patterns")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("motifs", help="whole-graph triad Z profile")
    p.add_argument("input")
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--steps-per-edge", type=float, default=100.0)
    p.add_argument("--variance-mode", choices=("population", "sample"), default="population")
    seeded(p)
    p.add_argument("--json", dest="json_out", default=None)
    p.add_argument("--csv", dest="csv_out", default=None)
    p.set_defaults(func=_cmd_motifs)

    p = sub.add_parser("nospam", help="node-specific triad pattern mining")
    p.add_argument("input")
    p.add_argument("--signed", action="store_true")
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--steps-per-edge", type=float, default=100.0)
    seeded(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--mapped", default=None, help="write mapped 13-wide profiles here")
    p.add_argument("--homogeneity", action="store_true")
    p.add_argument("--homophily", action="store_true")
    p.add_argument("--cluster", type=int, default=None, metavar="K")
    p.add_argument("--extras-out", default=None)
    p.set_defaults(func=_cmd_nospam)

    p = sub.add_parser("sts", help="construct or validate Steiner triple systems")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--method", choices=("auto", "direct"), default="auto")
    p.add_argument("--validate", default=None, metavar="FILE")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_sts)

    p = sub.add_parser("trgm", help="sample triadic random graphs")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--counts", default=None, metavar="FILE")
    p.add_argument("--dist", default=None, metavar="FILE")
    p.add_argument("--er-p", type=float, default=None)
    seeded(p)
    p.add_argument("--degree-dist", default=None, metavar="FILE")
    p.add_argument("--direction", choices=("in", "out"), default="in")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_trgm)

    p = sub.add_parser("randomize", help="degree-preserving randomization")
    p.add_argument("input")
    p.add_argument("--signed", action="store_true")
    p.add_argument("--steps-per-edge", type=float, default=100.0)
    seeded(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_randomize)

    p = sub.add_parser("dynamics", help="coupling-phase sweep of the oscillator model")
    p.add_argument("input")
    p.add_argument("--theta-grid", type=int, default=64)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--damping-rate", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=2.0 * math.pi)
    p.add_argument("--b", type=float, default=0.8)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--transient", type=int, default=2000)
    p.add_argument("--steps", type=int, default=500_000)
    seeded(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_dynamics)

    p = sub.add_parser("removal", help="targeted node removal vs spectral gap")
    p.add_argument("input")
    p.add_argument(
        "--rank",
        default="degree",
        help="degree|pagerank|betweenness|random (or use --scores)",
    )
    p.add_argument("--scores", default=None, metavar="FILE", help="per-node scores")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--recompute", choices=("once", "each-step"), default="once")
    p.add_argument("--normalization", choices=("row", "column"), default="row")
    seeded(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_removal)

    p = sub.add_parser("cluster", help="complete-link clustering of vectors")
    p.add_argument("input", help="CSV of profile vectors, one per row")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("patterns", help="dump the 16/30/13 pattern tables")
    p.add_argument("--emit", choices=("table",), default="table")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_patterns)

    p = sub.add_parser("aggregate-signed", help="monthly signed sentiment graph")
    p.add_argument("input", help="TSV: day src dst vcoop vconf mcoop mconf")
    p.add_argument("--month", type=int, required=True)
    p.add_argument("--countries", default=None, help="whitelist of country tokens")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_aggregate_signed)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single reporting point
        if args.error_json:
            sys.stderr.write(
                json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
            )
        else:
            sys.stderr.write(f"triadnet: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
