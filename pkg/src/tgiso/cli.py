"""Command-line surface: transforms, path queries, isomorphism verdicts,
refinement comparison, dataset generation, and experiment grids.

Every subcommand is a thin wrapper over the library API.  Isomorphism verdicts
are printed as JSON and mapped to exit codes 0 (isomorphic), 1 (not
isomorphic), 2 (budget exceeded or error); all other subcommands exit 0 on
success and 2 on error.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

from . import __version__
from .errors import SizeCapExceededError
from .experiments import ExperimentConfig, make_dataset_A, make_dataset_B, run_experiment_grid
from .iso import (
    IsoResult,
    Verdict,
    brute_force_trp_iso,
    consistent_event_graph_iso,
    time_aggregated_iso,
    time_concatenated_iso,
    timewise_iso,
)
from .static import StaticGraph, to_dot, to_json_obj
from .temporal import TemporalGraph, parse_temporal_graph, to_csv, to_ndjson
from .transforms import (
    SnapshotSequence,
    TimestampSetAnnotation,
    build_augmented_event_graph,
    build_compressed_augmented_event_graph,
    build_event_graph,
    build_time_aggregated,
    build_time_concatenated,
    compress_event_graph,
    to_snapshots,
)
from .wl import first_distinguishing_iteration

FORMAT_VERSION = "1"

_REPRS = ("event", "augmented", "compressed", "aggregated", "concatenated", "snapshots")
_DELTA_REPRS = ("event", "augmented", "compressed")
_ISO_MODES = ("trp-oracle", "consistent", "aggregated", "concatenated", "timewise")
_DELTA_MODES = ("trp-oracle", "consistent")


class CliError(Exception):
    pass


def _infer_format(path: str, override: str | None) -> str:
    if override:
        return override
    return "ndjson" if path.endswith((".ndjson", ".jsonl")) else "csv"


def _load_graph(path: str, fmt: str | None) -> TemporalGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    return parse_temporal_graph(text, _infer_format(path, fmt))


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = secrets.randbits(63)
        print(f"seed: {seed}")
    return seed


def _write_out(content: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(content)
    else:
        Path(out).write_text(content)


# ---------------------------------------------------------------------------
# transform


def _annotation_json(g: TemporalGraph, sg: StaticGraph, ann: TimestampSetAnnotation) -> dict:
    return {
        "graph": to_json_obj(sg),
        "annotation": [
            {"src": g.name_of(u), "dst": g.name_of(v), "offsets": list(offs)}
            for (u, v), offs in sorted(ann.offsets.items())
        ],
    }


def _snapshots_json(s: SnapshotSequence) -> dict:
    def name(v: int) -> str:
        return s.node_names[v] if s.node_names else str(v)

    return {
        "num_nodes": s.num_nodes,
        "names": [name(v) for v in range(s.num_nodes)],
        "snapshots": [
            {"t": t, "edges": sorted([name(u), name(v)] for u, v in pairs)}
            for t, pairs in s.snapshots
        ],
    }


def _static_csv(sg: StaticGraph) -> str:
    lines = ["src,dst,weight"]
    for (u, v), w in sorted(sg.weights.items()):
        lines.append(f"{sg.node_names[u]},{sg.node_names[v]},{w}")
    return "\n".join(lines) + "\n"


def cmd_transform(args) -> int:
    if args.repr in _DELTA_REPRS and args.delta is None:
        raise CliError(f"--delta is required for --repr {args.repr}")
    g = _load_graph(args.input, args.input_format)
    summary: list[str] = []
    if args.repr == "snapshots":
        snaps = to_snapshots(g)
        summary.append(f"snapshots representation: {len(snaps)} snapshots, {snaps.num_nodes} nodes")
        if args.format == "json":
            content = json.dumps(_snapshots_json(snaps), indent=2) + "\n"
        elif args.format == "csv":
            lines = ["t,src,dst"]
            for t, pairs in snaps.snapshots:
                for u, v in sorted(pairs):
                    lines.append(f"{t},{g.name_of(u)},{g.name_of(v)}")
            content = "\n".join(lines) + "\n"
        else:
            raise CliError("snapshots support --format json or csv")
    else:
        ann = None
        if args.repr == "event":
            sg = build_event_graph(g, args.delta)
        elif args.repr == "augmented":
            sg = build_augmented_event_graph(g, args.delta)
        elif args.repr == "compressed":
            sg = build_compressed_augmented_event_graph(
                g, args.delta, weighted_incidence=args.weighted_incidence
            )
        elif args.repr == "aggregated":
            sg = build_time_aggregated(g)
        else:
            sg, ann = build_time_concatenated(g)
        summary.append(f"{args.repr} representation: {sg.num_nodes} nodes, {sg.num_edges} edges")
        if args.repr == "compressed":
            _, classes = compress_event_graph(build_event_graph(g, args.delta))
            event_nodes = sum(c.representative.num_nodes for c in classes)
            word = "class" if len(classes) == 1 else "classes"
            cards = " ".join(f"×{c.cardinality}" for c in classes)
            summary.append(f"{event_nodes} event nodes, {len(classes)} {word} {cards}")
        if args.repr == "aggregated":
            summary.append(f"total edge weight: {sg.total_weight()}")
        if args.format == "dot":
            content = to_dot(sg)
        elif args.format == "json":
            obj = _annotation_json(g, sg, ann) if ann is not None else to_json_obj(sg)
            content = json.dumps(obj, indent=2) + "\n"
        else:
            if ann is not None:
                lines = ["src,dst,offsets"]
                for (u, v), offs in sorted(ann.offsets.items()):
                    lines.append(
                        f"{g.name_of(u)},{g.name_of(v)},{';'.join(map(str, offs))}"
                    )
                content = "\n".join(lines) + "\n"
            else:
                content = _static_csv(sg)
    print("\n".join(summary))
    if args.out is not None:
        Path(args.out).write_text(content)
    return 0


# ---------------------------------------------------------------------------
# paths / reach


def cmd_paths(args) -> int:
    from .temporal import enumerate_time_respecting_paths

    g = _load_graph(args.input, args.input_format)
    paths = enumerate_time_respecting_paths(
        g, args.delta, max_len=args.max_len, max_paths=args.max_paths
    )
    for p in paths:
        nodes = "->".join(g.name_of(v) for v in p.nodes)
        times = ",".join(str(e.t) for e in p.edges)
        print(f"{nodes} @ {times}")
    print(f"total: {len(paths)}")
    return 0


def cmd_reach(args) -> int:
    from .temporal import temporal_reachability

    g = _load_graph(args.input, args.input_format)
    try:
        source = g.node_index(args.source)
    except (ValueError, IndexError):
        raise CliError(f"unknown source node {args.source!r}") from None
    reached = temporal_reachability(g, args.delta, source)
    print(",".join(sorted(g.name_of(v) for v in reached)))
    return 0


# ---------------------------------------------------------------------------
# iso


def _result_json(result: IsoResult, g1: TemporalGraph, g2: TemporalGraph) -> dict:
    obj: dict = {"verdict": result.verdict.value}
    if result.node_map is not None:
        obj["node_map"] = {
            g1.name_of(u): g2.name_of(v) for u, v in sorted(result.node_map.items())
        }
    if result.edge_map is not None:
        obj["edge_map"] = [
            [
                [g1.name_of(e.src), g1.name_of(e.dst), e.t],
                [g2.name_of(f.src), g2.name_of(f.dst), f.t],
            ]
            for e, f in sorted(result.edge_map.items(), key=lambda ef: ef[0].sort_key())
        ]
    return obj


def cmd_iso(args) -> int:
    if args.mode in _DELTA_MODES and args.delta is None:
        raise CliError(f"--delta is required for --mode {args.mode}")
    g1 = _load_graph(args.file1, args.input_format)
    g2 = _load_graph(args.file2, args.input_format)
    if args.mode == "trp-oracle":
        result = brute_force_trp_iso(g1, g2, args.delta)
    elif args.mode == "consistent":
        result = consistent_event_graph_iso(g1, g2, args.delta, args.budget)
    elif args.mode == "aggregated":
        result = time_aggregated_iso(g1, g2, args.budget)
    elif args.mode == "concatenated":
        result = time_concatenated_iso(g1, g2, args.budget)
    else:
        result = timewise_iso(to_snapshots(g1), to_snapshots(g2), args.budget)
    print(json.dumps(_result_json(result, g1, g2)))
    if result.verdict == Verdict.ISOMORPHIC:
        return 0
    if result.verdict == Verdict.NOT_ISOMORPHIC:
        return 1
    return 2


# ---------------------------------------------------------------------------
# wl-compare


def cmd_wl_compare(args) -> int:
    if args.repr in _DELTA_REPRS and args.delta is None:
        raise CliError(f"--delta is required for --repr {args.repr}")
    g1 = _load_graph(args.file1, args.input_format)
    g2 = _load_graph(args.file2, args.input_format)
    builders = {
        "event": build_event_graph,
        "augmented": build_augmented_event_graph,
        "compressed": build_compressed_augmented_event_graph,
        "aggregated": lambda g, d: build_time_aggregated(g),
    }
    build = builders[args.repr]
    s1, s2 = build(g1, args.delta), build(g2, args.delta)
    hit = first_distinguishing_iteration(
        s1, s2, args.iterations,
        use_weights=not args.no_weights,
        directed=not args.undirected,
    )
    if hit is None:
        print(f"indistinguishable after {args.iterations} iterations")
    else:
        print(f"distinguished at iteration {hit}")
    return 0


# ---------------------------------------------------------------------------
# generate / experiment / export


def cmd_generate(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.experiment == "A":
        if args.alpha is None:
            raise CliError("--alpha is required for experiment A")
        ds = make_dataset_A(
            args.alpha, args.graphs_per_class, seed,
            n=args.n, k=args.k, num_walks=args.num_walks, walk_len=args.walk_len,
        )
    else:
        if args.sigma0 is None or args.sigma1 is None:
            raise CliError("--sigma0 and --sigma1 are required for experiment B")
        ds = make_dataset_B(
            args.sigma0, args.sigma1, args.graphs_per_class, seed,
            n1=args.n1, n2=args.n2, k=args.k, bridges=args.bridges,
            num_walks=args.num_walks, walk_len=args.walk_len,
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, (g, label) in enumerate(zip(ds.graphs, ds.labels)):
        filename = f"graph_{i:04d}.csv"
        (out / filename).write_text(to_csv(g))
        entries.append({"file": filename, "label": label})
    manifest = {"parameters": ds.manifest, "graphs": entries}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(entries)} graphs to {out}")
    return 0


def cmd_experiment(args) -> int:
    try:
        obj = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config: {exc}") from None
    try:
        config = ExperimentConfig.from_json_obj(obj)
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid config: {exc}") from None
    rows = run_experiment_grid(config, out_dir=args.out, jobs=args.jobs)
    failures = [r for r in rows if "error" in r]
    for r in failures:
        print(f"cell ({r['param1']},{r['param2']}) failed: {r['error']}", file=sys.stderr)
    print(f"wrote {len(rows)} cells to {args.out}")
    return 0


def cmd_export(args) -> int:
    g = _load_graph(args.input, args.input_format)
    content = to_csv(g) if args.to == "csv" else to_ndjson(g)
    _write_out(content, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tgiso")
    parser.add_argument(
        "--version", action="version",
        version=f"tgiso {__version__} (format {FORMAT_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_format(p):
        p.add_argument("--input-format", choices=("csv", "ndjson"), default=None)

    p = sub.add_parser("transform", help="build a static representation")
    p.add_argument("input")
    p.add_argument("--repr", required=True, choices=_REPRS)
    p.add_argument("--delta", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("dot", "json", "csv"), default="json")
    p.add_argument("--weighted-incidence", action="store_true")
    add_input_format(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("paths", help="enumerate time-respecting paths")
    p.add_argument("input")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--max-paths", type=int, default=None)
    add_input_format(p)
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("reach", help="temporal reachability from a source node")
    p.add_argument("input")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--source", required=True)
    add_input_format(p)
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("iso", help="isomorphism verdict for two temporal graphs")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--mode", required=True, choices=_ISO_MODES)
    p.add_argument("--delta", type=int)
    p.add_argument("--budget", type=int, default=None)
    add_input_format(p)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("wl-compare", help="first refinement iteration separating two graphs")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--repr", choices=("event", "augmented", "compressed", "aggregated"),
                   default="augmented")
    p.add_argument("--delta", type=int)
    p.add_argument("--iterations", type=int, default=3)
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--no-weights", action="store_true")
    add_input_format(p)
    p.set_defaults(func=cmd_wl_compare)

    p = sub.add_parser("generate", help="generate a labeled dataset of temporal graphs")
    p.add_argument("--experiment", required=True, choices=("A", "B"))
    p.add_argument("--out", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--sigma0", type=float)
    p.add_argument("--sigma1", type=float)
    p.add_argument("--graphs-per-class", type=int, default=125)
    p.add_argument("--num-walks", type=int, default=500)
    p.add_argument("--walk-len", type=int, default=2)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--n1", type=int, default=10)
    p.add_argument("--n2", type=int, default=10)
    p.add_argument("--bridges", type=int, default=2)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("experiment", help="run a classification experiment grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("export", help="convert a temporal graph between formats")
    p.add_argument("input")
    p.add_argument("--to", required=True, choices=("csv", "ndjson"))
    p.add_argument("--out")
    add_input_format(p)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, SizeCapExceededError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
