"""Command-line entry point: ``bidiexp <subcommand> [flags]``.

Exit status is 0 on success, 1 for bad input or usage, 2 for internal
failures.  Vertex flags ``--s``/``--t`` take labels as written in the edge
list.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Sequence

from . import adversarial, expansion, harness, report, search
from .graph import Graph, GraphFormatError, load_graph

logger = logging.getLogger("bidiexp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _json_default(obj):
    if hasattr(obj, "tolist"):  # numpy arrays and scalars
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _clean(obj):
    """Replace non-finite floats by None so the output is strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _emit(payload, out: str | None) -> None:
    text = json.dumps(_clean(payload), indent=2, default=_json_default) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("BIDI_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"BIDI_THREADS must be an integer, got {env!r}") from None
    return 1


def _pair(graph: Graph, args) -> tuple[int, int]:
    return graph.index_of(args.s), graph.index_of(args.t)


def _config(args) -> harness.AnalysisConfig:
    config = harness.AnalysisConfig.load(args.config) if args.config else harness.AnalysisConfig()
    overrides = {}
    for key in ("k", "seed", "b"):
        if getattr(args, key, None) is not None:
            overrides[key] = getattr(args, key)
    overrides["threads"] = _threads(args)
    config = dataclasses.replace(config, **overrides)
    config.validate()
    return config


def cmd_load_info(args) -> None:
    graph = load_graph(args.graph)
    _emit(graph.meta.to_json(), args.out)


def cmd_query(args) -> None:
    graph = load_graph(args.graph)
    s, t = _pair(graph, args)
    result = search.bidirectional_bfs(graph, s, t, search.strategy_from_name(args.strategy))
    _emit(result.to_json(graph), args.out)


def cmd_profile(args) -> None:
    graph = load_graph(args.graph)
    s, t = _pair(graph, args)
    profile = search.layer_cost_profile(graph, s, t)
    cost, k = search.optimal_meeting_cost(profile)
    _emit(
        {
            "s": args.s,
            "t": args.t,
            "d": profile.d,
            "m": profile.m,
            "cs": profile.cs,
            "ct": profile.ct,
            "layer_sizes_s": profile.layer_sizes_s,
            "layer_sizes_t": profile.layer_sizes_t,
            "optimal_meeting_cost": cost,
            "optimal_meeting_layer": k,
            "alpha_breakpoints": expansion.alpha_breakpoints(profile),
        },
        args.out,
    )


def cmd_analyze_pair(args) -> None:
    graph = load_graph(args.graph)
    s, t = _pair(graph, args)
    profile = search.layer_cost_profile(graph, s, t)
    if args.alpha is None:
        alpha, params = expansion.optimize_alpha(profile, args.b, args.objective, empty_cheap=args.empty_cheap)
    else:
        alpha, params = args.alpha, expansion.compute_params(profile, args.alpha, args.b, empty_cheap=args.empty_cheap)
    payload = params.to_json()
    payload["classification"] = expansion.dichotomy_classify(params).value
    _emit(payload, args.out)


def cmd_analyze_graph(args) -> None:
    graph = load_graph(args.graph)
    config = _config(args)
    graph_id = Path(args.graph).stem
    rep = harness.analyze_graph(graph, config, graph_id=graph_id)
    if args.out and args.out.endswith(".csv"):
        report.emit_csv([rep.row()], args.out)
        if args.pairs:
            report.emit_csv(harness.pair_rows(rep, graph), args.pairs, columns=harness.PAIR_COLUMNS, sort_key=None)
        return
    payload = rep.row()
    payload.update(
        n_c_rel=rep.n_c_rel,
        n_covered=rep.n_covered,
        n_infeasible=rep.n_infeasible,
        lemma1_violations=rep.lemma1_violations,
    )
    if args.pairs:
        report.emit_csv(harness.pair_rows(rep, graph), args.pairs, columns=harness.PAIR_COLUMNS, sort_key=None)
    _emit(payload, args.out)


def cmd_run_corpus(args) -> None:
    config = _config(args)
    out_dir = args.out or "results"
    result = harness.run_corpus(args.directory, config, out_dir=out_dir, resume=args.resume)
    if not result.rows:
        raise UsageError(f"no readable edge lists in {args.directory}")
    summary = dict(result.summary, skipped=result.skipped, out=str(out_dir))
    _emit(summary, None)


def cmd_generate_adversarial(args) -> None:
    spec = adversarial.AdversarialSpec(
        alpha=args.alpha,
        b=args.b,
        b_plus=args.bplus,
        rho=args.rho,
        d=args.d,
        append_path=args.append_path or args.path_length is not None,
        path_length=args.path_length,
        path_factor=args.path_factor,
        budget=args.budget,
    )
    instance = adversarial.generate(spec)
    if not args.out:
        raise UsageError("generate-adversarial needs --out for the edge list")
    sidecar = instance.write(args.out)
    _emit({"edge_list": args.out, "sidecar": str(sidecar), **instance.sidecar()}, None)


def cmd_sweep(args) -> None:
    graph = load_graph(args.graph)
    rows = harness.sensitivity_sweep(
        graph,
        alphas=args.alphas,
        bs=args.bs,
        k=args.k if args.k is not None else harness.DEFAULT_K,
        seed=args.seed if args.seed is not None else 0,
        graph_id=Path(args.graph).stem,
    )
    if args.out:
        report.emit_csv(rows, args.out, columns=harness.SWEEP_COLUMNS, sort_key=None)
    else:
        _emit(rows, None)


def cmd_plot(args) -> None:
    rows = report.read_report_csv(args.csv)
    points = []
    for row in rows:
        try:
            points.append((float(row[args.x]), float(row[args.y])))
        except KeyError as exc:
            raise UsageError(f"column {exc} not in {args.csv}") from None
        except ValueError:
            continue  # empty cell
    axes = report.AxesConfig(
        x_label=args.x.replace("_", " "),
        y_label=args.y.replace("_", " "),
        title=args.title or "",
        reference_line=args.reference,
        band_markers=harness.DEFAULT_BANDS if args.bands else (),
        hlines=(0.0,) if args.zero_line else (),
    )
    if not args.out:
        raise UsageError("plot needs --out")
    report.emit_scatter_svg(points, args.out, axes)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bidiexp", description="Bidirectional BFS cost and expansion analysis.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_cmd(name: str, func, help_text: str, pair: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--graph", required=True, help="edge-list file")
        if pair:
            p.add_argument("--s", required=True, help="source vertex label")
            p.add_argument("--t", required=True, help="target vertex label")
        p.add_argument("--out", help="output file (default stdout)")
        p.set_defaults(func=func)
        return p

    graph_cmd("load-info", cmd_load_info, "print preprocessing metadata")
    p = graph_cmd("query", cmd_query, "run one bidirectional search", pair=True)
    p.add_argument("--strategy", default="balanced", help="balanced | unidirectional | meet-at:k")
    graph_cmd("profile", cmd_profile, "per-step layer costs of a pair", pair=True)

    p = graph_cmd("analyze-pair", cmd_analyze_pair, "expansion parameters of a pair", pair=True)
    p.add_argument("--alpha", type=float, help="cheap-region exponent; omitted means optimise")
    p.add_argument("--b", type=float, default=2.0)
    p.add_argument("--objective", choices=expansion.OBJECTIVES, default=expansion.MIN_EXPONENT)
    p.add_argument("--empty-cheap", action="store_true", help="read undefined cheap landmarks as empty")

    def analysis_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON analysis config")
        p.add_argument("--k", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--b", type=float)
        p.add_argument("--threads", type=int, help="worker threads (fallback: BIDI_THREADS)")

    p = graph_cmd("analyze-graph", cmd_analyze_graph, "sample pairs and aggregate one graph")
    analysis_flags(p)
    p.add_argument("--pairs", help="also write the per-pair CSV here")

    p = sub.add_parser("run-corpus", help="analyse every edge list in a directory")
    p.add_argument("directory")
    p.add_argument("--out", help="output directory (default ./results)")
    p.add_argument("--resume", action="store_true", help="skip graphs already in report.csv")
    analysis_flags(p)
    p.set_defaults(func=cmd_run_corpus)

    p = sub.add_parser("generate-adversarial", help="write a linear-cost tree-pair instance")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--bplus", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--append-path", action="store_true", help="attach a dilution path")
    p.add_argument("--path-length", type=int)
    p.add_argument("--path-factor", type=float, default=adversarial.DEFAULT_PATH_FACTOR)
    p.add_argument("--budget", type=int, default=adversarial.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_generate_adversarial)

    p = graph_cmd("sweep", cmd_sweep, "mean overlap statistics over an (alpha, b) grid")
    p.add_argument("--alphas", type=float, nargs="+", default=list(harness.SWEEP_ALPHAS))
    p.add_argument("--bs", type=float, nargs="+", default=list(harness.SWEEP_BS))
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("plot", help="scatter plot of two report columns as SVG")
    p.add_argument("--csv", required=True)
    p.add_argument("--x", default="estimated_exponent")
    p.add_argument("--y", default="mean_predicted_exponent_exp")
    p.add_argument("--out", required=True)
    p.add_argument("--title")
    p.add_argument("--reference", action="store_true", help="draw y = x")
    p.add_argument("--bands", action="store_true", help="vertical markers at the band edges")
    p.add_argument("--zero-line", action="store_true", help="horizontal line at y = 0")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"bidiexp: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (UsageError, GraphFormatError, FileNotFoundError, KeyError, IndexError, ValueError) as exc:
        print(f"bidiexp: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        logger.exception("internal failure")
        print(f"bidiexp: internal error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
