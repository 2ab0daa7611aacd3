"""Sampling, measurement and aggregation over graphs and corpora.

Pipeline per graph: draw ``k`` ordered pairs, run balanced bidirectional BFS
on each, build the pair's cost profile, evaluate the expansion parameters,
and average.  Everything is a pure function of (graph, config): pair draws
come from :class:`PairSampler` and per-pair results are aggregated in pair
order, whatever the number of worker threads.
"""

from __future__ import annotations

import json
import logging
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .expansion import (
    MIN_EXPONENT,
    MIN_RHO_GAP,
    OBJECTIVES,
    ExpansionParams,
    InfeasibleAlpha,
    alpha_breakpoints,
    compute_params,
    optimize_alpha,
)
from .graph import Graph, GraphFormatError, load_graph
from .search import (
    BidiResult,
    LayerCostProfile,
    balanced_strategy,
    bidirectional_bfs,
    layer_cost_profile,
    optimal_meeting_cost,
)

logger = logging.getLogger(__name__)

DEFAULT_K = 250
DEFAULT_BANDS = (0.8, 0.85)
SWEEP_ALPHAS = (0.0, 0.1, 0.5, 0.9)
SWEEP_BS = (1.0, 1.1, 1.5, 2.0, 4.0)
EDGE_LIST_SUFFIXES = {".el", ".edges", ".txt", ".tsv", ".mtx", ".edgelist"}


class PairSampler:
    """Uniform ordered pairs ``s != t`` from PCG64 raw 64-bit output.

    Only ``PCG64.random_raw`` is used, whose stream is fixed by the PCG64
    definition; the reduction to a range is done here by rejection, so the
    draws do not depend on numpy's higher-level sampling routines.
    """

    def __init__(self, seed: int):
        self._bits = np.random.PCG64(seed)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("range must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = int(self._bits.random_raw())
            if x < limit:
                return x % n

    def pair(self, n: int) -> tuple[int, int]:
        s = self.below(n)
        t = self.below(n - 1)
        return s, t + (t >= s)


def sample_pairs(graph: Graph, k: int, seed: int) -> list[tuple[int, int]]:
    if graph.n < 2:
        raise ValueError("need at least two vertices to sample pairs")
    if k < 1:
        raise ValueError("k must be >= 1")
    sampler = PairSampler(seed)
    return [sampler.pair(graph.n) for _ in range(k)]


def measure_pair(graph: Graph, s: int, t: int) -> tuple[int, BidiResult]:
    result = bidirectional_bfs(graph, s, t, balanced_strategy())
    return result.cost, result


@dataclass(frozen=True)
class AnalysisConfig:
    k: int = DEFAULT_K
    seed: int = 0
    b: float = 2.0
    # "optimize" and "breakpoints" search each pair's breakpoints; a list fixes the candidates.
    alpha_policy: str | tuple[float, ...] = "optimize"
    objectives: tuple[str, ...] = OBJECTIVES
    alpha_cap: float | None = None
    c_rel_alpha: float = 0.1
    # An undefined cheap landmark at c_rel_alpha reads as an empty cheap region.
    c_rel_empty_cheap: bool = True
    empty_cheap: bool = False
    bands: tuple[float, float] = DEFAULT_BANDS
    threads: int = 1

    @classmethod
    def from_json(cls, data: dict) -> "AnalysisConfig":
        kwargs: dict = {}
        for key in ("k", "seed", "threads"):
            if key in data:
                kwargs[key] = int(data[key])
        for key in ("b", "c_rel_alpha"):
            if key in data:
                kwargs[key] = float(data[key])
        if data.get("alpha_cap") is not None:
            kwargs["alpha_cap"] = float(data["alpha_cap"])
        for key in ("empty_cheap", "c_rel_empty_cheap"):
            if key in data:
                kwargs[key] = bool(data[key])
        if "bands" in data:
            lo, hi = data["bands"]
            kwargs["bands"] = (float(lo), float(hi))
        policy = data.get("alpha_policy", "optimize")
        if policy == "breakpoints":
            kwargs["alpha_policy"] = "breakpoints"
        elif policy == "optimize":
            kwargs["alpha_policy"] = "optimize"
        elif isinstance(policy, dict) and "fixed" in policy:
            kwargs["alpha_policy"] = tuple(float(a) for a in policy["fixed"])
        elif isinstance(policy, dict) and "optimize" in policy:
            objective = policy["optimize"]
            if objective not in OBJECTIVES:
                raise ValueError(f"unknown objective {objective!r}")
            kwargs["alpha_policy"] = "optimize"
            kwargs["objectives"] = (objective,)
        else:
            raise ValueError(f"unrecognised alpha_policy {policy!r}")
        config = cls(**kwargs)
        config.validate()
        return config

    @classmethod
    def load(cls, path: str | Path) -> "AnalysisConfig":
        return cls.from_json(json.loads(Path(path).read_text()))

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.b < 1:
            raise ValueError("b must be >= 1")
        lo, hi = self.bands
        if not lo <= hi:
            raise ValueError("bands must be ordered (low, high)")


@dataclass
class PairSample:
    index: int
    s: int
    t: int
    distance: int
    measured_cost: int
    optimal_cost: int
    params_at: dict[tuple[float, float], ExpansionParams | None] = field(default_factory=dict)
    optimal_alpha_results: dict[str, tuple[float, ExpansionParams] | None] = field(default_factory=dict)

    @property
    def c_rel(self) -> float | None:
        """Relative overlap at the configured fixed alpha, if defined."""
        for params in self.params_at.values():
            return None if params is None else params.c_rel
        return None


def analyze_pair(graph: Graph, index: int, s: int, t: int, config: AnalysisConfig) -> PairSample:
    cost, result = measure_pair(graph, s, t)
    profile = layer_cost_profile(graph, s, t)
    if profile.d != result.distance:
        raise AssertionError(f"pair {index}: search distance {result.distance} != BFS distance {profile.d}")
    sample = PairSample(
        index=index,
        s=s,
        t=t,
        distance=profile.d,
        measured_cost=cost,
        optimal_cost=optimal_meeting_cost(profile)[0],
    )
    key = (config.c_rel_alpha, config.b)
    sample.params_at[key] = _params_or_none(
        profile, config.c_rel_alpha, config.b, config.empty_cheap or config.c_rel_empty_cheap
    )

    if isinstance(config.alpha_policy, tuple):
        candidates: Sequence[float] = config.alpha_policy
    else:
        candidates = alpha_breakpoints(profile)
    if config.alpha_policy != "optimize":
        for a in candidates:
            sample.params_at.setdefault((a, config.b), _params_or_none(profile, a, config.b, config.empty_cheap))
    for objective in config.objectives:
        try:
            sample.optimal_alpha_results[objective] = optimize_alpha(
                profile,
                config.b,
                objective,
                alpha_cap=config.alpha_cap,
                candidates=candidates,
                empty_cheap=config.empty_cheap,
            )
        except InfeasibleAlpha:
            sample.optimal_alpha_results[objective] = None
    return sample


def _params_or_none(profile: LayerCostProfile, alpha: float, b: float, empty_cheap: bool) -> ExpansionParams | None:
    try:
        return compute_params(profile, alpha, b, empty_cheap=empty_cheap)
    except InfeasibleAlpha:
        return None


@dataclass
class GraphReport:
    graph_id: str
    n: int
    m: int
    k: int
    c_hat: float
    estimated_exponent: float
    mean_c_rel: float
    mean_predicted_exponent_thm: float
    mean_predicted_exponent_exp: float
    mean_delta_rho: float
    band: str
    n_c_rel: int = 0
    n_covered: int = 0
    n_infeasible: int = 0
    n_exponent: int = 0
    n_delta_rho: int = 0
    lemma1_violations: int = 0
    pairs: list[PairSample] = field(default_factory=list, repr=False)

    def row(self) -> dict:
        from .report import REPORT_COLUMNS

        return {col: getattr(self, col) for col in REPORT_COLUMNS}


def exponent_band(x: float, bands: tuple[float, float] = DEFAULT_BANDS) -> str:
    lo, hi = bands
    if x > hi:
        return "linear"
    if x < lo:
        return "sublinear"
    return "intermediate"


def estimated_exponent(c_hat: float, m: int) -> float:
    if m <= 1 or c_hat <= 0:
        return math.nan
    return math.log(c_hat) / math.log(m)


def _mean(values: list[float]) -> float:
    return math.fsum(values) / len(values) if values else math.nan


def analyze_graph(graph: Graph, config: AnalysisConfig = AnalysisConfig(), graph_id: str = "graph") -> GraphReport:
    config.validate()
    pairs = sample_pairs(graph, config.k, config.seed)
    jobs = [(i, s, t) for i, (s, t) in enumerate(pairs)]
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            samples = list(pool.map(lambda job: analyze_pair(graph, *job, config), jobs))
    else:
        samples = [analyze_pair(graph, i, s, t, config) for i, s, t in jobs]
    samples.sort(key=lambda p: p.index)

    c_hat = _mean([float(p.measured_cost) for p in samples])
    c_rel, covered, infeasible = [], 0, 0
    for p in samples:
        params = p.params_at[(config.c_rel_alpha, config.b)]
        if params is None:
            infeasible += 1
        elif params.covered:
            covered += 1
        else:
            c_rel.append(params.c_rel)
    thm, exp, delta = [], [], []
    for p in samples:
        best = p.optimal_alpha_results.get(MIN_EXPONENT)
        if best is not None:
            thm.append(best[1].predicted_exponent_thm)
            exp.append(best[1].predicted_exponent_exp)
        best = p.optimal_alpha_results.get(MIN_RHO_GAP)
        if best is not None:
            delta.append(best[1].delta_rho)
    x = estimated_exponent(c_hat, graph.m)
    return GraphReport(
        graph_id=graph_id,
        n=graph.n,
        m=graph.m,
        k=config.k,
        c_hat=c_hat,
        estimated_exponent=x,
        mean_c_rel=_mean(c_rel),
        mean_predicted_exponent_thm=_mean(thm),
        mean_predicted_exponent_exp=_mean(exp),
        mean_delta_rho=_mean(delta),
        band=exponent_band(x, config.bands),
        n_c_rel=len(c_rel),
        n_covered=covered,
        n_infeasible=infeasible,
        n_exponent=len(exp),
        n_delta_rho=len(delta),
        lemma1_violations=sum(p.measured_cost > p.distance * p.optimal_cost for p in samples),
        pairs=samples,
    )


PAIR_COLUMNS = (
    "graph_id",
    "index",
    "s",
    "t",
    "d",
    "cost",
    "optimal_cost",
    "c_rel",
    "alpha_exponent",
    "predicted_exponent_exp",
    "alpha_rho",
    "rho",
    "rho_max",
    "delta_rho",
)


def pair_rows(report: GraphReport, graph: Graph | None = None) -> list[dict]:
    rows = []
    for p in report.pairs:
        best_exp = p.optimal_alpha_results.get(MIN_EXPONENT)
        best_rho = p.optimal_alpha_results.get(MIN_RHO_GAP)
        rows.append(
            {
                "graph_id": report.graph_id,
                "index": p.index,
                "s": graph.label(p.s) if graph is not None else p.s,
                "t": graph.label(p.t) if graph is not None else p.t,
                "d": p.distance,
                "cost": p.measured_cost,
                "optimal_cost": p.optimal_cost,
                "c_rel": p.c_rel,
                "alpha_exponent": best_exp[0] if best_exp else None,
                "predicted_exponent_exp": best_exp[1].predicted_exponent_exp if best_exp else None,
                "alpha_rho": best_rho[0] if best_rho else None,
                "rho": best_rho[1].rho if best_rho else None,
                "rho_max": best_rho[1].rho_max if best_rho else None,
                "delta_rho": best_rho[1].delta_rho if best_rho else None,
            }
        )
    return rows


@dataclass
class CorpusReport:
    rows: list[GraphReport]
    summary: dict
    skipped: list[str] = field(default_factory=list)


def corpus_files(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"{directory} is not a directory")
    return sorted(p for p in directory.iterdir() if p.is_file() and p.suffix in EDGE_LIST_SUFFIXES)


def summarize(rows: Iterable[GraphReport], bands: tuple[float, float] = DEFAULT_BANDS) -> dict:
    rows = list(rows)
    counts = {"sublinear": 0, "intermediate": 0, "linear": 0}
    for r in rows:
        counts[exponent_band(r.estimated_exponent, bands)] += 1
    ns = [r.n for r in rows]
    avg_deg = [2 * r.m / r.n for r in rows]
    return {
        "graphs": len(rows),
        "median_n": statistics.median(ns) if ns else None,
        "mean_n": statistics.fmean(ns) if ns else None,
        "median_avg_degree": statistics.median(avg_deg) if avg_deg else None,
        "mean_avg_degree": statistics.fmean(avg_deg) if avg_deg else None,
        "bands": counts,
    }


def run_corpus(
    directory: str | Path,
    config: AnalysisConfig = AnalysisConfig(),
    out_dir: str | Path | None = None,
    resume: bool = False,
) -> CorpusReport:
    """Analyse every edge list in ``directory``.

    With ``out_dir`` set, writes ``report.csv`` (one row per graph),
    ``pairs.csv`` and ``summary.json``.  With ``resume``, graphs that already
    have a row in an existing ``report.csv`` are not recomputed.
    """
    from .report import emit_csv, read_report_csv

    done: dict[str, dict] = {}
    done_pairs: list[dict] = []
    if out_dir is not None and resume:
        report_csv = Path(out_dir) / "report.csv"
        if report_csv.exists():
            done = {row["graph_id"]: row for row in read_report_csv(report_csv)}
            pairs_csv = Path(out_dir) / "pairs.csv"
            if pairs_csv.exists():
                done_pairs = [r for r in read_report_csv(pairs_csv) if r["graph_id"] in done]

    rows: list[GraphReport] = []
    pair_table: list[dict] = list(done_pairs)
    skipped: list[str] = []
    for path in corpus_files(directory):
        graph_id = path.stem
        if graph_id in done:
            rows.append(_report_from_row(done[graph_id]))
            continue
        try:
            graph = load_graph(path)
        except GraphFormatError as exc:
            logger.warning("skipping %s: %s", path, exc)
            skipped.append(str(path))
            continue
        logger.info("analysing %s (n=%d, m=%d)", graph_id, graph.n, graph.m)
        report = analyze_graph(graph, config, graph_id=graph_id)
        rows.append(report)
        pair_table.extend(pair_rows(report, graph))

    rows.sort(key=lambda r: r.graph_id)
    summary = summarize(rows, config.bands)
    if out_dir is not None and rows:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        emit_csv([r.row() for r in rows], out_dir / "report.csv")
        pair_table.sort(key=lambda r: (r["graph_id"], int(r["index"])))
        emit_csv(pair_table, out_dir / "pairs.csv", columns=PAIR_COLUMNS, sort_key=None)
        (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return CorpusReport(rows=rows, summary=summary, skipped=skipped)


def _report_from_row(row: dict) -> GraphReport:
    def num(key: str) -> float:
        return float(row[key]) if row[key] not in ("", None) else math.nan

    return GraphReport(
        graph_id=row["graph_id"],
        n=int(row["n"]),
        m=int(row["m"]),
        k=int(row["k"]),
        c_hat=num("c_hat"),
        estimated_exponent=num("estimated_exponent"),
        mean_c_rel=num("mean_c_rel"),
        mean_predicted_exponent_thm=num("mean_predicted_exponent_thm"),
        mean_predicted_exponent_exp=num("mean_predicted_exponent_exp"),
        mean_delta_rho=num("mean_delta_rho"),
        band=row["band"],
    )


SWEEP_COLUMNS = ("graph", "alpha", "b", "mean_c_rel", "mean_delta_rho", "mean_overlap", "n_feasible", "n_covered")


def sensitivity_sweep(
    graph: Graph,
    alphas: Sequence[float] = SWEEP_ALPHAS,
    bs: Sequence[float] = SWEEP_BS,
    k: int = DEFAULT_K,
    seed: int = 0,
    graph_id: str = "graph",
    empty_cheap: bool = True,
) -> list[dict]:
    """Mean relative overlap and delta-rho for every (alpha, b) cell.

    Undefined cheap landmarks count as empty cheap regions by default, so
    the ``alpha = 0`` column reads as "no cheap prefix or suffix at all".
    """
    if not alphas or not bs:
        raise ValueError("alpha and b lists must be nonempty")
    profiles = [layer_cost_profile(graph, s, t) for s, t in sample_pairs(graph, k, seed)]
    rows = []
    for a in alphas:
        for b in bs:
            c_rel, delta, overlap, covered = [], [], [], 0
            for profile in profiles:
                params = _params_or_none(profile, a, b, empty_cheap)
                if params is None:
                    continue
                overlap.append(params.overlap)
                if not math.isnan(params.delta_rho):
                    delta.append(params.delta_rho)
                if params.covered:
                    covered += 1
                else:
                    c_rel.append(params.c_rel)
            rows.append(
                {
                    "graph": graph_id,
                    "alpha": a,
                    "b": b,
                    "mean_c_rel": _mean(c_rel),
                    "mean_delta_rho": _mean(delta),
                    "mean_overlap": _mean([float(o) for o in overlap]),
                    "n_feasible": len(overlap),
                    "n_covered": covered,
                }
            )
    return rows
