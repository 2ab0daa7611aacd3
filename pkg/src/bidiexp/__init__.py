"""Bidirectional BFS cost measurement and expansion-overlap analysis."""

from .expansion import (
    Classification,
    ExpansionParams,
    InfeasibleAlpha,
    compute_params,
    dichotomy_classify,
    optimize_alpha,
)
from .graph import Graph, GraphFormatError, GraphMeta, load_graph
from .harness import AnalysisConfig, GraphReport, analyze_graph, run_corpus, sample_pairs
from .search import BidiResult, LayerCostProfile, bidirectional_bfs, layer_cost_profile, optimal_meeting_cost

__all__ = [
    "AnalysisConfig",
    "BidiResult",
    "Classification",
    "ExpansionParams",
    "Graph",
    "GraphFormatError",
    "GraphMeta",
    "GraphReport",
    "InfeasibleAlpha",
    "LayerCostProfile",
    "analyze_graph",
    "bidirectional_bfs",
    "compute_params",
    "dichotomy_classify",
    "layer_cost_profile",
    "load_graph",
    "optimal_meeting_cost",
    "optimize_alpha",
    "run_corpus",
    "sample_pairs",
]
