"""Tree-pair instances on which bidirectional BFS needs linear work.

Two mirrored trees of depth ``d`` hang off ``s`` and ``t``.  Layer sizes grow
by ``b`` for the first ``d1`` layers and by ``b_plus`` for the remaining
``d2``; the two deepest layers are joined by the identity matching, so every
``s``-``t`` path crosses the two heaviest layers.  An optional path hanging
off a deepest leaf of ``T_s`` adds edges without touching any layer cost
between ``s`` and ``t``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .expansion import InfeasibleAlpha, as_fraction, compute_params, rho_max
from .graph import Graph, GraphMeta, write_edge_list
from .search import LayerCostProfile, layer_cost_profile

DEFAULT_BUDGET = 10**7
DEFAULT_PATH_FACTOR = 4


class BudgetExceeded(ValueError):
    pass


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class AdversarialSpec:
    alpha: float
    b: float
    b_plus: float
    rho: float
    d: int
    append_path: bool = False
    # Path length in edges; None means path_factor times the tree edges.
    path_length: int | None = None
    path_factor: float = DEFAULT_PATH_FACTOR
    budget: int = DEFAULT_BUDGET

    @property
    def d1(self) -> int:
        return _round_half_up((1.0 - self.rho) * self.d)

    @property
    def d2(self) -> int:
        return self.d - self.d1

    @property
    def rho_max(self) -> float:
        return rho_max(self.alpha, self.b, self.b_plus)

    def validate(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if not 1.0 < self.b < self.b_plus:
            raise ValueError("need 1 < b < b_plus")
        if self.rho < self.rho_max * (1.0 - 1e-12):
            raise ValueError(
                f"rho={self.rho} below rho_max={self.rho_max:.6f}; the construction needs rho >= rho_max"
            )
        if self.d1 < 1 or self.d2 < 1:
            raise ValueError(f"depth split d1={self.d1}, d2={self.d2} must both be >= 1")


@dataclass
class AdversarialInstance:
    spec: AdversarialSpec
    graph: Graph
    s: int
    t: int
    realized_profile: LayerCostProfile
    realized_d1: int
    realized_d2: int
    layer_sizes: list[int]
    branching_sequence: list[float] = field(default_factory=list)

    def realized_rho(self) -> float | None:
        try:
            return compute_params(self.realized_profile, self.spec.alpha, self.spec.b).rho
        except InfeasibleAlpha:
            return None

    def sidecar(self) -> dict:
        return {
            "s": self.graph.label(self.s),
            "t": self.graph.label(self.t),
            "d1": self.realized_d1,
            "d2": self.realized_d2,
            "realized_rho": self.realized_rho(),
            "branching_sequence": self.branching_sequence,
            "layer_sizes": self.layer_sizes,
            "alpha": self.spec.alpha,
            "b": self.spec.b,
            "b_plus": self.spec.b_plus,
            "target_rho": self.spec.rho,
            "n": self.graph.n,
            "m": self.graph.m,
        }

    def write(self, edge_list_path: str | Path) -> Path:
        """Write the edge list and a ``.json`` sidecar next to it."""
        edge_list_path = Path(edge_list_path)
        write_edge_list(self.graph, edge_list_path)
        sidecar = edge_list_path.with_suffix(".json")
        sidecar.write_text(json.dumps(self.sidecar(), indent=2) + "\n")
        return sidecar


def layer_size_targets(spec: AdversarialSpec) -> list[int]:
    """Integer layer sizes tracking ``b**min(i,d1) * b_plus**max(0,i-d1)``.

    Rounding error is carried forward; each layer is at least ``ceil(b * prev)``
    so that every layer transition keeps growing by ``b``.
    """
    b = as_fraction(spec.b)
    sizes = [1]
    carry = 0.0
    for i in range(1, spec.d + 1):
        target = float(spec.b) ** min(i, spec.d1) * float(spec.b_plus) ** max(0, i - spec.d1)
        want = target + carry
        lower = math.ceil(b * sizes[-1])
        size = max(lower, _round_half_up(want))
        carry = want - size
        sizes.append(size)
    return sizes


def _tree_edges(sizes: list[int], offset: int) -> tuple[np.ndarray, np.ndarray]:
    """Parent/child arrays of a layered tree whose vertices are numbered layer by layer."""
    parents, children = [], []
    start = offset
    for prev, size in zip(sizes[:-1], sizes[1:]):
        q, r = divmod(size, prev)
        counts = np.full(prev, q, dtype=np.int64)
        counts[:r] += 1
        parents.append(np.repeat(np.arange(start, start + prev, dtype=np.int64), counts))
        children.append(np.arange(start + prev, start + prev + size, dtype=np.int64))
        start += prev
    return np.concatenate(parents), np.concatenate(children)


def _append_path(base: Graph, attach: int, length: int) -> Graph:
    """Hang a path of ``length`` new vertices off ``attach`` without re-sorting.

    New vertex ids exceed every existing id, so appending them keeps all
    adjacency lists sorted.
    """
    n0, n = base.n, base.n + length
    deg = np.empty(n, dtype=np.int64)
    deg[:n0] = base.degrees
    deg[attach] += 1
    deg[n0:] = 2
    deg[n - 1] = 1
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=offsets[1:])
    del deg
    dtype = np.int32 if n < 2**31 - 1 else np.int64
    nbrs = np.empty(int(offsets[-1]), dtype=dtype)
    # old lists shift right by one slot after the attach vertex
    cut = int(base.offsets[attach + 1])
    nbrs[:cut] = base.neighbors[:cut]
    nbrs[cut] = n0
    nbrs[cut + 1 : int(offsets[n0])] = base.neighbors[cut:]
    ids = np.arange(n0, n, dtype=np.int64)
    path_off = offsets[n0:n]
    prev = ids - 1
    prev[0] = attach
    nbrs[path_off] = prev
    nbrs[path_off[:-1] + 1] = ids[1:]
    return Graph(n=n, m=base.m + length, offsets=offsets, neighbors=nbrs)


def tree_edge_count(spec: AdversarialSpec) -> int:
    """Edges in both trees (excluding the matching)."""
    return 2 * (sum(layer_size_targets(spec)) - 1)


def path_length_for(spec: AdversarialSpec) -> int:
    if not spec.append_path:
        return 0
    if spec.path_length is not None:
        return spec.path_length
    return int(round(spec.path_factor * tree_edge_count(spec)))


def min_path_factor(spec: AdversarialSpec) -> float:
    """Smallest dilution factor that lets the cheap prefix reach depth ``d1``.

    The first ``d1`` steps from ``s`` cost ``P``; they fit the budget
    ``m**alpha`` once ``m >= P**(1/alpha)``.  Returns 0 when the bare trees
    already suffice.
    """
    sizes = layer_size_targets(spec)
    prefix = sizes[1] + sum(sizes[i] + sizes[i - 1] for i in range(2, spec.d1 + 1))
    bare_m = 2 * (sum(sizes) - 1) + sizes[-1]
    need = math.ceil(prefix ** (1.0 / spec.alpha))
    return max(0, need - bare_m) / tree_edge_count(spec)


def generate(spec: AdversarialSpec) -> AdversarialInstance:
    spec.validate()
    sizes = layer_size_targets(spec)
    tree_n = sum(sizes)
    path_len = path_length_for(spec)
    n = 2 * tree_n + path_len
    if n > spec.budget:
        raise BudgetExceeded(f"instance needs {n} vertices, budget is {spec.budget}")

    ps, cs = _tree_edges(sizes, 0)
    pt, ct = _tree_edges(sizes, tree_n)
    leaves = tree_n - sizes[-1]
    leaf_s = np.arange(leaves, tree_n, dtype=np.int64)
    graph = Graph.from_edges(
        2 * tree_n, np.concatenate([ps, pt, leaf_s]), np.concatenate([cs, ct, leaf_s + tree_n])
    )
    del ps, pt, cs, ct, leaf_s
    if path_len:
        graph = _append_path(graph, leaves, path_len)
    meta = GraphMeta(
        source_path="adversarial",
        n=graph.n,
        m=graph.m,
        original_n=graph.n,
        original_m=graph.m,
        preprocessing_log=[f"generated {spec}"],
    )
    graph = Graph(graph.n, graph.m, graph.offsets, graph.neighbors, meta=meta)

    s, t = 0, tree_n
    profile = layer_cost_profile(graph, s, t)
    ratios = [sizes[i] / sizes[i - 1] for i in range(1, len(sizes))]
    midpoint = (float(spec.b) + float(spec.b_plus)) / 2.0
    realized_d1 = 0
    for r in ratios:
        if r > midpoint:
            break
        realized_d1 += 1
    return AdversarialInstance(
        spec=spec,
        graph=graph,
        s=s,
        t=t,
        realized_profile=profile,
        realized_d1=realized_d1,
        realized_d2=spec.d - realized_d1,
        layer_sizes=sizes,
        branching_sequence=ratios,
    )


@dataclass
class StepCheck:
    step: int
    ratio: float
    ok: bool


@dataclass
class ProfileReport:
    prefix: list[StepCheck]
    middle: list[StepCheck]
    last_fraction: float
    last_fraction_ok: bool | None
    diluted: bool

    @property
    def passed(self) -> bool:
        return (
            all(c.ok for c in self.prefix)
            and all(c.ok for c in self.middle)
            and self.last_fraction_ok is not False
        )


def verify_profile(instance: AdversarialInstance, tol: float = 0.05, min_last_fraction: float = 0.1) -> ProfileReport:
    """Recompute the s-side costs and check the growth pattern layer by layer.

    Step ``k`` compares ``cs[k+1]`` with ``cs[k]``.  The root has no parent
    edge, so the very first comparison may grow by up to ``1 + b_plus``.
    """
    spec = instance.spec
    profile = layer_cost_profile(instance.graph, instance.s, instance.t)
    cs = profile.cs.astype(float)
    d, d1 = spec.d, spec.d1
    b, bp = float(spec.b), float(spec.b_plus)
    prefix, middle = [], []
    for k in range(1, d):
        ratio = cs[k] / cs[k - 1]
        hi = (1.0 + bp if k == 1 else bp) * (1.0 + tol)
        if k < d1:
            prefix.append(StepCheck(k, ratio, ratio >= b * (1.0 - tol)))
        else:
            middle.append(StepCheck(k, ratio, b * (1.0 - tol) <= ratio <= hi))
    last_fraction = cs[d - 1] / (2.0 * instance.graph.m)
    diluted = last_fraction < min_last_fraction
    last_ok = None if spec.append_path else not diluted
    return ProfileReport(prefix, middle, last_fraction, last_ok, diluted)


def expanding_tree_pair(branching: int, depth: int) -> tuple[Graph, int, int]:
    """Two complete ``branching``-ary trees of height ``depth`` with their roots joined.

    Returns the graph and two deepest leaves, one in each tree; their BFS
    costs keep growing until the searches meet, so the expansion overlap
    spans almost the whole distance ``2 * depth + 1``.
    """
    if branching < 2 or depth < 1:
        raise ValueError("need branching >= 2 and depth >= 1")
    sizes = [branching**i for i in range(depth + 1)]
    tree_n = sum(sizes)
    ps, cs = _tree_edges(sizes, 0)
    pt, ct = _tree_edges(sizes, tree_n)
    src = np.concatenate([ps, pt, [0]])
    dst = np.concatenate([cs, ct, [tree_n]])
    graph = Graph.from_edges(2 * tree_n, src, dst)
    first_leaf = tree_n - sizes[-1]
    return graph, first_leaf, tree_n + first_leaf
