"""Unidirectional and bidirectional BFS with exact exploration-cost accounting.

Cost model: an exploration step scans the adjacency lists of every vertex in
one BFS layer, so its cost is the degree sum of that layer.  The layer that
first touches the opposite search is discovered but never expanded and
therefore costs nothing.  Under this model a bidirectional run that meets at
layer ``k`` costs exactly ``cs[1..k] + ct[k+1..d]`` of the pair's
:class:`LayerCostProfile`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import accumulate
from typing import Callable, NamedTuple

import numpy as np

from .graph import Graph, expand_frontier

FORWARD = "forward"
BACKWARD = "backward"

# (forward next-step cost, backward next-step cost, forward steps, backward steps) -> direction
AlternationStrategy = Callable[[int, int, int, int], str]


class Step(NamedTuple):
    direction: str
    cost: int


@dataclass
class BidiResult:
    s: int
    t: int
    distance: int
    cost: int
    meeting_layer: int
    trace: list[Step] = field(default_factory=list)
    forward_layers: list[int] = field(default_factory=list)
    backward_layers: list[int] = field(default_factory=list)

    def to_json(self, graph: Graph | None = None) -> dict:
        s, t = self.s, self.t
        if graph is not None and graph.vertex_labels is not None:
            s, t = graph.label(s), graph.label(t)
        return {
            "s": s,
            "t": t,
            "d": self.distance,
            "cost": self.cost,
            "meeting_layer": self.meeting_layer,
            "trace": [{"dir": st.direction, "cost": st.cost} for st in self.trace],
        }


@dataclass(frozen=True, eq=False)
class LayerCostProfile:
    """Exploration costs of every step between ``s`` and ``t``.

    Arrays are 0-based: ``cs[i - 1]`` is the cost of step ``i`` from ``s``
    (degree sum of ``l(s, i-1)``) and ``ct[i - 1]`` the cost of step ``i``
    from ``t`` (degree sum of ``l(t, d-i)``).  Layer sizes cover layers
    ``0..d`` of each endpoint's BFS.
    """

    d: int
    cs: np.ndarray
    ct: np.ndarray
    m: int
    layer_sizes_s: tuple[int, ...] = ()
    layer_sizes_t: tuple[int, ...] = ()

    @classmethod
    def from_costs(cls, cs, ct, m: int) -> "LayerCostProfile":
        cs = np.asarray(cs, dtype=np.int64)
        ct = np.asarray(ct, dtype=np.int64)
        if cs.shape != ct.shape or cs.ndim != 1:
            raise ValueError("cs and ct must be 1-d arrays of equal length")
        return cls(d=len(cs), cs=cs, ct=ct, m=int(m))

    @cached_property
    def cs_list(self) -> list[int]:
        return self.cs.tolist()

    @cached_property
    def ct_list(self) -> list[int]:
        return self.ct.tolist()

    @cached_property
    def max_growth(self) -> float:
        """Largest one-step cost ratio in either search direction (0 when d = 1)."""
        cs, ct = self.cs_list, self.ct_list
        best = 0.0
        for k in range(1, self.d):
            best = max(best, cs[k] / cs[k - 1], ct[k - 1] / ct[k])
        return best

    @cached_property
    def prefix_costs(self) -> list[int]:
        """``prefix_costs[j - 1] = c_s([1, j])``, increasing in ``j``."""
        return list(accumulate(self.cs_list))

    @cached_property
    def suffix_costs(self) -> list[int]:
        """``suffix_costs[i] = c_t([d - i, d])``: cost of the last ``i + 1`` steps towards ``t``."""
        return list(accumulate(reversed(self.ct_list)))

    @cached_property
    def expan_memo(self) -> dict:
        """Per-profile store for landmarks that depend only on the expansion base."""
        return {}

    def cost_s(self, lo: int, hi: int) -> int:
        """``c_s([lo, hi])`` with 1-based inclusive step indices."""
        if hi < lo:
            return 0
        return int(self.cs[lo - 1 : hi].sum())

    def cost_t(self, lo: int, hi: int) -> int:
        if hi < lo:
            return 0
        return int(self.ct[lo - 1 : hi].sum())

    def meeting_cost(self, k: int) -> int:
        """Cost of a run where the forward search does ``k`` of the ``d`` steps."""
        return self.cost_s(1, k) + self.cost_t(k + 1, self.d)

    def reversed(self) -> "LayerCostProfile":
        """Profile of the pair ``(t, s)``."""
        return LayerCostProfile(
            d=self.d,
            cs=self.ct[::-1].copy(),
            ct=self.cs[::-1].copy(),
            m=self.m,
            layer_sizes_s=self.layer_sizes_t,
            layer_sizes_t=self.layer_sizes_s,
        )


def balanced_strategy() -> AlternationStrategy:
    """Expand the side whose next step is cheaper; ties go forward."""

    def choose(fwd_cost: int, bwd_cost: int, fwd_steps: int, bwd_steps: int) -> str:
        return FORWARD if fwd_cost <= bwd_cost else BACKWARD

    return choose


def unidirectional_strategy() -> AlternationStrategy:
    def choose(fwd_cost: int, bwd_cost: int, fwd_steps: int, bwd_steps: int) -> str:
        return FORWARD

    return choose


def meet_at_strategy(k: int) -> AlternationStrategy:
    """Forward for the first ``k`` steps, backward afterwards."""
    if k < 0:
        raise ValueError("meeting layer must be non-negative")

    def choose(fwd_cost: int, bwd_cost: int, fwd_steps: int, bwd_steps: int) -> str:
        return FORWARD if fwd_steps < k else BACKWARD

    return choose


def strategy_from_name(name: str) -> AlternationStrategy:
    if name == "balanced":
        return balanced_strategy()
    if name == "unidirectional":
        return unidirectional_strategy()
    if name.startswith("meet-at:"):
        return meet_at_strategy(int(name.split(":", 1)[1]))
    raise ValueError(f"unknown strategy {name!r} (balanced | unidirectional | meet-at:k)")


def _check_vertex(graph: Graph, v: int) -> None:
    if not 0 <= v < graph.n:
        raise IndexError(f"vertex {v} out of range for n={graph.n}")


# Steps whose scanned adjacency is at most this long run in plain Python;
# numpy's per-call overhead dominates below it.
SMALL_STEP = 512


class _Explorer:
    """One BFS side: visited bitmap, current frontier and next-step cost.

    The bitmap is a ``bytearray`` with a numpy view onto the same buffer, so
    small steps can walk Python adjacency lists while large steps stay
    vectorised.
    """

    def __init__(self, graph: Graph, root: int):
        self.graph = graph
        self.py = graph.py_adjacency
        self.mark = bytearray(graph.n)
        self._seen: np.ndarray | None = None
        self.mark[root] = 1
        self.frontier: np.ndarray | list[int] = [root]
        self.cost = self.py[1][root] if self.py is not None else graph.degree(root)

    @property
    def seen(self) -> np.ndarray:
        if self._seen is None:
            self._seen = np.frombuffer(self.mark, dtype=np.uint8)
        return self._seen

    def step(self) -> np.ndarray | list[int]:
        """Expand the frontier; return the new layer and update the cost."""
        if self.py is not None and self.cost <= SMALL_STEP:
            adj, deg = self.py
            mark = self.mark
            new = []
            for u in self.frontier:
                for w in adj[u]:
                    if not mark[w]:
                        mark[w] = 1
                        new.append(w)
            self.cost = sum(deg[w] for w in new)
        else:
            front = np.asarray(self.frontier, dtype=np.int64)
            nb = expand_frontier(self.graph, front)
            new = np.unique(nb[self.seen[nb] == 0]).astype(np.int64)
            self.seen[new] = 1
            self.cost = int(self.graph.degrees[new].sum())
        self.frontier = new
        return new

    def touches(self, layer) -> bool:
        if isinstance(layer, list):
            mark = self.mark
            return any(mark[w] for w in layer)
        return bool(self.seen[layer].any())

    def has_seen(self, v: int) -> bool:
        return bool(self.mark[v])


def bfs_layers(graph: Graph, source: int, target: int | None = None, max_depth: int | None = None) -> list[np.ndarray]:
    """BFS layers around ``source``, each sorted.

    Stops after the layer containing ``target`` or after ``max_depth``;
    otherwise runs to exhaustion.
    """
    _check_vertex(graph, source)
    layers = [np.array([source], dtype=np.int64)]
    if target == source or max_depth == 0:
        return layers
    side = _Explorer(graph, source)
    while True:
        new = side.step()
        if len(new) == 0:
            if target is not None:
                raise ValueError(f"vertices {source} and {target} are not connected")
            return layers
        layers.append(np.sort(np.asarray(new, dtype=np.int64)))
        if target is not None and side.has_seen(target):
            return layers
        if max_depth is not None and len(layers) > max_depth:
            return layers


def bfs_distance(graph: Graph, s: int, t: int) -> int:
    _check_vertex(graph, t)
    return len(bfs_layers(graph, s, target=t)) - 1


def layer_cost_profile(graph: Graph, s: int, t: int) -> LayerCostProfile:
    """Per-step exploration costs from both endpoints of a pair ``s != t``.

    This is a property of the graph, independent of any particular run: both
    BFS trees are grown to depth ``d(s, t)`` in full.
    """
    _check_vertex(graph, t)
    if s == t:
        raise ValueError("layer cost profile needs s != t")
    deg = graph.degrees
    from_s = bfs_layers(graph, s, target=t)
    d = len(from_s) - 1
    from_t = bfs_layers(graph, t, max_depth=d)
    cs = np.array([deg[from_s[i - 1]].sum() for i in range(1, d + 1)], dtype=np.int64)
    ct = np.array([deg[from_t[d - i]].sum() for i in range(1, d + 1)], dtype=np.int64)
    return LayerCostProfile(
        d=d,
        cs=cs,
        ct=ct,
        m=graph.m,
        layer_sizes_s=tuple(len(x) for x in from_s),
        layer_sizes_t=tuple(len(x) for x in from_t),
    )


def bidirectional_bfs(graph: Graph, s: int, t: int, strategy: AlternationStrategy | None = None) -> BidiResult:
    """Alternate complete BFS steps from ``s`` and ``t`` until they touch.

    After every completed step the freshly discovered layer is intersected
    with everything the opposite search has discovered; the first hit fixes
    the distance as the total number of steps taken.
    """
    _check_vertex(graph, s)
    _check_vertex(graph, t)
    if strategy is None:
        strategy = balanced_strategy()
    if s == t:
        return BidiResult(s, t, 0, 0, 0, [], [1], [1])

    sides = (_Explorer(graph, s), _Explorer(graph, t))
    steps = [0, 0]
    sizes: tuple[list[int], list[int]] = ([1], [1])
    trace: list[Step] = []
    total = 0

    while True:
        direction = strategy(sides[0].cost, sides[1].cost, steps[0], steps[1])
        if direction not in (FORWARD, BACKWARD):
            raise ValueError(f"strategy returned invalid direction {direction!r}")
        side = 0 if direction == FORWARD else 1
        cost = sides[side].cost
        total += cost
        trace.append(Step(direction, cost))
        steps[side] += 1
        new = sides[side].step()
        if len(new) == 0:
            raise ValueError(f"vertices {s} and {t} are not connected")
        sizes[side].append(len(new))
        if sides[1 - side].touches(new):
            break

    return BidiResult(
        s=s,
        t=t,
        distance=steps[0] + steps[1],
        cost=total,
        meeting_layer=steps[0],
        trace=trace,
        forward_layers=sizes[0],
        backward_layers=sizes[1],
    )


def optimal_meeting_cost(profile: LayerCostProfile) -> tuple[int, int]:
    """Cheapest meeting layer over all alternation strategies.

    Returns ``(cost, k)`` minimising ``cs[1..k] + ct[k+1..d]``; ties take the
    smallest ``k``.
    """
    prefix = np.concatenate([[0], np.cumsum(profile.cs)])
    suffix = np.concatenate([np.cumsum(profile.ct[::-1])[::-1], [0]])
    costs = prefix + suffix
    k = int(np.argmin(costs))
    return int(costs[k]), k
