"""Graph loading, sanitizing and the immutable CSR representation.

Every search in the package runs on a :class:`Graph`: a simple, undirected,
connected graph stored as ``offsets``/``neighbors`` arrays with sorted
adjacency lists.  Raw input goes through three explicit stages so that each
mutation is logged in :class:`GraphMeta`::

    raw = load_edge_list(path)        # parse, keep loops and duplicates
    cand = simplify(raw)              # drop loops, merge orientations
    graph = largest_connected_component(cand)
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

COMMENT_PREFIXES = ("#", "%")
# Graphs up to this size also keep Python adjacency lists for small BFS steps.
PY_ADJACENCY_MAX_N = 200_000


class GraphFormatError(ValueError):
    """Raised for unreadable or malformed edge-list input."""


@dataclass
class GraphMeta:
    source_path: str = ""
    n: int = 0
    m: int = 0
    original_n: int = 0
    original_m: int = 0
    preprocessing_log: list[str] = field(default_factory=list)

    def log(self, step: str) -> None:
        self.preprocessing_log.append(step)

    def to_json(self) -> dict:
        return {
            "source": self.source_path,
            "n": self.n,
            "m": self.m,
            "original_n": self.original_n,
            "original_m": self.original_m,
            "steps": list(self.preprocessing_log),
        }


@dataclass(frozen=True)
class RawEdges:
    """Parsed edge multiset, before any simplification.

    ``src[i], dst[i]`` are dense indices into ``labels``; labels are kept in
    first-appearance order.
    """

    src: np.ndarray
    dst: np.ndarray
    labels: tuple[str, ...]
    source_path: str = ""

    @property
    def n(self) -> int:
        return len(self.labels)

    def pairs(self) -> list[tuple[str, str]]:
        return [(self.labels[u], self.labels[v]) for u, v in zip(self.src, self.dst)]


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph in compressed adjacency form.

    ``neighbors[offsets[v]:offsets[v + 1]]`` is the sorted adjacency list of
    ``v``; ``m`` counts each undirected edge once.
    """

    n: int
    m: int
    offsets: np.ndarray
    neighbors: np.ndarray
    vertex_labels: tuple[str, ...] | None = None
    meta: GraphMeta | None = None

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @cached_property
    def py_adjacency(self) -> tuple[list[list[int]], list[int]] | None:
        """Adjacency and degrees as Python lists, or None for large graphs."""
        if self.n > PY_ADJACENCY_MAX_N:
            return None
        nbrs = self.neighbors.tolist()
        offs = self.offsets.tolist()
        return [nbrs[offs[v] : offs[v + 1]] for v in range(self.n)], self.degrees.tolist()

    @cached_property
    def _label_index(self) -> dict[str, int]:
        labels = self.vertex_labels or tuple(str(i) for i in range(self.n))
        return {lab: i for i, lab in enumerate(labels)}

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")
        return int(self.offsets[v + 1] - self.offsets[v])

    def adjacency(self, v: int) -> np.ndarray:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")
        return self.neighbors[self.offsets[v] : self.offsets[v + 1]]

    def label(self, v: int) -> str:
        return self.vertex_labels[v] if self.vertex_labels else str(v)

    def index_of(self, label: str | int) -> int:
        """Map an original vertex label to its dense index."""
        try:
            return self._label_index[str(label)]
        except KeyError:
            raise KeyError(f"unknown vertex label {label!r}") from None

    def edges(self) -> np.ndarray:
        """Return an ``(m, 2)`` array of edges ``u < v`` in sorted order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        mask = src < self.neighbors
        return np.stack([src[mask], self.neighbors[mask]], axis=1)

    @classmethod
    def from_edges(
        cls,
        n: int,
        src: np.ndarray | Sequence[int],
        dst: np.ndarray | Sequence[int],
        vertex_labels: tuple[str, ...] | None = None,
        meta: GraphMeta | None = None,
    ) -> "Graph":
        """Build a graph from undirected edges, dropping loops and duplicates."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        keep = src != dst
        src, dst = src[keep], dst[keep]
        lo = np.minimum(src, dst)
        hi = np.maximum(src, dst)
        keys = np.unique(lo * n + hi)
        lo, hi = keys // n, keys % n
        del keys
        both = np.concatenate([lo * n + hi, hi * n + lo])
        del lo, hi
        both.sort()
        nbrs = both % n
        counts = np.bincount(both // n, minlength=n)
        del both
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        dtype = np.int32 if n < 2**31 - 1 else np.int64
        return cls(
            n=n,
            m=len(nbrs) // 2,
            offsets=offsets,
            neighbors=nbrs.astype(dtype),
            vertex_labels=vertex_labels,
            meta=meta,
        )


def expand_frontier(graph: Graph, frontier: np.ndarray) -> np.ndarray:
    """Concatenate the adjacency lists of all vertices in ``frontier``."""
    starts = graph.offsets[frontier]
    lens = graph.offsets[frontier + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=graph.neighbors.dtype)
    # position j of the output reads neighbors[starts[k] + (j - firstpos[k])]
    firstpos = np.cumsum(lens) - lens
    idx = np.repeat(starts - firstpos, lens) + np.arange(total, dtype=np.int64)
    return graph.neighbors[idx]


def connected_components(graph: Graph) -> np.ndarray:
    """Label vertices by component; labels are numbered by smallest member."""
    comp = np.full(graph.n, -1, dtype=np.int64)
    label = 0
    root = 0
    while True:
        unlabeled = np.flatnonzero(comp[root:] < 0)
        if unlabeled.size == 0:
            break
        root += int(unlabeled[0])
        comp[root] = label
        frontier = np.array([root], dtype=np.int64)
        while frontier.size:
            nb = expand_frontier(graph, frontier)
            nb = np.unique(nb[comp[nb] < 0])
            comp[nb] = label
            frontier = nb.astype(np.int64)
        label += 1
    return comp


def load_edge_list(path: str | Path) -> RawEdges:
    """Parse a whitespace-separated edge list.

    Lines starting with ``#`` or ``%`` are comments; tokens after the second
    column (weights, timestamps) are ignored.  A first data line of exactly
    three integers is taken to be a Matrix-Market size header and skipped.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc}") from exc

    index: dict[str, int] = {}
    src: list[int] = []
    dst: list[int] = []
    first_data = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        parts = line.split()
        if first_data:
            first_data = False
            if len(parts) == 3 and all(_is_int(p) for p in parts):
                logger.warning(
                    "%s:%d: treating '%s' as a Matrix-Market size line", path, lineno, line
                )
                continue
        if len(parts) < 2:
            raise GraphFormatError(f"{path}:{lineno}: expected two vertex labels, got {line!r}")
        u = index.setdefault(parts[0], len(index))
        v = index.setdefault(parts[1], len(index))
        src.append(u)
        dst.append(v)

    if not src:
        raise GraphFormatError(f"{path}: no edges found")
    return RawEdges(
        src=np.asarray(src, dtype=np.int64),
        dst=np.asarray(dst, dtype=np.int64),
        labels=tuple(index),
        source_path=str(path),
    )


def _is_int(token: str) -> bool:
    try:
        int(token)
    except ValueError:
        return False
    return True


def simplify(raw: RawEdges) -> Graph:
    """Drop self-loops, ignore direction and collapse parallel edges.

    Vertices that only carried self-loops stay in the candidate as isolated
    vertices; :func:`largest_connected_component` removes them.
    """
    meta = GraphMeta(
        source_path=raw.source_path,
        original_n=raw.n,
        original_m=len(raw.src),
    )
    loops = int(np.count_nonzero(raw.src == raw.dst))
    graph = Graph.from_edges(raw.n, raw.src, raw.dst, vertex_labels=raw.labels, meta=meta)
    if graph.m == 0:
        raise GraphFormatError(f"{raw.source_path or 'input'}: empty graph after simplification")
    meta.log("symmetrized")
    meta.log(f"self-loops removed ({loops})")
    meta.log(f"deduped ({len(raw.src) - loops - graph.m} parallel or reverse entries)")
    meta.n, meta.m = graph.n, graph.m
    return graph


def largest_connected_component(graph: Graph) -> Graph:
    """Induced subgraph on the largest component, reindexed in original order.

    Ties between equally large components go to the one containing the
    smallest vertex index (first-appearance order of the labels).
    """
    meta = graph.meta if graph.meta is not None else GraphMeta(original_n=graph.n, original_m=graph.m)
    meta = GraphMeta(
        source_path=meta.source_path,
        original_n=meta.original_n or graph.n,
        original_m=meta.original_m or graph.m,
        preprocessing_log=list(meta.preprocessing_log),
    )
    comp = connected_components(graph)
    sizes = np.bincount(comp)
    best = int(np.argmax(sizes))  # components are numbered by smallest member
    keep = np.flatnonzero(comp == best)
    if keep.size < 2:
        raise GraphFormatError("empty graph")

    if keep.size == graph.n:
        meta.log(f"LCC extracted (n {graph.n} -> {graph.n}, m {graph.m} -> {graph.m})")
        meta.n, meta.m = graph.n, graph.m
        return Graph(graph.n, graph.m, graph.offsets, graph.neighbors, graph.vertex_labels, meta)

    remap = np.full(graph.n, -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size)
    edges = graph.edges()
    edges = edges[comp[edges[:, 0]] == best]
    labels = None
    if graph.vertex_labels is not None:
        labels = tuple(graph.vertex_labels[i] for i in keep)
    sub = Graph.from_edges(
        int(keep.size), remap[edges[:, 0]], remap[edges[:, 1]], vertex_labels=labels, meta=meta
    )
    meta.log(f"LCC extracted (n {graph.n} -> {sub.n}, m {graph.m} -> {sub.m})")
    meta.n, meta.m = sub.n, sub.m
    return sub


def load_graph(path: str | Path) -> Graph:
    """Load, simplify and reduce an edge-list file to its largest component."""
    return largest_connected_component(simplify(load_edge_list(path)))


def write_edge_list(graph: Graph, path: str | Path, header: str | None = None) -> None:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    for u, v in graph.edges():
        lines.append(f"{graph.label(int(u))} {graph.label(int(v))}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_meta_json(meta: GraphMeta, path: str | Path) -> None:
    Path(path).write_text(json.dumps(meta.to_json(), indent=2) + "\n")
