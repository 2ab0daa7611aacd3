"""Write the bundled ten-graph mini-corpus to data/minicorpus/.

Three grid/path-like graphs, three expander-like graphs and four mixed ones.
All generators are seeded, so rerunning reproduces the files exactly.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import networkx as nx

GRID_LIKE = ("grid_30x30", "trilattice_24", "geometric_1000")
EXPANDER_LIKE = ("regular4_2000", "barabasi_2000", "gnm_2000")


def corpus() -> dict[str, tuple[str, nx.Graph]]:
    return {
        "grid_30x30": ("2-d grid, 30 x 30", nx.grid_2d_graph(30, 30)),
        "trilattice_24": ("triangular lattice, 24 x 24 cells", nx.triangular_lattice_graph(24, 24)),
        "geometric_1000": ("random geometric graph, n=1000, r=0.055, seed 3", nx.random_geometric_graph(1000, 0.055, seed=3)),
        "regular4_2000": ("random 4-regular graph, n=2000, seed 2", nx.random_regular_graph(4, 2000, seed=2)),
        "barabasi_2000": ("Barabasi-Albert graph, n=2000, m=2, seed 4", nx.barabasi_albert_graph(2000, 2, seed=4)),
        "gnm_2000": ("G(n, m) random graph, n=2000, m=8000, seed 5", nx.gnm_random_graph(2000, 8000, seed=5)),
        "regular3_2000": ("random 3-regular graph, n=2000, seed 1", nx.random_regular_graph(3, 2000, seed=1)),
        "wattsstrogatz_2000": ("Watts-Strogatz graph, n=2000, k=6, p=0.1, seed 7", nx.watts_strogatz_graph(2000, 6, 0.1, seed=7)),
        "powerlawcluster_2000": ("Holme-Kim graph, n=2000, m=3, p=0.3, seed 8", nx.powerlaw_cluster_graph(2000, 3, 0.3, seed=8)),
        "bintree_10": ("complete binary tree of height 10", nx.balanced_tree(2, 10)),
    }


def write(graph: nx.Graph, description: str, path: Path) -> None:
    graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
    lines = [f"# {description}", f"# n={graph.number_of_nodes()} m={graph.number_of_edges()}"]
    lines += [f"{u} {v}" for u, v in sorted((min(e), max(e)) for e in graph.edges())]
    path.write_text("\n".join(lines) + "\n")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data" / "minicorpus"))
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, (description, graph) in corpus().items():
        write(graph, description, out / f"{name}.el")
        print(f"{name}: n={graph.number_of_nodes()} m={graph.number_of_edges()}")


if __name__ == "__main__":
    main()
