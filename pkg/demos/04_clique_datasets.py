#!/usr/bin/env python3
"""Random graphs, clique enumeration, and balanced labeled datasets.

Generates a few Erdos-Renyi graphs, enumerates their cliques, then builds a
small balanced dataset of positive (contains a 4-clique) and negative
examples with per-node labels, and round-trips it through the on-disk
format.
"""

import os
import tempfile

import numpy as np

from cliquesym import (
    build_dataset,
    find_k_cliques,
    gen_er_graph,
    load_dataset,
    save_dataset,
)

SPACER = "_" * 60


def ascii_adjacency(graph):
    rows = []
    for i in range(graph.n_nodes):
        row = "".join(
            "#" if i != j and graph.has_edge(i, j) else "." for j in range(graph.n_nodes)
        )
        rows.append(f"  {i} {row}")
    return "\n".join(rows)


def main():
    rng = np.random.default_rng(23)

    print("Erdos-Renyi samples at 6 nodes:")
    for p in (0.3, 0.6, 0.9):
        graph = gen_er_graph(6, p, rng)
        cliques = find_k_cliques(graph, 4)
        print(f"  p={p:.1f}: {len(graph.edges):2d} edges, 4-cliques: {cliques}")

    print(SPACER)
    print("\nA balanced dataset: half contain a 4-clique, half do not.")
    dataset = build_dataset(
        n_nodes=6, clique_size=4, size=20, seed=5, edge_prob_range=(0.3, 0.9)
    )
    pos, neg = dataset.class_counts()
    print(f"  size={dataset.size}  positives={pos}  negatives={neg}")

    item = dataset.items[0]
    print("\nFirst item (a positive):")
    print(ascii_adjacency(item.graph))
    print(f"  node labels : {item.label.tolist()}")
    print(f"  edge prob   : {item.edge_prob:.3f}")
    marked = [i for i, lab in enumerate(item.label) if lab > 0]
    print(f"  labeled clique nodes {marked} -> "
          f"clique present: {tuple(marked) in find_k_cliques(item.graph, 4)}")

    print(SPACER)
    print("\nRound-trip through the JSONL dataset format:")
    fd, path = tempfile.mkstemp(suffix=".jsonl")
    os.close(fd)
    try:
        save_dataset(dataset, path)
        loaded = load_dataset(path)
        same = all(
            a.graph == b.graph and np.array_equal(a.label, b.label)
            for a, b in zip(dataset.items, loaded.items)
        )
        print(f"  wrote {os.path.getsize(path)} bytes, lossless: {same}")
    finally:
        os.unlink(path)


if __name__ == "__main__":
    main()
