"""Random-graph features, clique labels, and balanced dataset generation.

A dataset pairs Erdos-Renyi graphs with per-node targets in {-1, +1}: if
the graph contains a clique of the requested size, one such clique is
picked uniformly at random and its nodes are marked +1; otherwise every
node is -1.  Datasets are balanced between the two cases and interleaved
(positive, negative, positive, ...) so that any even-length prefix is
itself balanced.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DataFormatError, GenerationError, UsageError

#: draws allowed per requested item before generation gives up
RETRY_FACTOR = 1000

DATASET_FORMAT = "cliquesym-dataset"
DATASET_VERSION = 1


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes ``0..n_nodes-1``.

    Edges are stored as a frozenset of ``(i, j)`` pairs with ``i < j``.
    """

    n_nodes: int
    edges: frozenset

    def __post_init__(self):
        for e in self.edges:
            i, j = e
            if not (0 <= i < j < self.n_nodes):
                raise ConfigurationError(
                    f"edge {e} invalid for {self.n_nodes} nodes (need 0 <= i < j < n)"
                )

    @classmethod
    def from_edges(cls, n_nodes: int, edges) -> "Graph":
        """Build a graph from any iterable of node pairs, normalizing order."""
        normalized = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ConfigurationError(f"self-loop on node {i}")
            normalized.add((min(i, j), max(i, j)))
        return cls(n_nodes, frozenset(normalized))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n_nodes)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


def permute_graph(graph: Graph, perm) -> Graph:
    """Relabel nodes: node ``i`` becomes ``perm[i]``."""
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(graph.n_nodes)):
        raise UsageError(f"perm must be a permutation of 0..{graph.n_nodes - 1}")
    return Graph.from_edges(graph.n_nodes, ((perm[i], perm[j]) for i, j in graph.edges))


def gen_er_graph(n_nodes: int, edge_prob: float, rng: np.random.Generator) -> Graph:
    """Sample an Erdos-Renyi graph: each pair is an edge independently with ``edge_prob``."""
    if n_nodes < 1:
        raise ConfigurationError(f"n_nodes must be >= 1, got {n_nodes}")
    if not 0.0 <= edge_prob <= 1.0:
        raise ConfigurationError(f"edge_prob must be in [0, 1], got {edge_prob}")
    pairs = [(i, j) for i in range(n_nodes) for j in range(i + 1, n_nodes)]
    draws = rng.random(len(pairs))
    return Graph(n_nodes, frozenset(p for p, r in zip(pairs, draws) if r < edge_prob))


def find_k_cliques(graph: Graph, k: int) -> list[tuple[int, ...]]:
    """All node subsets of size ``k`` whose induced subgraph is complete.

    Returned as sorted tuples in lexicographic order.  Uses ordered
    extension (grow a clique only with higher-numbered common neighbors),
    which the test suite checks against a naive all-subsets scan.
    """
    if not 1 <= k <= graph.n_nodes:
        raise UsageError(f"k must be in [1, {graph.n_nodes}], got {k}")
    adj = graph.adjacency()
    out: list[tuple[int, ...]] = []

    def extend(clique: list[int], candidates: list[int]) -> None:
        if len(clique) == k:
            out.append(tuple(clique))
            return
        needed = k - len(clique)
        for idx, v in enumerate(candidates):
            if len(candidates) - idx < needed:
                break
            clique.append(v)
            extend(clique, [u for u in candidates[idx + 1 :] if u in adj[v]])
            clique.pop()

    extend([], list(range(graph.n_nodes)))
    return out


def make_label(graph: Graph, k: int, rng: np.random.Generator) -> np.ndarray:
    """Per-node target: +1 on a uniformly chosen k-clique, else all -1."""
    label = np.full(graph.n_nodes, -1, dtype=np.int64)
    cliques = find_k_cliques(graph, k)
    if cliques:
        chosen = cliques[int(rng.integers(len(cliques)))]
        label[list(chosen)] = 1
    return label


@dataclass(frozen=True, eq=False)
class DatasetItem:
    graph: Graph
    label: np.ndarray
    edge_prob: float


@dataclass(eq=False)
class Dataset:
    items: list[DatasetItem]
    n_nodes: int
    clique_size: int
    seed: int
    edge_prob_range: tuple[float, float] = (0.3, 0.9)

    @property
    def size(self) -> int:
        return len(self.items)

    def pairs(self) -> list[tuple[Graph, np.ndarray]]:
        """(graph, label) view consumed by the training routines."""
        return [(it.graph, it.label) for it in self.items]

    def labels(self) -> np.ndarray:
        return np.stack([it.label for it in self.items])

    def class_counts(self) -> tuple[int, int]:
        """(clique-bearing, all-negative) item counts."""
        pos = sum(1 for it in self.items if it.label.max() > 0)
        return pos, len(self.items) - pos


def build_dataset(
    n_nodes: int,
    clique_size: int,
    size: int,
    edge_prob_range: tuple[float, float] = (0.3, 0.9),
    seed: int = 0,
) -> Dataset:
    """Rejection-sample a balanced clique/no-clique dataset.

    Each draw picks an edge probability uniformly from ``edge_prob_range``,
    samples a graph with it, and files the graph under its class until both
    classes are full (sizes ``size // 2`` and ``size - size // 2``).  Raises
    :class:`GenerationError` once ``size * 1000`` draws have been spent,
    which usually means the probability range makes one class too rare.
    """
    if size < 1:
        raise ConfigurationError(f"size must be >= 1, got {size}")
    if not 1 <= clique_size <= n_nodes:
        raise ConfigurationError(
            f"clique_size must be in [1, {n_nodes}], got {clique_size}"
        )
    lo, hi = edge_prob_range
    if not 0.0 <= lo <= hi <= 1.0:
        raise ConfigurationError(f"edge_prob_range must satisfy 0 <= lo <= hi <= 1, got {edge_prob_range}")

    rng = np.random.default_rng(seed)
    n_pos = size // 2
    n_neg = size - n_pos
    pos: list[DatasetItem] = []
    neg: list[DatasetItem] = []
    budget = size * RETRY_FACTOR
    draws = 0
    while len(pos) < n_pos or len(neg) < n_neg:
        if draws >= budget:
            raise GenerationError(
                f"exhausted {budget} draws with {len(pos)}/{n_pos} clique-bearing and "
                f"{len(neg)}/{n_neg} negative graphs; adjust edge_prob_range {edge_prob_range}"
            )
        draws += 1
        p = float(rng.uniform(lo, hi))
        graph = gen_er_graph(n_nodes, p, rng)
        has_clique = bool(find_k_cliques(graph, clique_size))
        if has_clique and len(pos) < n_pos:
            pos.append(DatasetItem(graph, make_label(graph, clique_size, rng), p))
        elif not has_clique and len(neg) < n_neg:
            neg.append(DatasetItem(graph, np.full(n_nodes, -1, dtype=np.int64), p))

    items: list[DatasetItem] = []
    for i in range(max(len(pos), len(neg))):
        if i < len(pos):
            items.append(pos[i])
        if i < len(neg):
            items.append(neg[i])
    return Dataset(items, n_nodes, clique_size, seed, (float(lo), float(hi)))


# ---------------------------------------------------------------------------
# on-disk format: one JSON object per line, header first

def save_dataset(dataset: Dataset, path) -> None:
    """Write the dataset as JSON lines (atomic: temp file then rename).

    Line 1 is a header with ``format``, ``version``, ``n_nodes``,
    ``clique_size``, ``size``, ``seed`` and ``edge_prob_range``; every
    following line is one item with ``n_nodes``, sorted ``edges``,
    ``label`` and the ``edge_prob`` it was sampled with.
    """
    path = os.fspath(path)
    header = {
        "format": DATASET_FORMAT,
        "version": DATASET_VERSION,
        "n_nodes": dataset.n_nodes,
        "clique_size": dataset.clique_size,
        "size": dataset.size,
        "seed": dataset.seed,
        "edge_prob_range": list(dataset.edge_prob_range),
    }
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(json.dumps(header) + "\n")
            for it in dataset.items:
                record = {
                    "n_nodes": it.graph.n_nodes,
                    "edges": [list(e) for e in it.graph.sorted_edges()],
                    "label": it.label.tolist(),
                    "edge_prob": it.edge_prob,
                }
                fh.write(json.dumps(record) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_dataset(path) -> Dataset:
    """Read a dataset written by :func:`save_dataset`."""
    path = os.fspath(path)
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataFormatError(f"{path}: empty dataset file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: bad header line: {exc}") from None
    if not isinstance(header, dict) or header.get("format") != DATASET_FORMAT:
        raise DataFormatError(f"{path}: not a {DATASET_FORMAT} file")
    if header.get("version") != DATASET_VERSION:
        raise DataFormatError(f"{path}: unsupported version {header.get('version')}")

    items = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            graph = Graph.from_edges(rec["n_nodes"], rec["edges"])
            label = np.asarray(rec["label"], dtype=np.int64)
            items.append(DatasetItem(graph, label, float(rec["edge_prob"])))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise DataFormatError(f"{path}: line {lineno}: {exc}") from None
        if label.shape != (header["n_nodes"],) or not np.isin(label, (-1, 1)).all():
            raise DataFormatError(f"{path}: line {lineno}: malformed label {rec['label']}")
    if len(items) != header["size"]:
        raise DataFormatError(
            f"{path}: header promises {header['size']} items, found {len(items)}"
        )
    return Dataset(
        items,
        header["n_nodes"],
        header["clique_size"],
        header["seed"],
        tuple(header["edge_prob_range"]),
    )
