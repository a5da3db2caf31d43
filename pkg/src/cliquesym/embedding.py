"""Encoding a graph into a statevector.

Node ``i`` maps to qubit ``i``.  The encoded state is a uniform
superposition with a sign flip applied for every edge:

    |graph> = (prod over edges (i, j) of CZ_ij) H^n |0...0>

Every single-qubit Z expectation of this state is zero, and relabeling
the graph's nodes permutes the qubits of the state in the same way, so
the encoding commutes with node permutations.
"""

from __future__ import annotations

import numpy as np

from .errors import UsageError
from .graphs import Graph
from .statevector import GateKind, Statevector, apply_gate_raw


def embed_graph(graph: Graph) -> Statevector:
    """Return the encoded statevector for one graph."""
    n = graph.n_nodes
    amps = np.full(2**n, 2.0 ** (-n / 2), dtype=np.complex128)
    for i, j in graph.sorted_edges():
        apply_gate_raw(amps, n, GateKind.CZ, (i, j), ())
    return Statevector(n, amps)


def embed_many(graphs) -> np.ndarray:
    """Stack encodings of same-sized graphs into one ``(batch, 2**n)`` array."""
    graphs = list(graphs)
    if not graphs:
        raise UsageError("embed_many needs at least one graph")
    n = graphs[0].n_nodes
    if any(g.n_nodes != n for g in graphs):
        raise UsageError("all graphs must have the same number of nodes")
    out = np.empty((len(graphs), 2**n), dtype=np.complex128)
    for b, g in enumerate(graphs):
        out[b] = embed_graph(g).amplitudes
    return out
