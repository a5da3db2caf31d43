"""Symmetry-restricted variational quantum circuits for clique labeling.

Exact statevector simulation of three circuit families (permutation
invariant, cyclic invariant, strongly entangling), quantum natural
gradient training, and the random-graph clique-labeling experiment built
on top of them.
"""

from .errors import (
    CliqueSymError,
    ConfigurationError,
    DataFormatError,
    GenerationError,
    NumericalError,
    UsageError,
)
from .ansatz import (
    DEFAULT_REPETITIONS,
    AnsatzKind,
    CircuitTemplate,
    build_ansatz,
    build_cyclic_invariant,
    build_permutation_invariant,
    build_strongly_entangling,
    evaluate,
    expectation_gradient,
    fubini_study_metric,
)
from .embedding import embed_graph, embed_many
from .graphs import (
    Dataset,
    DatasetItem,
    Graph,
    build_dataset,
    find_k_cliques,
    gen_er_graph,
    load_dataset,
    make_label,
    permute_graph,
    save_dataset,
)
from .statevector import (
    Gate,
    GateKind,
    Statevector,
    apply_gate,
    expectation_z,
    expectation_z_all,
    permute_qubits,
    zero_state,
)
from .training import (
    AccuracyCurve,
    TrainConfig,
    load_curve_csv,
    loss,
    node_avg_accuracy,
    qng_step,
    run_experiment,
    save_curve_csv,
)

__version__ = "0.1.0"

__all__ = [
    "CliqueSymError",
    "ConfigurationError",
    "DataFormatError",
    "GenerationError",
    "NumericalError",
    "UsageError",
    "DEFAULT_REPETITIONS",
    "AnsatzKind",
    "CircuitTemplate",
    "build_ansatz",
    "build_cyclic_invariant",
    "build_permutation_invariant",
    "build_strongly_entangling",
    "evaluate",
    "expectation_gradient",
    "fubini_study_metric",
    "embed_graph",
    "embed_many",
    "Dataset",
    "DatasetItem",
    "Graph",
    "build_dataset",
    "find_k_cliques",
    "gen_er_graph",
    "load_dataset",
    "make_label",
    "permute_graph",
    "save_dataset",
    "Gate",
    "GateKind",
    "Statevector",
    "apply_gate",
    "expectation_z",
    "expectation_z_all",
    "permute_qubits",
    "zero_state",
    "AccuracyCurve",
    "TrainConfig",
    "load_curve_csv",
    "loss",
    "node_avg_accuracy",
    "qng_step",
    "run_experiment",
    "save_curve_csv",
    "__version__",
]
