"""Quantum natural gradient training and the multi-seed labeling experiment.

The model predicts a node label from the Z expectation of the matching
qubit after the trained circuit acts on the embedded graph.  Training
minimizes the mean squared error between those expectations and the
+-1 targets, preconditioning each gradient step with the (regularized)
Fubini-Study metric.  An experiment repeats training over several seeds,
each with its own freshly generated dataset, and aggregates validation
accuracy per epoch into a mean curve with a 95% confidence half-width.
"""

from __future__ import annotations

import csv
import os
import tempfile
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .ansatz import (
    DEFAULT_REPETITIONS,
    AnsatzKind,
    CircuitTemplate,
    build_ansatz,
    evaluate_batch,
    predictions_gradients_metric,
)
from .embedding import embed_many
from .errors import ConfigurationError, DataFormatError, NumericalError, UsageError
from .graphs import build_dataset
from .statevector import expectation_z_all

CSV_HEADER = ("Epoch", "Node_Avg", "Node_Avg_Error")

#: z-score of the two-sided 95% confidence interval
CI_Z = 1.96


@dataclass(frozen=True)
class TrainConfig:
    """Everything a full experiment run depends on.

    ``repetitions=None`` means the ansatz default.  ``seeds`` double as
    dataset seeds: seed s regenerates its own dataset, takes the first
    ``train_size`` (balanced) items for training and the rest for
    validation.  With ``resample_each_epoch`` the training subset is
    redrawn from the whole dataset at every epoch instead of being fixed.
    """

    ansatz_kind: AnsatzKind
    n_qubits: int
    clique_size: int
    repetitions: int | None = None
    epochs: int = 50
    train_size: int = 100
    dataset_size: int = 3000
    batch_size: int = 20
    learning_rate: float = 0.05
    metric_regularizer: float = 1e-2
    init_scale: float = 0.1
    edge_prob_range: tuple[float, float] = (0.3, 0.9)
    seeds: tuple[int, ...] = tuple(range(10))
    resample_each_epoch: bool = False

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(
            self, "edge_prob_range", tuple(float(p) for p in self.edge_prob_range)
        )
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be >= 1, got {self.epochs}")
        if not 1 <= self.train_size < self.dataset_size:
            raise ConfigurationError(
                f"need 1 <= train_size < dataset_size, got {self.train_size} / {self.dataset_size}"
            )
        if not 1 <= self.batch_size <= self.train_size:
            raise ConfigurationError(
                f"batch_size must be in [1, train_size], got {self.batch_size}"
            )
        if self.learning_rate <= 0:
            raise ConfigurationError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.metric_regularizer <= 0:
            raise ConfigurationError(
                f"metric_regularizer must be positive, got {self.metric_regularizer}"
            )
        if self.init_scale < 0:
            raise ConfigurationError(f"init_scale must be >= 0, got {self.init_scale}")
        if not self.seeds:
            raise ConfigurationError("seeds must be nonempty")
        if not 1 <= self.clique_size <= self.n_qubits:
            raise ConfigurationError(
                f"clique_size must be in [1, {self.n_qubits}], got {self.clique_size}"
            )

    def effective_repetitions(self) -> int:
        if self.repetitions is not None:
            return self.repetitions
        return DEFAULT_REPETITIONS[self.ansatz_kind]

    def build_template(self) -> CircuitTemplate:
        return build_ansatz(self.ansatz_kind, self.n_qubits, self.effective_repetitions())


@dataclass
class AccuracyCurve:
    """Per-epoch validation accuracy, seed-averaged with a 95% CI half-width."""

    epochs: np.ndarray  # 1..E
    node_avg: np.ndarray
    node_avg_error: np.ndarray
    per_seed: np.ndarray | None = None  # (n_seeds, E) raw curves

    def __post_init__(self):
        self.epochs = np.asarray(self.epochs, dtype=np.int64)
        self.node_avg = np.asarray(self.node_avg, dtype=np.float64)
        self.node_avg_error = np.asarray(self.node_avg_error, dtype=np.float64)
        if not (
            self.epochs.shape == self.node_avg.shape == self.node_avg_error.shape
        ):
            raise UsageError("curve columns must have equal length")
        if self.epochs.size and np.any(np.diff(self.epochs) <= 0):
            raise UsageError("epochs must be strictly increasing")

    @property
    def n_epochs(self) -> int:
        return self.epochs.size

    def final_accuracy(self) -> tuple[float, float]:
        return float(self.node_avg[-1]), float(self.node_avg_error[-1])


def loss(predictions, label) -> float:
    """Mean squared error between predicted expectations and +-1 targets."""
    predictions = np.asarray(predictions, dtype=np.float64)
    label = np.asarray(label, dtype=np.float64)
    if predictions.shape != label.shape:
        raise UsageError(
            f"predictions shape {predictions.shape} != label shape {label.shape}"
        )
    return float(np.mean((predictions - label) ** 2))


def _solve_preconditioned(metric: np.ndarray, reg: float, grad: np.ndarray) -> np.ndarray:
    system = metric + reg * np.eye(metric.shape[0])
    try:
        return cho_solve(cho_factor(system), grad)
    except LinAlgError as exc:
        eigs = np.linalg.eigvalsh(system)
        raise NumericalError(
            f"regularized metric not positive definite ({exc}); "
            f"eigenvalue range [{eigs.min():.3e}, {eigs.max():.3e}], regularizer {reg}"
        ) from None


def _gradient_and_metric(template, params, inputs, labels):
    z, dz, metrics = predictions_gradients_metric(template, params, inputs)
    n_items, n_qubits = z.shape
    # d(MSE)/dtheta = mean over items of (2/n) sum_q (z_q - y_q) dz_q
    weights = (2.0 / n_qubits) * (z - labels)
    grad = np.einsum("bq,bqp->p", weights, dz) / n_items
    return grad, metrics.mean(axis=0)


def batch_loss_gradient(template: CircuitTemplate, params, inputs, labels) -> np.ndarray:
    """Gradient of the batch-mean MSE loss w.r.t. the parameter classes."""
    params = np.asarray(params, dtype=np.float64)
    grad, _ = _gradient_and_metric(template, params, inputs, np.asarray(labels, dtype=np.float64))
    return grad


def _qng_step_arrays(
    template: CircuitTemplate,
    params: np.ndarray,
    inputs: np.ndarray,
    labels: np.ndarray,
    lr: float,
    reg: float,
) -> np.ndarray:
    grad, metric = _gradient_and_metric(template, params, inputs, labels)
    return params - lr * _solve_preconditioned(metric, reg, grad)


def qng_step(template: CircuitTemplate, params, batch, lr: float, reg: float) -> np.ndarray:
    """One natural-gradient update on a batch of (graph, label) pairs.

    Gradient and metric are both batch means; the update solves
    ``(metric + reg I) x = grad`` and moves ``params`` by ``-lr x``.
    """
    if not batch:
        raise UsageError("qng_step needs a nonempty batch")
    params = np.asarray(params, dtype=np.float64)
    inputs = embed_many([g for g, _ in batch])
    labels = np.stack([np.asarray(lbl, dtype=np.float64) for _, lbl in batch])
    return _qng_step_arrays(template, params, inputs, labels, lr, reg)


def _accuracy_from_arrays(template, params, inputs, labels) -> float:
    outs = evaluate_batch(template, params, inputs)
    z = expectation_z_all(outs, template.n_qubits)
    # a node counts as correct only when the expectation has the label's
    # strict sign, so an exact zero is always wrong
    return float(np.mean(z * labels > 0))


def node_avg_accuracy(template: CircuitTemplate, params, dataset) -> float:
    """Fraction of correctly signed node predictions, averaged over items."""
    if not dataset:
        raise UsageError("node_avg_accuracy needs a nonempty dataset")
    params = np.asarray(params, dtype=np.float64)
    inputs = embed_many([g for g, _ in dataset])
    labels = np.stack([np.asarray(lbl, dtype=np.float64) for _, lbl in dataset])
    return _accuracy_from_arrays(template, params, inputs, labels)


def run_experiment(config: TrainConfig, progress=None) -> AccuracyCurve:
    """Train once per seed and aggregate validation accuracy per epoch.

    Each seed builds its own dataset, initializes parameters uniformly in
    ``[-init_scale, init_scale]``, and runs ``epochs`` passes of
    mini-batch natural-gradient steps over the training subset, recording
    validation accuracy after every epoch.  ``progress``, if given, is
    called as ``progress(seed, epoch, accuracy)`` after each epoch.
    Deterministic given the config.
    """
    template = config.build_template()
    n_seeds = len(config.seeds)
    per_seed = np.empty((n_seeds, config.epochs))

    for row, seed in enumerate(config.seeds):
        dataset = build_dataset(
            config.n_qubits,
            config.clique_size,
            config.dataset_size,
            config.edge_prob_range,
            seed,
        )
        pairs = dataset.pairs()
        all_inputs = embed_many([g for g, _ in pairs])
        all_labels = np.stack([lbl for _, lbl in pairs]).astype(np.float64)
        train_inputs = all_inputs[: config.train_size]
        train_labels = all_labels[: config.train_size]
        val_inputs = all_inputs[config.train_size :]
        val_labels = all_labels[config.train_size :]

        rng = np.random.default_rng(np.random.SeedSequence((seed, 1)))
        params = rng.uniform(-config.init_scale, config.init_scale, template.n_params)

        for epoch in range(1, config.epochs + 1):
            if config.resample_each_epoch:
                picks = rng.choice(config.dataset_size, config.train_size, replace=False)
                train_inputs = all_inputs[picks]
                train_labels = all_labels[picks]
            for start in range(0, config.train_size, config.batch_size):
                stop = start + config.batch_size
                params = _qng_step_arrays(
                    template,
                    params,
                    train_inputs[start:stop],
                    train_labels[start:stop],
                    config.learning_rate,
                    config.metric_regularizer,
                )
            accuracy = _accuracy_from_arrays(template, params, val_inputs, val_labels)
            per_seed[row, epoch - 1] = accuracy
            if progress is not None:
                progress(seed, epoch, accuracy)

    mean = per_seed.mean(axis=0)
    if n_seeds > 1:
        error = CI_Z * per_seed.std(axis=0, ddof=1) / np.sqrt(n_seeds)
    else:
        error = np.zeros(config.epochs)
    return AccuracyCurve(
        epochs=np.arange(1, config.epochs + 1),
        node_avg=mean,
        node_avg_error=error,
        per_seed=per_seed,
    )


# ---------------------------------------------------------------------------
# curve CSV format (the plot-ready artifact)

def save_curve_csv(curve: AccuracyCurve, path) -> None:
    """Write ``Epoch,Node_Avg,Node_Avg_Error`` rows, atomically.

    Floats are written with ``repr`` so reading the file back reproduces
    them bit-exactly.
    """
    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for epoch, avg, err in zip(curve.epochs, curve.node_avg, curve.node_avg_error):
                writer.writerow([int(epoch), repr(float(avg)), repr(float(err))])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_curve_csv(path) -> AccuracyCurve:
    """Read a curve written by :func:`save_curve_csv` (per-seed data is not stored)."""
    path = os.fspath(path)
    epochs, avgs, errs = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty curve file") from None
        if tuple(header) != CSV_HEADER:
            raise DataFormatError(
                f"{path}: expected header {','.join(CSV_HEADER)}, got {','.join(header)}"
            )
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                epoch = int(row[0])
                avg = float(row[1])
                err = float(row[2])
            except (IndexError, ValueError) as exc:
                raise DataFormatError(f"{path}: row {row_number}: {exc}") from None
            epochs.append(epoch)
            avgs.append(avg)
            errs.append(err)
    if not epochs:
        raise DataFormatError(f"{path}: no data rows")
    try:
        return AccuracyCurve(np.array(epochs), np.array(avgs), np.array(errs))
    except UsageError as exc:
        raise DataFormatError(f"{path}: {exc}") from None
