"""Command-line interface: dataset generation, training runs, and reports.

Three subcommands cover the full experiment pipeline:

* ``gen-data`` samples a balanced clique/no-clique dataset and writes it
  as JSON lines;
* ``train`` runs the multi-seed experiment for one circuit family and
  writes the seed-averaged accuracy curve (plus per-seed raw curves and
  a JSON manifest with config and artifact checksums);
* ``report`` compares curve CSVs side by side and merges them into one
  plot-ready file.

Exit codes: 0 success, 1 usage or configuration error, 2 data or
generation error, 3 numerical error.  The environment variable
``CLIQUESYM_OUT_DIR`` supplies the default output directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import tempfile
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .ansatz import AnsatzKind
from .errors import (
    ConfigurationError,
    DataFormatError,
    GenerationError,
    NumericalError,
    UsageError,
)
from .graphs import build_dataset, load_dataset, save_dataset
from .training import (
    AccuracyCurve,
    TrainConfig,
    load_curve_csv,
    run_experiment,
    save_curve_csv,
)

OUT_DIR_ENV = "CLIQUESYM_OUT_DIR"

#: --ansatz choices, mapped to circuit families
ANSATZ_CHOICES = {
    "perm": AnsatzKind.PERMUTATION_INVARIANT,
    "cyclic": AnsatzKind.CYCLIC_INVARIANT,
    "standard": AnsatzKind.STRONGLY_ENTANGLING,
}

#: tags used in output file names, keyed by circuit family: the symmetric
#: group for the permutation-invariant circuit, the cyclic group for the
#: cyclic-invariant one, and "Entanglement" for the unrestricted layers
FILE_TAGS = {
    AnsatzKind.PERMUTATION_INVARIANT: "Sn",
    AnsatzKind.CYCLIC_INVARIANT: "Cn",
    AnsatzKind.STRONGLY_ENTANGLING: "Entanglement",
}


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports problems through the error taxonomy."""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="cliquesym",
        description="Train symmetry-restricted variational circuits to label "
        "clique membership on random graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    gen = sub.add_parser(
        "gen-data",
        help="sample a balanced clique/no-clique graph dataset",
        description="Sample random graphs, half containing a clique of the "
        "requested size and half not, and write them as JSON lines.",
    )
    gen.add_argument("--qubits", type=int, required=True, help="number of graph nodes (= qubits)")
    gen.add_argument("--clique", type=int, required=True, help="clique size that defines the positive class")
    gen.add_argument("--size", type=int, default=3000, help="total number of graphs (default %(default)s)")
    gen.add_argument("--seed", type=int, default=0, help="dataset seed (default %(default)s)")
    gen.add_argument(
        "--edge-prob-range",
        type=float,
        nargs=2,
        default=(0.3, 0.9),
        metavar=("LO", "HI"),
        help="each graph draws its edge probability uniformly from [LO, HI] (default %(default)s)",
    )
    gen.add_argument("--out", help="output file (default: derived name inside --out-dir)")
    gen.add_argument("--out-dir", help=f"output directory (default: ${OUT_DIR_ENV} or .)")
    gen.set_defaults(func=cmd_gen_data)

    train = sub.add_parser(
        "train",
        help="run the multi-seed training experiment for one circuit family",
        description="Train one circuit family with quantum natural gradient, "
        "once per seed, and write the seed-averaged validation accuracy "
        "curve. The dataset file fixes the problem (nodes, clique size, edge "
        "probabilities, dataset size); each seed regenerates its own dataset "
        "of that shape.",
    )
    train.add_argument(
        "--ansatz",
        required=True,
        choices=sorted(ANSATZ_CHOICES),
        help="circuit family: perm (permutation-invariant), cyclic "
        "(cyclic-invariant), or standard (strongly entangling)",
    )
    train.add_argument("--data", required=True, help="dataset file from gen-data")
    train.add_argument("--epochs", type=int, default=50, help="training epochs (default %(default)s)")
    train.add_argument(
        "--seeds", type=int, default=10, help="number of runs, using seeds 0..N-1 (default %(default)s)"
    )
    train.add_argument(
        "--repetitions",
        type=int,
        default=None,
        help="layer repetitions (default: the family's standard budget)",
    )
    train.add_argument("--train-size", type=int, default=100, help="graphs per epoch (default %(default)s)")
    train.add_argument("--batch-size", type=int, default=20, help="mini-batch size (default %(default)s)")
    train.add_argument(
        "--learning-rate", "--lr", type=float, default=0.05, help="step size (default %(default)s)"
    )
    train.add_argument(
        "--metric-regularizer",
        "--reg",
        type=float,
        default=1e-2,
        help="ridge added to the metric before solving (default %(default)s)",
    )
    train.add_argument(
        "--init-scale",
        type=float,
        default=0.1,
        help="parameters start uniform in [-s, s] (default %(default)s)",
    )
    train.add_argument(
        "--resample-each-epoch",
        action="store_true",
        help="redraw the training subset every epoch instead of fixing it",
    )
    train.add_argument("--quiet", action="store_true", help="suppress per-epoch progress lines")
    train.add_argument("--out-dir", help=f"output directory (default: ${OUT_DIR_ENV} or .)")
    train.set_defaults(func=cmd_train)

    report = sub.add_parser(
        "report",
        help="compare accuracy-curve CSVs and merge them for plotting",
        description="Print final-epoch accuracies side by side and write one "
        "merged CSV with a column pair per input curve.",
    )
    report.add_argument("csvs", nargs="+", metavar="CSV", help="curve files from train")
    report.add_argument("--out", help="merged CSV path (default: curves_merged.csv inside --out-dir)")
    report.add_argument("--out-dir", help=f"output directory (default: ${OUT_DIR_ENV} or .)")
    report.set_defaults(func=cmd_report)

    return parser


def _resolve_out_dir(arg) -> str:
    out_dir = arg or os.environ.get(OUT_DIR_ENV) or "."
    os.makedirs(out_dir, exist_ok=True)
    return out_dir


def _atomic_write_text(path: str, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def cmd_gen_data(args) -> int:
    out_dir = _resolve_out_dir(args.out_dir)
    path = args.out or os.path.join(
        out_dir,
        f"dataset_{args.qubits}_qubits_clique_{args.clique}_seed_{args.seed}.jsonl",
    )
    dataset = build_dataset(
        args.qubits,
        args.clique,
        args.size,
        tuple(args.edge_prob_range),
        args.seed,
    )
    save_dataset(dataset, path)
    with_clique, without = dataset.class_counts()
    print(
        f"wrote {dataset.size} graphs ({with_clique} with a {args.clique}-clique, "
        f"{without} without) to {path}"
    )
    return 0


def cmd_train(args) -> int:
    out_dir = _resolve_out_dir(args.out_dir)
    dataset = load_dataset(args.data)
    kind = ANSATZ_CHOICES[args.ansatz]
    config = TrainConfig(
        ansatz_kind=kind,
        n_qubits=dataset.n_nodes,
        clique_size=dataset.clique_size,
        repetitions=args.repetitions,
        epochs=args.epochs,
        train_size=args.train_size,
        dataset_size=dataset.size,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        metric_regularizer=args.metric_regularizer,
        init_scale=args.init_scale,
        edge_prob_range=dataset.edge_prob_range,
        seeds=tuple(range(args.seeds)),
        resample_each_epoch=args.resample_each_epoch,
    )
    started = _utc_now()

    progress = None
    if not args.quiet:
        def progress(seed, epoch, accuracy):
            print(
                f"seed {seed} epoch {epoch}/{config.epochs} "
                f"validation accuracy {accuracy:.4f}",
                flush=True,
            )

    curve = run_experiment(config, progress=progress)

    tag = FILE_TAGS[kind]
    n = config.n_qubits
    average_name = f"Accuracy_{tag}_Average_{n}_qubits.csv"
    save_curve_csv(curve, os.path.join(out_dir, average_name))
    artifact_names = [average_name]
    for row, seed in enumerate(config.seeds):
        seed_curve = AccuracyCurve(
            epochs=curve.epochs,
            node_avg=curve.per_seed[row],
            node_avg_error=np.zeros_like(curve.per_seed[row]),
        )
        seed_name = f"Accuracy_{tag}_seed_{seed}_{n}_qubits.csv"
        save_curve_csv(seed_curve, os.path.join(out_dir, seed_name))
        artifact_names.append(seed_name)

    config_dict = dataclasses.asdict(config)
    config_dict["ansatz_kind"] = kind.value
    config_dict["seeds"] = list(config.seeds)
    config_dict["edge_prob_range"] = list(config.edge_prob_range)
    manifest = {
        "tool": "cliquesym",
        "version": __version__,
        "command": "train",
        "started": started,
        "finished": _utc_now(),
        "dataset_file": os.path.abspath(args.data),
        "out_dir": os.path.abspath(out_dir),
        "config": config_dict,
        "artifacts": {
            name: _sha256(os.path.join(out_dir, name)) for name in artifact_names
        },
    }
    manifest_name = f"Accuracy_{tag}_Average_{n}_qubits.manifest.json"
    _atomic_write_text(
        os.path.join(out_dir, manifest_name), json.dumps(manifest, indent=2) + "\n"
    )

    final, half_width = curve.final_accuracy()
    print(
        f"final validation accuracy {final:.4f} +/- {half_width:.4f} "
        f"over {len(config.seeds)} seed(s)"
    )
    print(f"wrote {average_name} and {len(config.seeds)} per-seed curve(s) to {out_dir}")
    return 0


def cmd_report(args) -> int:
    out_dir = _resolve_out_dir(args.out_dir)
    curves = [(path, load_curve_csv(path)) for path in args.csvs]

    n_epochs = min(curve.n_epochs for _, curve in curves)
    if any(curve.n_epochs != n_epochs for _, curve in curves):
        longest = max(curve.n_epochs for _, curve in curves)
        print(
            f"warning: epoch ranges differ (min {n_epochs}, max {longest}); "
            f"truncating all curves to {n_epochs} epochs",
            file=sys.stderr,
        )
    base = curves[0][1].epochs[:n_epochs]
    for path, curve in curves[1:]:
        if not np.array_equal(curve.epochs[:n_epochs], base):
            raise DataFormatError(
                f"{path}: epoch column disagrees with {curves[0][0]} over the shared range"
            )

    labels = [os.path.splitext(os.path.basename(path))[0] for path, _ in curves]
    width = max(len(label) for label in labels) + 2
    print(f"{'curve':<{width}}{'epochs':>7}  {'final':>8}  {'ci95':>8}")
    for label, (_, curve) in zip(labels, curves):
        print(
            f"{label:<{width}}{n_epochs:>7}  "
            f"{curve.node_avg[n_epochs - 1]:>8.4f}  "
            f"{curve.node_avg_error[n_epochs - 1]:>8.4f}"
        )

    merged_path = args.out or os.path.join(out_dir, "curves_merged.csv")
    header = ["Epoch"]
    columns = [base.astype(np.int64)]
    for label, (_, curve) in zip(labels, curves):
        header.extend([f"{label}_Node_Avg", f"{label}_Node_Avg_Error"])
        columns.append(curve.node_avg[:n_epochs])
        columns.append(curve.node_avg_error[:n_epochs])
    lines = [",".join(header)]
    for i in range(n_epochs):
        row = [str(int(columns[0][i]))]
        row.extend(repr(float(col[i])) for col in columns[1:])
        lines.append(",".join(row))
    _atomic_write_text(merged_path, "\n".join(lines) + "\n")
    print(f"merged {len(curves)} curve(s) into {merged_path}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GenerationError, DataFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
