"""Command-line front end: run experiments, sweeps, and stage inspections."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .datasets import rating_matrix, split_train_test
from .experiment import (
    CSV_HEADER,
    DATASET_DEFAULTS,
    DATASET_PARSERS,
    ExperimentConfig,
    StageError,
    effective_pca_target,
    report_csv_lines,
    run_experiment,
    sweep,
    sweep_csv_lines,
)
from .fcm import fcm_fit
from .graph import cooccurrence_similarity, threshold_adjacency, transition_matrix
from .pagerank import PprConfig, ppr_feature_matrix
from .pca import pca_fit, pca_transform

# Config-file keys, their casts, and the flags they mirror (kebab-cased).
_KEYS: dict[str, callable] = {
    "dataset": str,
    "data_path": str,
    "tau": int,
    "damping": float,
    "ppr_tol": float,
    "ppr_max_iter": int,
    "ppr_leak": str,
    "pca_target": lambda s: _int_or_float(s),
    "clusters": int,
    "fuzziness": float,
    "fcm_tol": float,
    "fcm_max_iter": int,
    "fcm_seeds": lambda s: tuple(int(x) for x in s.split(",") if x.strip()),
    "gamma": float,
    "theta": float,
    "min_overlap": int,
    "train_fraction": float,
    "seed": int,
    "out_dir": str,
}

INSPECT_STAGES = ("similarity", "adjacency", "ppr", "pca", "memberships")


def _int_or_float(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_config_file(path: str | Path) -> dict:
    """Parse `key = value` lines; `#` starts a comment; unknown keys are errors."""
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {lineno}: expected `key = value`")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEYS:
            raise ValueError(f"{path}: line {lineno}: unknown key {key!r}")
        try:
            values[key] = _KEYS[key](value)
        except ValueError as exc:
            raise ValueError(f"{path}: line {lineno}: bad value for {key!r}: {exc}") from None
    return values


def _add_key_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="key = value configuration file")
    parser.add_argument("--dataset", choices=sorted(DATASET_PARSERS))
    parser.add_argument("--data-path", metavar="FILE")
    parser.add_argument("--tau", type=int)
    parser.add_argument("--damping", type=float)
    parser.add_argument("--ppr-tol", type=float)
    parser.add_argument("--ppr-max-iter", type=int)
    parser.add_argument("--ppr-leak", choices=("teleport", "uniform"))
    parser.add_argument("--pca-target", type=_int_or_float)
    parser.add_argument("--clusters", type=int)
    parser.add_argument("--fuzziness", type=float)
    parser.add_argument("--fcm-tol", type=float)
    parser.add_argument("--fcm-max-iter", type=int)
    parser.add_argument("--fcm-seeds", type=_KEYS["fcm_seeds"], metavar="N,N,...")
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--theta", type=float)
    parser.add_argument("--min-overlap", type=int)
    parser.add_argument("--train-fraction", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out-dir", metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzycf",
        description="Fuzzy community-based collaborative filtering experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment and write its report CSV")
    _add_key_flags(run_p)

    sweep_p = sub.add_parser("sweep", help="sweep one hyperparameter axis")
    _add_key_flags(sweep_p)
    sweep_p.add_argument(
        "--axis", required=True, choices=("clusters", "gamma", "tau"),
        help="hyperparameter to vary",
    )
    sweep_p.add_argument(
        "--values", required=True, metavar="V,V,...",
        help="comma-separated axis values",
    )

    inspect_p = sub.add_parser("inspect", help="dump one pipeline stage to a file")
    inspect_p.add_argument("stage", choices=INSPECT_STAGES)
    _add_key_flags(inspect_p)
    return parser


def gather_config(args: argparse.Namespace) -> dict:
    """Merge file values and command-line flags; flags win."""
    values = read_config_file(args.config) if args.config else {}
    for key in _KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            values[key] = flag_value
    return values


def build_experiment_config(values: dict) -> ExperimentConfig:
    for required in ("dataset", "data_path"):
        if required not in values:
            raise ValueError(f"missing required key: {required}")
    ppr = PprConfig(
        damping=values.get("damping", 0.85),
        tol=values.get("ppr_tol", 1e-8),
        max_iter=values.get("ppr_max_iter", 200),
        leak_to=values.get("ppr_leak", "teleport"),
    )
    kwargs = {}
    for key in (
        "tau", "pca_target", "clusters", "fuzziness", "fcm_tol", "fcm_max_iter",
        "fcm_seeds", "gamma", "theta", "min_overlap", "train_fraction", "seed",
    ):
        if key in values:
            kwargs[key] = values[key]
    for key, preset in DATASET_DEFAULTS[values["dataset"]].items():
        kwargs.setdefault(key, preset)
    return ExperimentConfig(
        dataset=values["dataset"], data_path=values["data_path"], ppr=ppr, **kwargs
    )


def _write_atomic(path: Path, text: str) -> None:
    # No partial report files on interruption: write aside, then rename.
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _out_dir(values: dict) -> Path:
    out = Path(values.get("out_dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(args: argparse.Namespace) -> int:
    values = gather_config(args)
    cfg = build_experiment_config(values)
    report = run_experiment(cfg)
    out = _out_dir(values) / "run_report.csv"
    _write_atomic(out, "\n".join([CSV_HEADER] + report_csv_lines(report)) + "\n")
    print(f"dataset={cfg.dataset} tau={cfg.tau} clusters={cfg.clusters} "
          f"gamma={cfg.gamma} theta={cfg.theta}")
    for r in report.seed_results:
        print(f"seed {r.seed}: mae={r.mae:.6f} rmse={r.rmse:.6f} coverage={r.coverage:.6f}")
    print(f"mean mae={report.mean_mae:.6f} (std {report.std_mae:.6f}) "
          f"mean rmse={report.mean_rmse:.6f}")
    for stage, seconds in report.stage_seconds.items():
        print(f"  {stage}: {seconds:.2f}s")
    print(f"report written to {out}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    values = gather_config(args)
    cfg = build_experiment_config(values)
    axis = {"clusters": "cluster_count"}.get(args.axis, args.axis)
    sweep_values = [float(v) for v in args.values.split(",") if v.strip()]
    if not sweep_values:
        raise ValueError("sweep needs at least one value in --values")
    table = sweep(cfg, axis, sweep_values)
    out = _out_dir(values) / f"sweep_{args.axis}.csv"
    _write_atomic(out, "\n".join(sweep_csv_lines(table)) + "\n")
    for cell in table.cells:
        if cell.failed:
            print(f"{args.axis}={cell.value:g}: FAILED ({cell.error})")
        else:
            print(f"{args.axis}={cell.value:g}: mean mae={cell.report.mean_mae:.6f}")
    print(f"sweep written to {out}")
    return 0


def cmd_inspect(args: argparse.Namespace) -> int:
    values = gather_config(args)
    cfg = build_experiment_config(values)
    dataset = DATASET_PARSERS[cfg.dataset](cfg.data_path)
    train, _ = split_train_test(dataset, cfg.train_fraction, cfg.seed)
    R = rating_matrix(train)
    S = cooccurrence_similarity(R)
    out_dir = _out_dir(values)

    if args.stage == "similarity":
        coo = S.counts.tocoo()
        order = np.lexsort((coo.col, coo.row))
        lines = [f"{coo.row[k]} {coo.col[k]} {coo.data[k]}" for k in order]
        out = out_dir / "similarity.txt"
        _write_atomic(out, "\n".join(lines) + ("\n" if lines else ""))
        print(f"similarity entries written to {out}")
        return 0

    A = threshold_adjacency(S, cfg.tau)
    if args.stage == "adjacency":
        lines = [f"{i} {j}" for i, j in A.edge_list()]
        out = out_dir / "adjacency.txt"
        _write_atomic(out, "\n".join(lines) + ("\n" if lines else ""))
        print(f"edge list written to {out}")
        return 0

    features = ppr_feature_matrix(transition_matrix(A), cfg.ppr)
    if args.stage == "ppr":
        header = f"# m={features.n_users} damping={cfg.ppr.damping}"
        body = "\n".join(",".join(f"{x:.12g}" for x in row) for row in features.matrix)
        out = out_dir / "ppr.csv"
        _write_atomic(out, header + "\n" + body + "\n")
        print(f"pagerank matrix written to {out}")
        return 0

    target = effective_pca_target(cfg.pca_target, features.matrix.shape[1])
    reduced = pca_transform(pca_fit(features.matrix, target), features.matrix)
    if args.stage == "pca":
        body = "\n".join(",".join(f"{x:.12g}" for x in row) for row in reduced)
        out = out_dir / "pca.csv"
        _write_atomic(out, body + "\n")
        print(f"reduced features written to {out}")
        return 0

    model = fcm_fit(reduced, cfg.fcm(cfg.fcm_seeds[0]))
    body = "\n".join(",".join(f"{x:.12g}" for x in row) for row in model.memberships)
    out = out_dir / "memberships.csv"
    _write_atomic(out, body + "\n")
    print(f"membership matrix written to {out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "sweep": cmd_sweep, "inspect": cmd_inspect}
    try:
        return handlers[args.command](args)
    except StageError as exc:
        # The message already carries the failing stage name.
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry_point()
