"""Command-line front end.

Subcommands: gen (synthetic datasets), fit (any variant), transform,
reconstruct, sweep (metric over the mixing-factor grid), experiments (the
desk-scale benchmark bundle). Every run writes exactly one JSON manifest
recording the resolved configuration, input hashes, and output paths, and
reruns with identical inputs reproduce outputs byte for byte.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure. The default seed comes from the ROWEIS_SEED environment variable.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__, datasets, dual, evaluate, experiments, kernel_rda, kernels, persist, rda
from .exceptions import ConfigError, DataError, NumericalError

SEED_ENV = "ROWEIS_SEED"

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def _default_seed() -> int:
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as handle:
            for chunk in iter(lambda: handle.read(1 << 16), b""):
                digest.update(chunk)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    return digest.hexdigest()


def _write_manifest(command: str, config: dict, seed, inputs: list, outputs: list) -> None:
    manifest = {
        "command": command,
        "config": config,
        "seed": seed,
        "inputs": {path: _sha256(path) for path in inputs},
        "outputs": outputs,
        "version": __version__,
    }
    path = outputs[0] + ".manifest.json"
    try:
        with open(path, "w") as handle:
            json.dump(manifest, handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as exc:
        raise DataError(f"cannot write manifest {path}: {exc}") from None


def _write_rows(path: str, header: list, rows) -> None:
    try:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None


def _float_cells(values) -> list:
    return [repr(float(v)) for v in values]


# ---------------------------------------------------------------- kernels

def _kernel_from_args(family: str, gamma, degree, offset) -> kernels.KernelSpec:
    return kernels.KernelSpec(
        family=family,
        gamma=gamma,
        degree=degree if degree is not None else 2,
        offset=offset if offset is not None else 1.0,
    )


def _label_kernel_from_args(args) -> kernels.KernelSpec | None:
    if args.label_kernel is None:
        return None
    return _kernel_from_args(args.label_kernel, args.label_gamma, args.label_degree, args.label_offset)


# ---------------------------------------------------------------- gen

def cmd_gen(args) -> int:
    seed = args.seed
    if args.generator == "xor":
        ds = datasets.gen_xor(args.n, seed, margin=args.margin)
        config = {"generator": "xor", "n": args.n, "margin": args.margin}
    elif args.generator == "rings":
        ds = datasets.gen_rings(args.n, seed, inner=args.inner, outer=args.outer, noise=args.noise)
        config = {
            "generator": "rings",
            "n": args.n,
            "inner": args.inner,
            "outer": args.outer,
            "noise": args.noise,
        }
    elif args.generator == "bench":
        if args.id is None:
            raise ConfigError("gen bench requires --id 1|2|3")
        ds = datasets.gen_regression_benchmark(args.id, args.n, seed, noise_scale=args.noise_scale)
        config = {"generator": "bench", "id": args.id, "n": args.n, "noise_scale": args.noise_scale}
    else:
        raise ConfigError(f"unknown generator {args.generator!r}")
    out = args.out or f"{args.generator}.csv"
    try:
        datasets.save_csv(out, ds.X, ds.y)
    except OSError as exc:
        raise DataError(f"cannot write {out}: {exc}") from None
    _write_manifest("gen", config, seed, [], [out])
    print(f"wrote {ds.n} samples ({ds.kind}) to {out}")
    return 0


# ---------------------------------------------------------------- fit

def _load_features(path: str, label_col):
    x, y, _ = datasets.load_csv(path, label_col)
    return x, y


def _print_spectrum(values) -> None:
    values = np.asarray(values, dtype=float)
    total = values.sum()
    print(f"{'component':>9}  {'eigenvalue':>14}  {'share':>7}")
    for i, v in enumerate(values, start=1):
        share = v / total if total > 0 else 0.0
        print(f"{i:>9}  {v:>14.6e}  {share:>7.4f}")


def cmd_fit(args) -> int:
    x, y = _load_features(args.data, args.label_col)
    variant = args.variant
    r1 = args.r1 if args.r1 is not None else (1.0 if variant == "kernel-spca" else 0.0)
    r2 = args.r2 if args.r2 is not None else 0.0

    if variant == "dual" and r2 != 0.0:
        raise ConfigError("the dual variant requires r2=0")
    if variant == "kernel-pca" and (r1 != 0.0 or r2 != 0.0):
        raise ConfigError("kernel-pca is the r1=0, r2=0 corner; drop --r1/--r2 or use --variant kernel")
    if variant == "kernel-spca" and (r1 != 1.0 or r2 != 0.0):
        raise ConfigError("kernel-spca is the r1=1, r2=0 corner; drop --r1/--r2 or use --variant kernel")

    label_kernel = _label_kernel_from_args(args)
    data_kernel = _kernel_from_args(args.kernel, args.gamma, args.degree, args.offset)
    config = rda.RoweisConfig(r1=r1, r2=r2, p=args.p, label_kernel=label_kernel, robust=args.robust)

    if variant == "primal":
        model = rda.fit(x, y, config)
        spectrum = model.eigvals
    elif variant == "dual":
        model = dual.fit_dual(x, y, r1, p=args.p, label_kernel=label_kernel)
        spectrum = model.sigma**2
    elif variant == "kernel":
        model = kernel_rda.fit_direct(x, y, config, data_kernel)
        spectrum = model.eigvals
    elif variant == "kernel-pca":
        model = kernel_rda.fit_kernel_pca(x, data_kernel, p=args.p)
        spectrum = model.eigvals
    elif variant == "kernel-spca":
        model = kernel_rda.fit_kernel_spca(x, y, data_kernel, label_kernel, p=args.p)
        spectrum = model.eigvals
    else:
        raise ConfigError(f"unknown variant {variant!r}")

    out = args.out or "model.txt"
    try:
        persist.save_model(model, out)
    except OSError as exc:
        raise DataError(f"cannot write {out}: {exc}") from None
    config_dict = {
        "variant": variant,
        "r1": r1,
        "r2": r2,
        "p": args.p,
        "robust": args.robust,
        "kernel": data_kernel.to_dict(),
        "label_kernel": label_kernel.to_dict() if label_kernel else None,
        "label_col": args.label_col,
    }
    _write_manifest("fit", config_dict, None, [args.data], [out])
    for note in getattr(model, "notes", ()):
        print(f"note: {note}")
    _print_spectrum(spectrum)
    print(f"wrote model to {out}")
    return 0


# ---------------------------------------------------------------- transform / reconstruct

def _project_any(model, x):
    if isinstance(model, rda.RdaModel):
        return rda.project(model, x)
    if isinstance(model, dual.DualRdaModel):
        return dual.project_dual(model, x)
    return kernel_rda.project(model, x)


def cmd_transform(args) -> int:
    model = persist.load_model(args.model)
    x, _ = _load_features(args.data, args.label_col)
    emb = _project_any(model, x)
    out = args.out or "embedding.csv"
    header = [f"e{i + 1}" for i in range(emb.shape[0])]
    _write_rows(out, header, (_float_cells(emb[:, j]) for j in range(emb.shape[1])))
    _write_manifest("transform", {"label_col": args.label_col}, None, [args.model, args.data], [out])
    print(f"wrote {emb.shape[1]} embeddings ({emb.shape[0]} dimensions) to {out}")
    return 0


def cmd_reconstruct(args) -> int:
    model = persist.load_model(args.model)
    if isinstance(model, kernel_rda.KernelRdaModel):
        raise ConfigError(
            "kernel models cannot reconstruct: the mapped training data Phi(X) "
            "exist only through inner products and are not available"
        )
    x, _ = _load_features(args.data, args.label_col)
    rec = rda.reconstruct(model, x) if isinstance(model, rda.RdaModel) else dual.reconstruct_dual(model, x)
    out = args.out or "reconstruction.csv"
    header = [f"f{i + 1}" for i in range(rec.shape[0])]
    _write_rows(out, header, (_float_cells(rec[:, j]) for j in range(rec.shape[1])))
    _write_manifest("reconstruct", {"label_col": args.label_col}, None, [args.model, args.data], [out])
    print(f"wrote {rec.shape[1]} reconstructions to {out}")
    return 0


# ---------------------------------------------------------------- sweep

def _metric_for_split(variant, train, test, r1, r2, p, data_kernel, label_kernel):
    config = rda.RoweisConfig(r1=r1, r2=r2, p=p, label_kernel=label_kernel)
    if variant == "primal":
        model = rda.fit(train.X, train.y, config)
        emb_train, emb_test = rda.project(model, train.X), rda.project(model, test.X)
    else:
        model = kernel_rda.fit_direct(train.X, train.y, config, data_kernel)
        emb_train, emb_test = kernel_rda.project(model, train.X), kernel_rda.project(model, test.X)
    if train.kind == "classification":
        report = evaluate.knn_classify(emb_train, train.y, emb_test, test.y, k=1)
    else:
        report = evaluate.linear_regression_rmse(emb_train, train.y, emb_test, test.y)
    return report.metric, report.value


def cmd_sweep(args) -> int:
    if args.grid < 2:
        raise ConfigError(f"--grid must be at least 2 per axis, got {args.grid}")
    x, y = _load_features(args.data, args.label_col)
    if y is None:
        raise ConfigError("sweep needs labels; pass --label-col")
    kind = "classification" if kernels.is_categorical(y) else "regression"
    ds = datasets.Dataset(X=x, y=y, kind=kind, seed=args.seed)
    train, test = datasets.train_test_split(ds, args.train_fraction, args.seed)

    data_kernel = _kernel_from_args(args.kernel, args.gamma, args.degree, args.offset)
    if args.variant == "kernel":
        data_kernel = kernels.resolve_gamma(data_kernel, train.X)
    label_kernel = _label_kernel_from_args(args)

    values = np.linspace(0.0, 1.0, args.grid)
    rows = []
    for r1 in values:
        for r2 in values:
            metric, value = _metric_for_split(
                args.variant, train, test, float(r1), float(r2), args.p, data_kernel, label_kernel
            )
            s = rda.supervision_level(float(r1), float(r2))
            rows.append([repr(float(r1)), repr(float(r2)), repr(s), metric, repr(value)])
    out = args.out or "sweep.csv"
    _write_rows(out, ["r1", "r2", "s", "metric", "value"], rows)
    config_dict = {
        "variant": args.variant,
        "grid": args.grid,
        "p": args.p,
        "train_fraction": args.train_fraction,
        "kernel": data_kernel.to_dict(),
        "label_col": args.label_col,
    }
    _write_manifest("sweep", config_dict, args.seed, [args.data], [out])
    print(f"wrote {len(rows)} grid points to {out}")
    return 0


# ---------------------------------------------------------------- experiments

def cmd_experiments(args) -> int:
    out_dir = args.out_dir
    panel_dir = os.path.join(out_dir, "panels")
    try:
        os.makedirs(panel_dir, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create {out_dir}: {exc}") from None

    cells = experiments.regression_benchmark_table(
        repetitions=args.reps, n=args.n, base_seed=args.seed
    )
    table_csv = os.path.join(out_dir, "regression_table.csv")
    rows = [
        [cell.method, repr(cell.r1), str(cell.bench_id), repr(cell.report.mean), repr(cell.report.std)]
        for cell in cells
    ]
    _write_rows(table_csv, ["method", "r1", "benchmark", "rmse_mean", "rmse_std"], rows)
    table_txt = os.path.join(out_dir, "regression_table.txt")
    with open(table_txt, "w") as handle:
        handle.write("\n".join(experiments.benchmark_table_lines(cells)) + "\n")

    outputs = [table_csv, table_txt]
    for name in ("xor", "rings"):
        for panel in experiments.embedding_panels(name, n=args.panel_n, seed=args.seed):
            path = os.path.join(panel_dir, f"{name}_r1_{panel.r1:g}_r2_{panel.r2:g}.csv")
            header = ["split", "label"] + [f"e{i + 1}" for i in range(panel.train_emb.shape[0])]
            out_rows = []
            for j in range(panel.train_emb.shape[1]):
                out_rows.append(["train", str(panel.train_y[j])] + _float_cells(panel.train_emb[:, j]))
            for j in range(panel.test_emb.shape[1]):
                out_rows.append(["test", str(panel.test_y[j])] + _float_cells(panel.test_emb[:, j]))
            _write_rows(path, header, out_rows)
            outputs.append(path)

    config_dict = {"reps": args.reps, "n": args.n, "panel_n": args.panel_n}
    _write_manifest("experiments", config_dict, args.seed, [], [os.path.join(out_dir, "run")])
    print("\n".join(experiments.benchmark_table_lines(cells)))
    print(f"wrote {len(outputs)} files under {out_dir}")
    return 0


# ---------------------------------------------------------------- parser

def _add_kernel_flags(parser) -> None:
    parser.add_argument("--kernel", default="rbf", choices=["linear", "rbf", "polynomial"],
                        help="data kernel family (kernel variants)")
    parser.add_argument("--gamma", type=float, default=None, help="rbf bandwidth; default median heuristic")
    parser.add_argument("--degree", type=int, default=None, help="polynomial degree")
    parser.add_argument("--offset", type=float, default=None, help="polynomial offset")
    parser.add_argument("--label-kernel", default=None,
                        choices=["delta", "linear", "rbf", "polynomial"],
                        help="label kernel family; default delta for classes, rbf for targets")
    parser.add_argument("--label-gamma", type=float, default=None)
    parser.add_argument("--label-degree", type=int, default=None)
    parser.add_argument("--label-offset", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roweis",
        description="Two-factor generalized subspace learning toolkit",
    )
    parser.add_argument("--version", action="version", version=f"roweis {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic dataset CSV")
    p_gen.add_argument("generator", choices=["xor", "rings", "bench"])
    p_gen.add_argument("--n", type=int, default=400)
    p_gen.add_argument("--seed", type=int, default=_default_seed())
    p_gen.add_argument("--out", default=None)
    p_gen.add_argument("--id", type=int, default=None, help="benchmark id (bench only)")
    p_gen.add_argument("--margin", type=float, default=datasets.XOR_MARGIN)
    p_gen.add_argument("--inner", type=float, default=datasets.RING_INNER)
    p_gen.add_argument("--outer", type=float, default=datasets.RING_OUTER)
    p_gen.add_argument("--noise", type=float, default=datasets.RING_NOISE)
    p_gen.add_argument("--noise-scale", type=float, default=1.0)
    p_gen.set_defaults(func=cmd_gen)

    p_fit = sub.add_parser("fit", help="fit a subspace model")
    p_fit.add_argument("--data", required=True)
    p_fit.add_argument("--label-col", default=None)
    p_fit.add_argument("--variant", default="primal",
                       choices=["primal", "dual", "kernel", "kernel-pca", "kernel-spca"])
    p_fit.add_argument("--r1", type=float, default=None)
    p_fit.add_argument("--r2", type=float, default=None)
    p_fit.add_argument("--p", type=int, default=None)
    p_fit.add_argument("--robust", action="store_true")
    p_fit.add_argument("--out", default=None)
    _add_kernel_flags(p_fit)
    p_fit.set_defaults(func=cmd_fit)

    p_tr = sub.add_parser("transform", help="embed data with a fitted model")
    p_tr.add_argument("--model", required=True)
    p_tr.add_argument("--data", required=True)
    p_tr.add_argument("--label-col", default=None)
    p_tr.add_argument("--out", default=None)
    p_tr.set_defaults(func=cmd_transform)

    p_rc = sub.add_parser("reconstruct", help="map embedded data back to input space")
    p_rc.add_argument("--model", required=True)
    p_rc.add_argument("--data", required=True)
    p_rc.add_argument("--label-col", default=None)
    p_rc.add_argument("--out", default=None)
    p_rc.set_defaults(func=cmd_reconstruct)

    p_sw = sub.add_parser("sweep", help="evaluate a metric over the (r1, r2) grid")
    p_sw.add_argument("--data", required=True)
    p_sw.add_argument("--label-col", required=True)
    p_sw.add_argument("--variant", default="primal", choices=["primal", "kernel"])
    p_sw.add_argument("--grid", type=int, default=3)
    p_sw.add_argument("--p", type=int, default=2)
    p_sw.add_argument("--train-fraction", type=float, default=0.7)
    p_sw.add_argument("--seed", type=int, default=_default_seed())
    p_sw.add_argument("--out", default=None)
    _add_kernel_flags(p_sw)
    p_sw.set_defaults(func=cmd_sweep)

    p_ex = sub.add_parser("experiments", help="run the desk-scale benchmark bundle")
    p_ex.add_argument("--out-dir", default="results")
    p_ex.add_argument("--reps", type=int, default=50)
    p_ex.add_argument("--n", type=int, default=100)
    p_ex.add_argument("--panel-n", type=int, default=400)
    p_ex.add_argument("--seed", type=int, default=_default_seed())
    p_ex.set_defaults(func=cmd_experiments)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
