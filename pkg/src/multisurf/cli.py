"""Command-line front end: dataset generation, model fitting, grid
evaluation, and experiment sweeps.

Every invocation echoes its fully resolved configuration (JSON, stderr) so
runs are reproducible from logs. All numeric output uses 17 significant
digits, enough to round-trip float64 exactly.

Exit codes: 0 success, 2 usage, 3 I/O, 4 numeric failure, 5 data format.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .chebfit import Truncation
from .errors import (
    DataFormatError,
    MultisurfError,
    NumericError,
    UnknownGenerator,
)
from .labkit import (
    GENERATORS,
    GapWeightedConfig,
    SweepSpec,
    add_noise,
    load_csv,
    make_dataset,
    metric_suite,
    run_sweep,
    sample_points,
    save_csv,
    save_report_csv,
    write_sweep_csv,
)
from .reconstruct import Method, fit_model, load_model, reconstruct_grid, save_model

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4
EXIT_DATA = 5


def _parse_grid(text: str):
    """'150x150' -> (150, 150); '2000' -> 2000."""
    parts = text.lower().split("x")
    try:
        counts = [int(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid spec {text!r}") from exc
    if any(c < 2 for c in counts):
        raise argparse.ArgumentTypeError("grid needs at least 2 points per dimension")
    return counts[0] if len(counts) == 1 else tuple(counts)


def _parse_list(cast):
    def parse(text: str):
        try:
            return tuple(cast(v) for v in text.split(",") if v != "")
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from exc

    return parse


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _echo_config(args: argparse.Namespace) -> None:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    print("config: " + json.dumps(cfg, sort_keys=True, default=str), file=sys.stderr)


def _print_metrics(metrics: dict) -> None:
    for key in ("max_abs", "mae", "rmse", "gap_weighted"):
        print("%s = %.17g" % (key, metrics[key]))
    if metrics.get("n_failed"):
        print("failed_points = %d" % metrics["n_failed"])


def _cmd_gen(args) -> int:
    dataset = make_dataset(args.generator, n_points=args.points, grid=args.grid, seed=args.seed)
    if args.noise and args.noise > 0:
        dataset = add_noise(dataset, args.noise, seed=args.seed, target="values")
    save_csv(args.output, dataset)
    with open(str(args.output) + ".json", "w", encoding="utf-8") as fh:
        json.dump(dataset.provenance, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {dataset.n} rows ({dataset.d}D, {dataset.m} surfaces) to {args.output}")
    return EXIT_OK


def _cmd_fit(args) -> int:
    dataset = load_csv(args.data)
    model = fit_model(
        dataset,
        Method(args.method, args.projection),
        Truncation.total(args.degree),
        margin=args.margin,
    )
    save_model(model, args.output)
    print("fit residuals: " + ", ".join("%.17g" % r for r in model.residuals))
    print(f"wrote model ({model.method.kind}, m={model.m}, degree={args.degree}) to {args.output}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    model = load_model(args.model)
    model = model.with_options(
        complex_projection=args.projection or model.method.complex_projection,
        clamp_negative_offdiag=args.clamp,
    )
    truth = None
    if args.data is not None:
        truth = load_csv(args.data)
        points = truth.points
    else:
        if args.grid is None:
            raise DataFormatError("eval needs a dataset or --grid")
        points = sample_points(model.domain, grid=args.grid)
    report = reconstruct_grid(model, points)
    if args.output:
        save_report_csv(
            args.output,
            report,
            model.domain,
            provenance={"model": str(args.model), "failed_points": report.n_failed},
        )
        print(f"wrote {len(points)} reconstructed rows to {args.output}")
    if truth is not None:
        metrics = metric_suite(truth, report, GapWeightedConfig(eps_w=args.eps_w))
        _print_metrics(metrics)
    elif report.n_failed:
        print(f"failed_points = {report.n_failed}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    file_spec = {}
    if args.spec:
        with open(args.spec, "r", encoding="utf-8") as fh:
            file_spec = json.load(fh)

    def pick(name, default):
        cli = getattr(args, name, None)
        if cli is not None:
            return cli
        if name in file_spec and file_spec[name] is not None:
            value = file_spec[name]
            return tuple(value) if isinstance(value, list) else value
        return default

    generator = pick("generator", None)
    data = pick("data", None)
    spec = SweepSpec(
        generator=generator,
        data_path=data,
        methods=pick("method", ("colleague",)),
        degrees=pick("degrees", (40,)),
        noises=pick("noises", (0.0,)),
        noise_target=pick("noise_target", "invariants"),
        train_points=pick("points", 1000),
        eval_grid=pick("grid", 2000),
        seed=pick("seed", 0),
        projection=pick("projection", "real"),
        eps_w=pick("eps_w", 5e-2),
    )
    rows = run_sweep(spec)
    write_sweep_csv(rows, args.output, spec=spec)
    ok = sum(1 for r in rows if not r.status.startswith("failed"))
    for r in rows:
        print(
            "%s degree=%d noise=%.17g max_abs=%.17g gap_weighted=%.17g [%s]"
            % (r.method, r.degree, r.noise, r.max_abs, r.gap_weighted, r.status)
        )
    print(f"wrote {len(rows)} rows ({ok} succeeded) to {args.output}")
    return EXIT_OK if ok else EXIT_NUMERIC


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multisurf",
        description="Reconstruct intersecting surfaces from value-sorted data "
        "via smooth invariants and companion-matrix eigenvalues.",
    )
    parser.add_argument("--version", action="version", version=f"multisurf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a dataset CSV from a named problem")
    p.add_argument("generator", choices=sorted(GENERATORS))
    p.add_argument("--points", type=int, help="number of uniform random sample points")
    p.add_argument("--grid", type=_parse_grid, help="grid spec, e.g. 150x150 or 1000")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--noise", type=float, default=0.0, help="uniform value noise amplitude")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("fit", help="fit invariant surrogates to a dataset CSV")
    p.add_argument("data")
    p.add_argument("--method", required=True,
                   choices=("frobenius", "schmeisser", "colleague", "direct"))
    p.add_argument("--degree", type=int, required=True, help="total degree of the fit")
    p.add_argument("--projection", choices=("real", "magnitude", "reject"), default="real")
    p.add_argument("--margin", type=float, default=0.05,
                   help="value-transform margin inside [-1, 1]")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("eval", help="reconstruct surfaces from a fitted model")
    p.add_argument("model")
    p.add_argument("data", nargs="?", help="dataset CSV providing points and truth values")
    p.add_argument("--grid", type=_parse_grid, help="evaluate on a uniform grid instead")
    p.add_argument("--projection", choices=("real", "magnitude", "reject"))
    p.add_argument("--clamp", action=argparse.BooleanOptionalAction, default=True,
                   help="clamp small negative squared off-diagonals (schmeisser)")
    p.add_argument("--eps-w", dest="eps_w", type=float, default=5e-2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep", help="run a (method, degree, noise) experiment grid")
    p.add_argument("--generator", choices=sorted(GENERATORS))
    p.add_argument("--data", help="dataset CSV instead of a generator")
    p.add_argument("--method", type=_parse_list(str), help="comma-separated method list")
    p.add_argument("--degrees", type=_parse_list(int), help="comma-separated degree list")
    p.add_argument("--noises", type=_parse_list(float), help="comma-separated noise list")
    p.add_argument("--noise-target", dest="noise_target", choices=("values", "invariants"))
    p.add_argument("--points", type=int, help="training sample count")
    p.add_argument("--grid", type=_parse_grid, help="evaluation grid spec")
    p.add_argument("--seed", type=_seed)
    p.add_argument("--projection", choices=("real", "magnitude", "reject"))
    p.add_argument("--eps-w", dest="eps_w", type=float)
    p.add_argument("--spec", help="JSON sweep spec file (flags override its keys)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    _echo_config(args)
    try:
        return args.func(args)
    except UnknownGenerator as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataFormatError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except MultisurfError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
