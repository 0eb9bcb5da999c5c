"""Command-line interface: ``elasticmds solve | bench | datasets``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bench import bench_csv, format_table, summarize, time_calls
from .core import DissimilarityData, ValidationError
from .diagnostics import export_configuration, shepard_csv, shepard_table
from .ingest import (
    DATASETS,
    FORMATS,
    TRANSFORMS,
    builtin_dataset,
    builtin_raw,
    dataset_citation,
    offdiagonal,
    parse_matrix,
    to_dissimilarities,
    write_dissimilarities,
)
from .initial import EigenSolverError
from .majorize import MajorizationError
from .solver import LEVELS, NonFiniteStressError, SolveOptions, SolveResult, solve

SCHEMA_VERSION = 1
EXIT_INVALID = 1
EXIT_NONFINITE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _diag_flag(value: str) -> Optional[bool]:
    return {"auto": None, "yes": True, "no": False}[value]


def load_data(args: argparse.Namespace) -> tuple[DissimilarityData, str]:
    """Build the dissimilarity data described by solve/bench arguments."""
    if args.dataset:
        if args.transform:
            data = to_dissimilarities(builtin_raw(args.dataset), args.transform)
        else:
            data = builtin_dataset(args.dataset)
        source = f"dataset:{args.dataset}"
    else:
        text = Path(args.input).read_text(encoding="utf-8")
        raw = parse_matrix(text, args.format, diagonal=_diag_flag(args.diagonal))
        for msg in raw.warnings:
            print(f"warning: {msg}", file=sys.stderr)
        data = to_dissimilarities(raw, args.transform or "identity")
        source = str(args.input)
    if getattr(args, "weights", None):
        wraw = parse_matrix(Path(args.weights).read_text(encoding="utf-8"), args.format,
                            diagonal=_diag_flag(args.diagonal))
        if wraw.n != data.n:
            raise ValidationError(f"weights matrix has n={wraw.n}, dissimilarities have n={data.n}")
        data = data.with_weights(offdiagonal(wraw))
    return data, source


def _json_float(x: float):
    return x if math.isfinite(x) else None


def result_document(data: DissimilarityData, result: SolveResult, source: str) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "source": source,
        "n": data.n,
        "m": data.m,
        "options": result.options.as_dict(),
        "iterations": result.iterations,
        "converged": result.converged,
        "start_lambda": result.start_lambda,
        "stress": {k: _json_float(v) for k, v in result.report.as_dict().items()},
        "stress_trace": result.stress_trace,
        "delta_hat": [float(v) for v in result.delta_hat],
    }


def summary_line(result: SolveResult) -> str:
    return (
        f"level={result.options.level} iterations={result.iterations} "
        f"converged={str(result.converged).lower()} "
        f"stress={result.stress:.10g} log_stress={result.report.log_stress:.10g}"
    )


def _options(args: argparse.Namespace, level: str) -> SolveOptions:
    return SolveOptions(level=level, p=args.dims, max_iter=args.maxiter, eps=args.eps,
                        relative=args.relative)


def cmd_solve(args: argparse.Namespace) -> int:
    data, source = load_data(args)
    result = solve(data, _options(args, args.level))
    doc = json.dumps(result_document(data, result, source), indent=2) + "\n"
    config_csv = export_configuration(result, data.labels)
    shep = shepard_csv(shepard_table(data, result))
    prefix = args.out
    Path(f"{prefix}.result.json").write_text(doc, encoding="utf-8")
    Path(f"{prefix}.config.csv").write_text(config_csv, encoding="utf-8")
    Path(f"{prefix}.shepard.csv").write_text(shep, encoding="utf-8")
    print(summary_line(result))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    if args.reps < 1 or args.warmup < 0:
        raise ValidationError("--reps must be >= 1 and --warmup >= 0")
    data, source = load_data(args)
    name = args.dataset or Path(args.input).stem
    levels = LEVELS if args.level == "both" else (args.level,)
    rows = []
    for level in levels:
        opts = _options(args, level)
        times = time_calls(lambda: solve(data, opts), args.reps, args.warmup)
        rows.append(summarize(f"{name}/{level}", times))
    print(f"# {source}, times in milliseconds, {args.reps} reps after {args.warmup} warmup")
    print(format_table(rows))
    Path(args.csv).write_text(bench_csv(rows), encoding="utf-8")
    return 0


def cmd_datasets(args: argparse.Namespace) -> int:
    if args.show:
        sys.stdout.write(write_dissimilarities(builtin_dataset(args.show)))
        return 0
    print(f"{'name':<8}{'n':>4}{'m':>6}  source")
    for name in DATASETS:
        data = builtin_dataset(name)
        print(f"{name:<8}{data.n:>4}{data.m:>6}  {dataset_citation(name)}")
    return 0


def _add_input_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("input", nargs="?", help="dissimilarity matrix file")
    src.add_argument("--dataset", choices=DATASETS, help="use a bundled dataset")
    p.add_argument("--format", choices=FORMATS, default="csv-full")
    p.add_argument("--diagonal", choices=("auto", "yes", "no"), default="auto",
                   help="triangle-rows: whether each line ends with the diagonal")
    p.add_argument("--transform", choices=TRANSFORMS, default=None,
                   help="conversion to dissimilarities (default: identity, or the dataset's own)")
    p.add_argument("--weights", help="weight matrix file, same format as the input")
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--maxiter", type=int, default=1000)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--relative", action="store_true", help="use relative stress change for convergence")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elasticmds", description="Elastic multidimensional scaling")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="fit a configuration")
    _add_input_args(p)
    p.add_argument("--level", choices=LEVELS, default="ordinal")
    p.add_argument("--out", default="elastic", help="output file prefix")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="time repeated full solves")
    _add_input_args(p)
    p.add_argument("--level", choices=LEVELS + ("both",), default="both")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--warmup", type=int, default=5)
    p.add_argument("--csv", default="bench.csv", help="where to write the summary CSV")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("datasets", help="list bundled datasets")
    p.add_argument("--show", choices=DATASETS, help="print a dataset as pair CSV")
    p.set_defaults(func=cmd_datasets)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NonFiniteStressError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONFINITE
    except (ValidationError, OSError, MajorizationError, EigenSolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
