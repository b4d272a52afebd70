"""Command-line entry point: ``utscal <command> ...`` or ``python -m utscal``.

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 optimization error.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .core import (CalibrationError, DomainError, InputError, OptimizationError, Temperature, UsageError,
                   tempered_softmax)
from .metrics import DEFAULT_BINS
from .scalar_opt import OptimizerConfig
from .synth import SynthConfig, generate
from .ts import fit_ts
from .uts import fit_uts

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_OPT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _input_args(p, labels_required: bool):
    p.add_argument("--in", dest="inp", required=True, metavar="FILE", help="logits CSV")
    p.add_argument("--header", action="store_true", help="skip the first line of the input")
    if not labels_required:
        p.add_argument("--has-labels", action="store_true", help="input has a trailing label column")


def _optimizer_args(p):
    d = OptimizerConfig()
    p.add_argument("--t-min", type=float, default=d.t_min)
    p.add_argument("--t-max", type=float, default=d.t_max)
    p.add_argument("--grid-points", type=int, default=d.grid_points)
    p.add_argument("--refine-tol", type=float, default=d.refine_tol)
    p.add_argument("--max-refine-iters", type=int, default=d.max_refine_iters)


def _optimizer_config(a) -> OptimizerConfig:
    return OptimizerConfig(a.t_min, a.t_max, a.grid_points, a.refine_tol, a.max_refine_iters)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="utscal", description="Temperature scaling calibration of classifier logits.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="write a synthetic miscalibrated dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t0", type=float, required=True)
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, metavar="FILE")

    p = sub.add_parser("split", help="random calibration/test split")
    _input_args(p, labels_required=False)
    p.add_argument("--frac", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-calib", required=True, metavar="FILE")
    p.add_argument("--out-test", required=True, metavar="FILE")

    p = sub.add_parser("fit-ts", help="fit T by minimizing NLL on labelled logits")
    _input_args(p, labels_required=True)
    p.add_argument("--out-json", required=True, metavar="FILE")
    _optimizer_args(p)

    p = sub.add_parser("fit-uts", help="fit T without labels")
    _input_args(p, labels_required=False)
    p.add_argument("--out-json", required=True, metavar="FILE")
    _optimizer_args(p)

    p = sub.add_parser("apply", help="write calibrated probabilities")
    _input_args(p, labels_required=False)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--out", required=True, metavar="FILE")

    p = sub.add_parser("evaluate", help="accuracy / NLL / ECE report at a given T")
    _input_args(p, labels_required=True)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--out-json", required=True, metavar="FILE")
    return parser


def _read(a, labels: bool):
    try:
        return io.read_logits_csv(a.inp, has_labels=labels, header=a.header)
    except OSError as e:
        raise InputError(str(e)) from None


def _warn(messages):
    for m in messages:
        print(f"utscal: warning: {m}", file=sys.stderr)


def run(a) -> None:
    if a.command == "synth":
        data = generate(SynthConfig(a.n, a.k, a.t0, a.sigma, a.seed))
        io.write_logits_csv(a.out, data)
    elif a.command == "split":
        cal, test = io.split(_read(a, a.has_labels), a.frac, a.seed)
        io.write_logits_csv(a.out_calib, cal)
        io.write_logits_csv(a.out_test, test)
    elif a.command == "fit-ts":
        cfg = _optimizer_config(a)
        T = fit_ts(_read(a, True), cfg)
        _warn(T.warnings)
        io.atomic_write_text(a.out_json, io.dumps(io.fit_result_dict(T)))
    elif a.command == "fit-uts":
        cfg = _optimizer_config(a)
        T, subsets = fit_uts(_read(a, a.has_labels), cfg)
        _warn(T.warnings)
        io.atomic_write_text(a.out_json, io.dumps(io.fit_result_dict(T, subsets)))
    elif a.command == "apply":
        probs = tempered_softmax(_read(a, a.has_labels), Temperature(a.t))
        io.write_probs_csv(a.out, probs.probs)
    elif a.command == "evaluate":
        report = io.evaluate(_read(a, True), Temperature(a.t), a.bins)
        io.atomic_write_text(a.out_json, report.to_json())
    else:  # pragma: no cover - argparse rejects unknown commands
        raise UsageError(f"unknown command {a.command}")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        run(args)
    except UsageError as e:
        print(f"utscal: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, DomainError) as e:
        print(f"utscal: {e}", file=sys.stderr)
        return EXIT_DATA
    except OptimizationError as e:
        print(f"utscal: optimization failed: {e}", file=sys.stderr)
        return EXIT_OPT
    except CalibrationError as e:
        print(f"utscal: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
