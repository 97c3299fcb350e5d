"""Command-line interface.

Every subcommand is deterministic: identical inputs produce byte-identical
outputs, JSON is emitted with sorted keys, and randomized suites take an
explicit --seed.  Exit codes: 0 success, 1 validation failure (including
unknown flags), 2 I/O failure.  IMRA_THREADS caps internal parallelism
(0 = auto); the kernels are single-threaded, so it is validated and
recorded only.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import besov, gridio, ordering, transform, verify
from .errors import (
    FileFormatError,
    ImraError,
    ParameterError,
    PayloadValueError,
    TruncatedPayloadError,
)
from .filters import bank_from_id, bank_to_text, dd_bank
from .scaling import refine_scaling, refine_wavelet


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_extended(value: str) -> float:
    if value.lower() in ("inf", "infinity"):
        return math.inf
    return float(value)


def _threads_from_env() -> int:
    raw = os.environ.get("IMRA_THREADS", "0")
    try:
        threads = int(raw)
    except ValueError:
        raise ParameterError(f"IMRA_THREADS must be an integer, got {raw!r}") from None
    if threads < 0:
        raise ParameterError("IMRA_THREADS must be nonnegative")
    return threads


def _build_parser() -> _Parser:
    parser = _Parser(prog="imra", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-filters", help="print a Deslauriers-Dubuc filter bank")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--output", default=None)

    p = sub.add_parser("eval-phi", help="tabulate the scaling function on a dyadic grid")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--wavelet", action="store_true", help="tabulate the wavelet instead")
    p.add_argument("--output", default=None)
    p.add_argument("--plot", default=None, help="also render the table to this image file")

    p = sub.add_parser("decompose", help="forward wavelet transform of a grid file")
    p.add_argument("--input", required=True)
    p.add_argument("--filter", required=True, help="bank id, e.g. dd2")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("reconstruct", help="inverse transform of a pyramid")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("threshold", help="zero small detail coefficients")
    p.add_argument("--input", required=True)
    p.add_argument("--tau", type=_parse_extended, required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("besov-norm", help="Besov sequence norm of a pyramid")
    p.add_argument("--input", required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--p", type=_parse_extended, required=True)
    p.add_argument("--q", type=_parse_extended, required=True)
    p.add_argument("--kind", choices=("coefficient", "wavelet"), default="coefficient")
    p.add_argument("--plot", default=None)

    p = sub.add_parser("holder-est", help="smoothness exponent from coefficient decay")
    p.add_argument("--input", required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--filter", default="dd2")
    p.add_argument("--plot", default=None)

    p = sub.add_parser("ordering", help="neighbour-preserving lattice enumeration")
    p.add_argument("--dim", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--count", type=int, default=None)
    group.add_argument("--verify", type=int, default=None, metavar="K")

    p = sub.add_parser("verify", help="run the full identity suite")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)

    return parser


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _cmd_gen_filters(args) -> int:
    _emit(bank_to_text(dd_bank(args.order)), args.output)
    return 0


def _cmd_eval_phi(args) -> int:
    bank = dd_bank(args.order)
    table = (refine_wavelet if args.wavelet else refine_scaling)(bank, args.resolution)
    lines = []
    xs, ys = [], []
    for x, v in table.points():
        frac = f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
        lines.append(f"{frac}\t{float(x)!r}\t{float(v)!r}")
        xs.append(float(x))
        ys.append(float(v))
    _emit("\n".join(lines) + "\n", args.output)
    if args.plot:
        from . import plots

        label = "psi" if args.wavelet else "phi"
        plots.save_function_table(args.plot, xs, ys,
                                  f"{label}, dd{args.order}, resolution {args.resolution}")
    return 0


def _cmd_decompose(args) -> int:
    bank = bank_from_id(args.filter)
    grid = gridio.read_grid(args.input)
    if args.levels < 1:
        raise ParameterError("--levels must be positive")
    pyr = transform.decompose(grid, bank, grid.level - args.levels)
    gridio.write_pyramid(args.output, pyr)
    return 0


def _cmd_reconstruct(args) -> int:
    pyr = gridio.read_pyramid(args.input)
    gridio.write_grid(args.output, transform.reconstruct(pyr))
    return 0


def _cmd_threshold(args) -> int:
    pyr = gridio.read_pyramid(args.input)
    out, kept, dropped = transform.threshold(pyr, args.tau)
    gridio.write_pyramid(args.output, out)
    payload = {"dropped_l1_mass": dropped, "kept": kept,
               "total": sum(g.values.size for g in pyr.details.values())}
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    return 0


def _cmd_besov_norm(args) -> int:
    pyr = gridio.read_pyramid(args.input)
    params = besov.BesovParams(sigma=args.sigma, p=args.p, q=args.q, j0=pyr.j0)
    report = (besov.coeff_norm if args.kind == "coefficient" else besov.wavelet_norm)(
        pyr, params)
    sys.stdout.write(json.dumps(report.to_json_dict(), sort_keys=True) + "\n")
    if args.plot:
        from . import plots

        plots.save_norm_report(args.plot, report)
    return 0


def _cmd_holder_est(args) -> int:
    grid = gridio.read_grid(args.input)
    bank = bank_from_id(args.filter)
    if args.levels < 3:
        raise ParameterError("--levels must be at least 3")
    estimate = besov.holder_estimate(grid, bank, grid.level - args.levels)
    sys.stdout.write(f"sigma\t{estimate.sigma!r}\n")
    if estimate.flag:
        sys.stdout.write(f"flag\t{estimate.flag}\n")
    for j, v in estimate.points:
        sys.stdout.write(f"{j}\t{v!r}\n")
    if args.plot:
        from . import plots

        plots.save_holder_fit(args.plot, estimate)
    return 0


def _cmd_ordering(args) -> int:
    if args.verify is not None:
        report = ordering.verify_ordering(args.dim, args.verify)
        for name, ok, detail in report.checks:
            sys.stdout.write(f"{'PASS' if ok else 'FAIL'}\t{name}\t{detail}\n")
        return 0 if report.passed else 1
    count = args.count if args.count is not None else 25
    if count < 0:
        raise ParameterError("--count must be nonnegative")
    stream = ordering.cube_ordering_iter(args.dim)
    for k in range(count):
        point = next(stream)
        sys.stdout.write(f"{k}\t{','.join(str(c) for c in point)}\n")
    return 0


def _cmd_verify(args) -> int:
    start = time.monotonic()
    rows = verify.run_all(dim=args.dim, order=args.order, seed=args.seed)
    failed = 0
    for name, ok, detail in rows:
        sys.stdout.write(f"{'PASS' if ok else 'FAIL'}\t{name}\t{detail}\n")
        failed += 0 if ok else 1
    elapsed = time.monotonic() - start
    sys.stdout.write(f"{'PASS' if failed == 0 else 'FAIL'}\tverify\t"
                     f"{len(rows) - failed}/{len(rows)} checks in {elapsed:.1f}s\n")
    return 0 if failed == 0 else 1


_COMMANDS = {
    "gen-filters": _cmd_gen_filters,
    "eval-phi": _cmd_eval_phi,
    "decompose": _cmd_decompose,
    "reconstruct": _cmd_reconstruct,
    "threshold": _cmd_threshold,
    "besov-norm": _cmd_besov_norm,
    "holder-est": _cmd_holder_est,
    "ordering": _cmd_ordering,
    "verify": _cmd_verify,
}


def run(argv) -> int:
    parser = _build_parser()
    try:
        _threads_from_env()
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"imra: {exc}\n")
        return 1
    except (FileFormatError, TruncatedPayloadError, PayloadValueError) as exc:
        sys.stderr.write(f"imra: {exc}\n")
        return 2
    except ImraError as exc:
        sys.stderr.write(f"imra: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"imra: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
