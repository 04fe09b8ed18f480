"""``spheresnap`` command line: snap, bench, verify, intersect.

Exit codes: 0 success, 1 input error (or a failed verification), 2 when the
precision cap is hit.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import islice
from typing import Iterable, Sequence

from . import lab
from .numerics.approx import PrecisionCapExceeded
from .records import KINDS, InputError, OutputFormat, format_result, is_blank, parse_number, read_record
from .snap import (
    DEFAULT_BD_N,
    DegenerateInput,
    Objective,
    SnapConfig,
    SnapError,
    Strategy,
    snap,
)
from .sphere import intersection_direction, on_minor_arc

DEFAULT_BITS = 31
BATCH = 4096

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 1, 2


def _fraction(text: str) -> Fraction:
    try:
        return parse_number(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")


def _strategy_list(text: str) -> list[Strategy]:
    try:
        return [Strategy(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown strategy in {text!r}")


def _out_format(text: str) -> OutputFormat:
    try:
        return OutputFormat.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_precision(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--bits", type=int, help=f"significand bits e (default {DEFAULT_BITS})")
    g.add_argument("--epsilon", type=_fraction, help="max-norm error bound, e.g. 1/8 or 0.001")
    p.add_argument("--strategy", default="auto", choices=[s.value for s in Strategy])
    p.add_argument("--objective", default=Objective.MIN_DENOMINATOR_BITS.value,
                   choices=[o.value for o in Objective], help="AUTO selection objective")
    p.add_argument("--bd-n", type=int, default=DEFAULT_BD_N, help="denominator range for the bd strategy")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spheresnap", description="Snap points to rational points on the unit sphere.")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snap", help="snap a stream of points (stdin or file)")
    p.add_argument("file", nargs="?", help="input file (default stdin)")
    p.add_argument("--in", dest="kind", default="cartesian", choices=KINDS)
    p.add_argument("--dim", type=int, help="dimension of cartesian input (default: per line)")
    p.add_argument("--out", type=_out_format, default=OutputFormat("common"),
                   help="fractions, common, decimal:N or stats")
    p.add_argument("--jobs", type=int, default=1)
    _add_precision(p)

    p = sub.add_parser("bench", help="random-point benchmark grid (tab-separated rows)")
    p.add_argument("--d", type=_int_list, default=[3])
    p.add_argument("--e", type=_int_list, default=[23, 31])
    p.add_argument("--strategy", type=_strategy_list, default=[Strategy.FX, Strategy.JP])
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None, dest="bench_seed")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--scatter", help="write (error, denominator bits) points to this file")

    p = sub.add_parser("verify", help="run a theorem check")
    p.add_argument("--theorem", required=True, choices=lab.THEOREMS + ("all",))
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--max-exp", type=int, default=4)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None, dest="verify_seed")
    p.add_argument("--q-max", type=int, default=10**6)
    p.add_argument("--bits", type=int, default=23)
    p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 8))
    p.add_argument("--n", type=int, default=100, help="Dirichlet range N")

    p = sub.add_parser("intersect", help="snapped intersection of great-circle segments, one pair per line")
    p.add_argument("file", nargs="?")
    p.add_argument("--in", dest="kind", default="cartesian", choices=KINDS)
    p.add_argument("--out", type=_out_format, default=OutputFormat("common"))
    _add_precision(p)
    return parser


def make_config(args) -> SnapConfig:
    bits = args.bits if args.bits is not None or args.epsilon is not None else DEFAULT_BITS
    return SnapConfig(bits=bits, epsilon=args.epsilon, strategy=args.strategy,
                      objective=args.objective, bd_n=args.bd_n)


def _err(msg: str) -> None:
    print(f"spheresnap: {msg}", file=sys.stderr)


# -- snap ---------------------------------------------------------------------

def _snap_line(job):
    lineno, line, kind, dim, config, fmt = job
    try:
        rec = read_record(line, kind, dim)
        return EXIT_OK, format_result(snap(rec.sources(), config), fmt)
    except (InputError, DegenerateInput, ValueError) as exc:
        return EXIT_INPUT, f"line {lineno}: {exc}"
    except (PrecisionCapExceeded, SnapError) as exc:
        return EXIT_CAP, f"line {lineno}: {exc}"


def _numbered(lines: Iterable[str]):
    for lineno, line in enumerate(lines, 1):
        if not is_blank(line):
            yield lineno, line.strip()


def _batched(it, n):
    it = iter(it)
    while batch := list(islice(it, n)):
        yield batch


def cmd_snap(args, lines: Iterable[str], out) -> int:
    try:
        config = make_config(args)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INPUT
    status = EXIT_OK
    jobs = ((n, line, args.kind, args.dim, config, args.out) for n, line in _numbered(lines))
    pool = ProcessPoolExecutor(max_workers=args.jobs) if args.jobs > 1 else None
    try:
        for batch in _batched(jobs, BATCH):
            results = pool.map(_snap_line, batch, chunksize=64) if pool else map(_snap_line, batch)
            for code, text in results:
                if code == EXIT_OK:
                    out.write(text + "\n")
                else:
                    _err(text)
                    status = max(status, code)
    finally:
        if pool:
            pool.shutdown()
    return status


# -- intersect ------------------------------------------------------------------

def _endpoint(values: Sequence[Fraction], kind: str, config: SnapConfig) -> tuple[Fraction, ...]:
    rec = read_record(" ".join(str(v) for v in values), kind, 3)
    if kind == "cartesian":
        return rec.values
    return snap(rec.sources(), config).point.coords


def intersect_line(line: str, kind: str, config: SnapConfig):
    """Snapped intersection of segments ``a1 a2`` and ``b1 b2``; None when they miss."""
    tokens = line.replace(",", " ").split()
    per = 3 if kind == "cartesian" else 2
    if len(tokens) != 4 * per:
        raise InputError(f"expected {4 * per} values (four {kind} points), got {len(tokens)}")
    vals = [parse_number(t) for t in tokens]
    a1, a2, b1, b2 = (_endpoint(vals[i * per:(i + 1) * per], kind, config) for i in range(4))
    v = intersection_direction(a1, a2, b1, b2)
    for cand in (v, tuple(-c for c in v)):
        if on_minor_arc(cand, a1, a2) and on_minor_arc(cand, b1, b2):
            return snap(cand, config)
    return None


def cmd_intersect(args, lines: Iterable[str], out) -> int:
    try:
        config = make_config(args)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INPUT
    status = EXIT_OK
    for lineno, line in _numbered(lines):
        try:
            r = intersect_line(line, args.kind, config)
        except (InputError, DegenerateInput, ValueError) as exc:
            _err(f"line {lineno}: {exc}")
            status = max(status, EXIT_INPUT)
            continue
        except (PrecisionCapExceeded, SnapError) as exc:
            _err(f"line {lineno}: {exc}")
            status = EXIT_CAP
            continue
        out.write((format_result(r, args.out) if r else "none") + "\n")
    return status


# -- bench / verify ----------------------------------------------------------------

def cmd_bench(args, out) -> int:
    seed = args.bench_seed if args.bench_seed is not None else args.seed
    if args.count < 1 or any(v < 1 for v in args.e) or any(v < 2 for v in args.d):
        _err("count and e must be positive, d at least 2")
        return EXIT_INPUT
    cells = lab.benchmark_grid(args.d, args.e, args.strategy, args.count, seed)
    rows = lab.run_benchmark(cells, jobs=args.jobs, scatter_path=args.scatter)
    out.write(lab.BenchmarkRow.HEADER + "\n")
    for row in rows:
        out.write(row.tsv() + "\n")
    return EXIT_OK


def run_verify(args) -> list[lab.Report]:
    seed = args.verify_seed if args.verify_seed is not None else args.seed
    names = lab.THEOREMS if args.theorem == "all" else (args.theorem,)
    reports = []
    for name in names:
        if name == "no-floats":
            reports.append(lab.verify_no_floats(args.d, args.max_exp))
        elif name == "stretch":
            reports.append(lab.verify_stretch(args.d, args.count, seed))
        elif name == "liouville":
            reports.append(lab.verify_liouville(args.q_max))
        elif name == "chebyshev":
            reports.append(lab.verify_chebyshev(8))
        elif name == "observation2":
            reports.append(lab.verify_observation2(args.d, args.count, seed, args.bits))
        elif name == "theorem5":
            reports.append(lab.verify_theorem5(args.d, args.count, seed, args.epsilon))
        elif name == "dirichlet":
            reports.append(lab.verify_dirichlet(args.count, seed, args.n))
    return reports


def cmd_verify(args, out) -> int:
    try:
        reports = run_verify(args)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INPUT
    for rep in reports:
        out.write(f"{rep.name}: {'PASS' if rep.passed else 'FAIL'}\n")
        for line in rep.lines:
            out.write(f"  {line}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_INPUT


def _open_input(path: str | None):
    return open(path, encoding="utf-8") if path else sys.stdin


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "bench":
            return cmd_bench(args, out)
        if args.command == "verify":
            return cmd_verify(args, out)
        try:
            src = _open_input(args.file)
        except OSError as exc:
            _err(str(exc))
            return EXIT_INPUT
        with src:
            if args.command == "snap":
                return cmd_snap(args, src, out)
            return cmd_intersect(args, src, out)
    except PrecisionCapExceeded as exc:
        _err(str(exc))
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
