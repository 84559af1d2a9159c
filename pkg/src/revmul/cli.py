"""Command-line front end: correctness checks and CSV resource traces.

Commands:
  verify   exhaustive and randomized equivalence against native big ints
  trace    meter one multiply and print a CSV row
  sweep    meter a schedule of sizes and print CSV rows

Exit codes: 0 on success, 1 on verification failure, 2 on usage errors.
"""

import argparse
import random
import sys

from . import karatsuba
from ._backend import active_backend
from .analysis import SweepPoint
from .bitbuf import BitBuffer
from .karatsuba import choose_parameters
from .tracer import ResourceLog

CSV_HEADER = "algorithm,n,w,m,toffoli,bits_high_water"

_ALGORITHMS = ("karatsuba", "schoolbook")


def _make_registers(n):
    """One 4n-bit buffer holding the 2n-bit target and both n-bit operands."""
    regs = BitBuffer(4 * n)
    return regs.window(0, 2 * n), regs.window(2 * n, n), regs.window(3 * n, n)


def _run_multiply(n, algorithm, rng, base_case_pieces=1):
    target, u, v = _make_registers(n)
    u.write_uint(rng.getrandbits(n))
    v.write_uint(rng.getrandbits(n))
    target.write_uint(rng.getrandbits(2 * n))
    log = ResourceLog()
    if algorithm == "schoolbook":
        karatsuba.multiply_add_schoolbook(target, u, v, 1, log)
        return SweepPoint(algorithm, n, n, 1, log.toffoli, log.high_water_bits)
    cfg = choose_parameters(n, base_case_pieces=base_case_pieces)
    karatsuba.multiply_add(target, u, v, 1, log, config=cfg)
    return SweepPoint(
        algorithm, n, cfg.word_bits, cfg.piece_count, log.toffoli, log.high_water_bits
    )


def _row(point):
    return (
        f"{point.algorithm},{point.n},{point.w},{point.m},"
        f"{point.toffoli},{point.bits_high_water}"
    )


def _check_case(n, start, u_value, v_value, sign=1):
    """Run one metered multiply and compare against native integers."""
    target, u, v = _make_registers(n)
    target.write_uint(start)
    u.write_uint(u_value)
    v.write_uint(v_value)
    log = ResourceLog()
    karatsuba.multiply_add(target, u, v, sign, log)
    mask = (1 << (2 * n)) - 1
    expected = (start + sign * u_value * v_value) & mask
    if target.read_uint() != expected or u.read_uint() != u_value or v.read_uint() != v_value:
        return False
    return log.allocated_bits == 0


def _check_reversible(n, rng):
    target, u, v = _make_registers(n)
    start = rng.getrandbits(2 * n)
    u_value = rng.getrandbits(n)
    v_value = rng.getrandbits(n)
    sign = rng.choice((1, -1))
    target.write_uint(start)
    u.write_uint(u_value)
    v.write_uint(v_value)
    log = ResourceLog()
    karatsuba.multiply_add(target, u, v, sign, log)
    karatsuba.multiply_add(target, u, v, -sign, log)
    return (
        target.read_uint() == start
        and u.read_uint() == u_value
        and v.read_uint() == v_value
        and log.allocated_bits == 0
    ), (start, u_value, v_value)


def cmd_verify(args):
    rng = random.Random(args.seed)
    failures = 0

    def report_case(n, start, u_value, v_value):
        print(
            f"FAIL: n={n} t0={start} u={u_value} v={v_value}",
            file=sys.stderr,
        )

    total = 0
    for n in range(1, args.max_exhaustive_n + 1):
        for u_value in range(1 << n):
            for v_value in range(1 << n):
                for start in (0, rng.getrandbits(2 * n)):
                    total += 1
                    if not _check_case(n, start, u_value, v_value):
                        report_case(n, start, u_value, v_value)
                        return 1
    print(f"exhaustive: n=1..{args.max_exhaustive_n}, {total} cases ok")

    sizes = [16, 32, 64, 128, 256, 512, 1024]
    for n in sizes:
        for _ in range(args.cases):
            start = rng.getrandbits(2 * n)
            u_value = rng.getrandbits(n)
            v_value = rng.getrandbits(n)
            if not _check_case(n, start, u_value, v_value):
                report_case(n, start, u_value, v_value)
                return 1
        for _ in range(max(1, args.cases // 4)):
            ok, case = _check_reversible(n, rng)
            if not ok:
                report_case(n, *case)
                return 1
    print(
        f"randomized: n in {sizes}, {args.cases} equivalence and"
        f" {max(1, args.cases // 4)} round-trip cases each, ok"
    )
    print(f"verify passed ({active_backend()} backend)")
    return 0 if failures == 0 else 1


def cmd_trace(args):
    rng = random.Random(args.seed)
    point = _run_multiply(args.n, args.algorithm, rng, args.base_case_pieces)
    print(CSV_HEADER)
    print(_row(point))
    return 0


def _sweep_sizes(args, parser):
    if args.ns:
        try:
            sizes = [int(part) for part in args.ns.split(",")]
        except ValueError:
            parser.error("--ns must be a comma-separated list of ints")
        if any(n < 1 for n in sizes):
            parser.error("sweep sizes must be >= 1")
        return sizes
    if args.min is None or args.max is None:
        parser.error("sweep needs --min and --max (or --ns)")
    if args.min < 1 or args.max < args.min:
        parser.error("sweep needs 1 <= min <= max")
    if args.factor <= 1.0:
        parser.error("--factor must be > 1")
    sizes = []
    current = float(args.min)
    while True:
        value = round(current)
        if value > args.max:
            break
        if not sizes or value != sizes[-1]:
            sizes.append(value)
        current *= args.factor
    return sizes


def cmd_sweep(args, parser):
    algorithms = [name.strip() for name in args.algorithms.split(",") if name.strip()]
    if not algorithms or any(name not in _ALGORITHMS for name in algorithms):
        parser.error(f"--algorithms entries must come from {_ALGORITHMS}")
    sizes = _sweep_sizes(args, parser)
    rng = random.Random(args.seed)
    print(CSV_HEADER)
    for n in sizes:
        for algorithm in algorithms:
            print(_row(_run_multiply(n, algorithm, rng, args.base_case_pieces)))
    return 0


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="revmul",
        description="Reversible multiply-accumulate: verification and resource traces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="check outputs against native integers")
    p_verify.add_argument("--max-exhaustive-n", type=_positive, default=8)
    p_verify.add_argument("--cases", type=_positive, default=100)
    p_verify.add_argument("--seed", type=int, default=0)

    p_trace = sub.add_parser("trace", help="meter one multiply, print a CSV row")
    p_trace.add_argument("--n", type=_positive, required=True)
    p_trace.add_argument("--algorithm", choices=_ALGORITHMS, default="karatsuba")
    p_trace.add_argument("--seed", type=int, default=0)
    p_trace.add_argument("--base-case-pieces", type=_positive, default=1)

    p_sweep = sub.add_parser("sweep", help="meter a schedule of sizes, print CSV rows")
    p_sweep.add_argument("--min", type=_positive, default=None)
    p_sweep.add_argument("--max", type=_positive, default=None)
    p_sweep.add_argument("--factor", type=float, default=2.0)
    p_sweep.add_argument("--ns", type=str, default=None, help="explicit sizes, comma separated")
    p_sweep.add_argument("--algorithms", type=str, default="karatsuba,schoolbook")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--base-case-pieces", type=_positive, default=1)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "trace":
        return cmd_trace(args)
    return cmd_sweep(args, parser)
