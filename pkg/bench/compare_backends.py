#!/usr/bin/env python3
"""Wall-clock comparison of the compiled kernel and the pure Python path.

Both paths compute identical results and identical resource counts; the
only difference is speed. This script times one traced multiply per size
per backend and prints a small table.
"""

import argparse
import random
import time

from revmul import BitBuffer, ResourceLog, multiply_add
from revmul import _backend


def _time_once(n, rng):
    regs = BitBuffer(4 * n)
    target = regs.window(0, 2 * n)
    u = regs.window(2 * n, n)
    v = regs.window(3 * n, n)
    target.write_uint(rng.getrandbits(2 * n))
    u.write_uint(rng.getrandbits(n))
    v.write_uint(rng.getrandbits(n))
    log = ResourceLog()
    start = time.perf_counter()
    multiply_add(target, u, v, 1, log)
    return time.perf_counter() - start


def _best_of(n, repeat, seed):
    rng = random.Random(seed)
    return min(_time_once(n, rng) for _ in range(repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="256,1024,4096",
                        help="comma-separated operand bit widths")
    parser.add_argument("--repeat", type=int, default=3,
                        help="timings per point; the best is reported")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]

    have_kernel = _backend.kernel() is not None
    print(f"installed backend: {_backend.active_backend()}")
    print(f"{'n':>8}  {'pure (s)':>10}  {'compiled (s)':>12}  {'speedup':>8}")
    for n in sizes:
        saved = _backend._kernel
        _backend._kernel = None
        try:
            pure = _best_of(n, args.repeat, args.seed)
        finally:
            _backend._kernel = saved
        if have_kernel:
            compiled = _best_of(n, args.repeat, args.seed)
            print(f"{n:>8}  {pure:>10.4f}  {compiled:>12.4f}  {pure / compiled:>7.1f}x")
        else:
            print(f"{n:>8}  {pure:>10.4f}  {'(not built)':>12}  {'':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
