"""Time census enumeration with the compiled kernels and the pure-Python fallback.

    python benchmarks/bench_enumerate.py --dimension 2 --lengths 8 10 12

The fallback runs in a subprocess with SAWBOUND_DISABLE_JIT=1 so the flag is
read before the kernels are imported.
"""

import argparse
import json
import os
import subprocess
import sys
import time

TIMER = """
import json, sys, time
from sawbound import _jit
from sawbound.census import enumerate_census
d, N, workers = map(int, sys.argv[1:4])
enumerate_census(d, min(N, 4))  # warm-up / compile
t0 = time.perf_counter()
census = enumerate_census(d, N, workers=workers)
print(json.dumps({"jit": _jit.USE_JIT, "seconds": time.perf_counter() - t0, "c_N": census.c[-1]}))
"""


def run(d, N, workers, jit):
    env = dict(os.environ)
    env.pop("SAWBOUND_DISABLE_JIT", None)
    if not jit:
        env["SAWBOUND_DISABLE_JIT"] = "1"
    out = subprocess.run([sys.executable, "-c", TIMER, str(d), str(N), str(workers)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--lengths", type=int, nargs="+", default=[8, 10, 12])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--fallback-max", type=int, default=12,
                   help="skip the pure-Python run above this length")
    args = p.parse_args()

    print(f"{'N':>4} {'c_N':>14} {'numba (s)':>10} {'python (s)':>11} {'speedup':>8}")
    for N in args.lengths:
        fast = run(args.dimension, N, args.workers, jit=True)
        if N <= args.fallback_max:
            slow = run(args.dimension, N, args.workers, jit=False)
            assert slow["c_N"] == fast["c_N"]
            ratio = slow["seconds"] / max(fast["seconds"], 1e-9)
            print(f"{N:>4} {fast['c_N']:>14} {fast['seconds']:>10.4f} {slow['seconds']:>11.3f} {ratio:>7.0f}x")
        else:
            print(f"{N:>4} {fast['c_N']:>14} {fast['seconds']:>10.4f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
