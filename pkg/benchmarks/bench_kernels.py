"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--sizes 5 16 64] [--repeat 5]

Times matmul_mod and rref_mod directly on both backends, then runs a short
campaign cell end to end in a subprocess per backend (the backend is fixed
at import, so the switch needs a fresh interpreter).
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from drazinkit import _pykernels

try:
    from drazinkit import _kernels
except ImportError:
    _kernels = None

P = 65521

CAMPAIGN = (
    "import time; from drazinkit import campaign, GF; t = time.perf_counter(); "
    "campaign.verify('T3.5', GF(7), 5, 200, 0); print(time.perf_counter() - t)"
)


def kernel_table(sizes, repeat):
    rng = random.Random(0)
    backends = [("python", _pykernels)] + ([("cython", _kernels)] if _kernels else [])
    print(f"{'kernel':8} {'n':>4} " + " ".join(f"{name:>12}" for name, _ in backends) + "  speedup")
    for n in sizes:
        a = [rng.randrange(P) for _ in range(n * n)]
        b = [rng.randrange(P) for _ in range(n * n)]
        jobs = {
            "matmul": lambda mod: mod.matmul_mod(a, b, n, n, n, P),
            "rref": lambda mod: mod.rref_mod(a, n, n, P, n),
        }
        for name, job in jobs.items():
            number = max(1, 2000 // (n * n))
            times = [min(timeit.repeat(lambda: job(mod), number=number, repeat=repeat)) / number for _, mod in backends]
            cells = " ".join(f"{t * 1e6:10.1f}us" for t in times)
            speed = f"{times[0] / times[1]:7.1f}x" if len(times) > 1 else ""
            print(f"{name:8} {n:4} {cells}  {speed}")


def campaign_table():
    print("\nverify T3.5 GF(7) n=5, 200 trials")
    for name, env in (("python", {"DRAZINKIT_PURE_PYTHON": "1"}), ("default", {})):
        out = subprocess.run(
            [sys.executable, "-c", CAMPAIGN], env={**os.environ, **env}, capture_output=True, text=True, check=True
        )
        print(f"  {name:8} {float(out.stdout):.2f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 16, 64])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; timing the Python kernels only")
    kernel_table(args.sizes, args.repeat)
    campaign_table()


if __name__ == "__main__":
    main()
