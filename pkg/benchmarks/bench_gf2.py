"""Compare the compiled and pure-Python GF(2) backends.

    python3 benchmarks/bench_gf2.py [--quick]

Three workloads: dense reduced echelon form on random square matrices, a
minimal resolution of F2 over A(2), and the bar-complex oracle (sparse rank).
Each row reports seconds per backend and the speed-up; results are checked to
agree before timing is reported.
"""

from __future__ import annotations

import argparse
import random
import time

from tmfres import gf2
from tmfres.bar import bar_oracle
from tmfres.comodule import build_standard
from tmfres.ext import minimal_resolution
from tmfres.modules import SteenrodModule, tensor


def _timed(fn, repeat: int = 1):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def dense_case(n: int, seed: int = 1):
    rng = random.Random(seed)
    rows = [rng.getrandbits(n) for _ in range(n)]
    return f"rref {n}x{n}", lambda: gf2.rref(rows, n)


def resolution_case(t_max: int):
    bo = build_standard("BO(1)")
    m = tensor(tensor(bo, bo), bo)
    return f"resolve BO(1)^3, t <= {t_max}", lambda: minimal_resolution(m, 20, t_max).ext_dims()


def bar_case(t_max: int):
    m = SteenrodModule([0])
    return f"bar oracle F2, t <= {t_max}", lambda: bar_oracle(m, t_max, t_max).dims


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="small sizes only")
    args = ap.parse_args(argv)
    if "compiled" not in gf2.available_backends():
        print("compiled backend not built; nothing to compare")
        return 1
    if args.quick:
        cases = [dense_case(256), resolution_case(20), bar_case(10)]
    else:
        cases = [dense_case(512), dense_case(2048), resolution_case(48), bar_case(13)]
    print(f"{'workload':30s} {'python s':>10s} {'compiled s':>11s} {'speed-up':>9s}")
    for name, fn in cases:
        times, outs = {}, {}
        for b in ("python", "compiled"):
            gf2.set_backend(b)
            times[b], outs[b] = _timed(fn, repeat=1 if "bar" in name else 3)
        gf2.set_backend("compiled")
        if outs["python"] != outs["compiled"]:
            raise SystemExit(f"backends disagree on {name}")
        py, c = times["python"], times["compiled"]
        print(f"{name:30s} {py:10.3f} {c:11.3f} {py / c:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
