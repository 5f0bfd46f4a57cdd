"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--paths N] [--repeat R]

Times the two hot paths: path accumulation for the Monte Carlo (one 2^16-path
chunk at a time, as the simulator calls it) and root isolation of the
equilibrium polynomial over a 30x30 theta grid.
"""
import argparse
import time

import numpy as np

from hftkyle import _kernels_py
from hftkyle import sextic
from hftkyle.model import ThetaPair

try:
    from hftkyle import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_paths(mod, n, repeat):
    rng = np.random.default_rng(0)
    chunk = 1 << 16
    draws = [rng.standard_normal((4, chunk)) for _ in range(max(1, n // chunk))]

    def run():
        for v, z, u1, u2 in draws:
            mod.accumulate_paths(v, z, u1, u2, 1.37, 0.37, 0.2, 0.3, 0.6, False)
    return best_of(run, repeat)


def bench_roots(mod, repeat):
    polys = [sextic.build_beta_polynomial(ThetaPair(float(a), float(b))).coefficients
             for a in np.logspace(-3, 3, 30) for b in np.concatenate([[0.0], np.logspace(-3, 3, 29)])]
    saved = sextic.kernels.bracket_root, sextic.kernels.horner_comp

    def run():
        for c in polys:
            sextic._unit_interval_root(c, sextic.DEFAULT_TOL, "bench")
    sextic.kernels.bracket_root, sextic.kernels.horner_comp = mod.bracket_root, mod.horner_comp
    try:
        return best_of(run, repeat)
    finally:
        sextic.kernels.bracket_root, sextic.kernels.horner_comp = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    mods = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    if _kernels_c is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':<28}" + "".join(f"{name:>12}" for name, _ in mods))
    rows = [
        (f"accumulate_paths ({args.paths:.0e})", lambda m: bench_paths(m, args.paths, args.repeat)),
        ("root isolation (900 pts)", lambda m: bench_roots(m, args.repeat)),
    ]
    for label, fn in rows:
        times = [fn(m) for _, m in mods]
        line = f"{label:<28}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times)
        if len(times) == 2:
            line += f"   speedup x{times[0] / times[1]:.2f}"
        print(line)


if __name__ == "__main__":
    main()
