"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each row checks that both backends return identical arrays before timing.
"""
import argparse
import importlib
import timeit

import numpy as np

from torus_harmonics import _pykernels

try:
    _ck = importlib.import_module("torus_harmonics._ckernels")
except ImportError:
    _ck = None


def cases():
    rng = np.random.default_rng(0)
    for m, n in ((64, 64), (128, 128), (1, 1024), (256, 256)):
        a = np.abs(rng.standard_normal((m, n)))
        yield f"arc_maximal {m}x{n}", "arc_maximal", (a,)
    for m, N, R in ((64, 64, 4), (128, 128, 4), (1, 1024, 4)):
        fine = rng.standard_normal((m, N * R))
        w = rng.standard_normal(N * R // 2)
        yield f"pair_sum {m}x{N} R={R}", "pair_sum", (fine, R, w, True)


def best_of(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if _ck is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'case':<28}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>10}  identical")
    for label, name, call_args in cases():
        py = getattr(_pykernels, name)
        t_py = best_of(py, call_args, args.repeat)
        if _ck is None:
            print(f"{label:<28}{1e3 * t_py:>12.2f}{'-':>13}{'-':>10}  -")
            continue
        c = getattr(_ck, name)
        same = np.array_equal(py(*call_args), c(*call_args))
        t_c = best_of(c, call_args, args.repeat)
        print(f"{label:<28}{1e3 * t_py:>12.2f}{1e3 * t_c:>13.2f}{t_py / t_c:>9.1f}x  {same}")


if __name__ == "__main__":
    main()
