"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot primitives on the shapes the package actually hits
(small dense matrices over tiny prime fields) plus one end-to-end
workload (an Ext table at N = 4).

Run:  python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from exactkit import _corepy  # noqa: E402
from exactkit.prng import Xorshift64Star  # noqa: E402

try:
    from exactkit import _corec
except ImportError:
    _corec = None


def make_batch(rng, p, dim, count):
    return [tuple(rng.randrange(p) for _ in range(dim * dim))
            for _ in range(count)]


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(repeat):
    rows = []
    for p, dim, count in ((2, 4, 4000), (2, 8, 1500), (3, 6, 1500),
                          (5, 8, 800)):
        rng = Xorshift64Star(1234)
        mats = make_batch(rng, p, dim, count)
        pairs = list(zip(mats[::2], mats[1::2]))

        def run_mul(mod):
            for a, b in pairs:
                mod.mat_mul(a, dim, dim, b, dim, dim, p)

        def run_rref(mod):
            for a in mats:
                mod.rref(a, dim, dim, p)

        for name, job in (("mat_mul", run_mul), ("rref", run_rref)):
            py_t = time_call(lambda: job(_corepy), repeat)
            if _corec is not None:
                c_t = time_call(lambda: job(_corec), repeat)
                rows.append((name, p, dim, py_t, c_t, py_t / c_t))
            else:
                rows.append((name, p, dim, py_t, None, None))
    return rows


def bench_end_to_end(repeat):
    """The randomized calculus suite (25 trials at N = 3) per backend.

    Every matrix call site looks the kernel functions up dynamically, so
    swapping the module attributes switches the backend; the global Ext
    and Hom caches are cleared so neither side starts warm.
    """
    import exactkit.kernels as kernels
    from exactkit import ext as ext_mod
    from exactkit.cli import RunConfig, run_core_suite

    results = {}
    for backend in ("python", "c"):
        if backend == "c" and _corec is None:
            continue
        impl = _corec if backend == "c" else _corepy
        kernels.mat_mul = impl.mat_mul
        kernels.rref = impl.rref

        def job():
            ext_mod._EXT_CACHE.clear()
            ext_mod._HOM_CACHE.clear()
            cfg = RunConfig(2, 3, None, 25, 99, "json", None, 1)
            report = run_core_suite(cfg)
            assert report["status"] == "pass"

        results[backend] = time_call(job, repeat)
    return results


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print("kernel microbenchmarks (best of %d):" % args.repeat)
    print("%-8s %-3s %-4s %10s %10s %8s" % ("op", "p", "dim", "python",
                                            "compiled", "speedup"))
    for name, p, dim, py_t, c_t, ratio in bench_kernels(args.repeat):
        if c_t is None:
            print("%-8s %-3d %-4d %9.1fms %10s %8s"
                  % (name, p, dim, py_t * 1e3, "n/a", "n/a"))
        else:
            print("%-8s %-3d %-4d %9.1fms %9.1fms %7.1fx"
                  % (name, p, dim, py_t * 1e3, c_t * 1e3, ratio))
    print()
    e2e = bench_end_to_end(args.repeat)
    print("end-to-end calculus suite (p=2, N=3, 25 trials):")
    for backend, secs in sorted(e2e.items()):
        print("  %-8s %7.2fs" % (backend, secs))
    if len(e2e) == 2:
        print("  speedup  %6.1fx" % (e2e["python"] / e2e["c"]))


if __name__ == "__main__":
    main()
