"""Time the compiled kernels against the pure-Python fallback.

Run ``python benchmarks/bench_kernels.py``; prints one row per workload with
the best-of-``--repeat`` time for each backend and the speedup.
"""
import argparse
import cmath
import os
import subprocess
import sys
import time

import numpy as np

from resolvent import _kernels
from resolvent.perm import Permutation


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def workloads():
    rng = np.random.default_rng(0)
    deg = 30
    coeffs = list(rng.standard_normal(deg) + 1j * rng.standard_normal(deg)) + [1]
    z0 = [1.5 * cmath.exp(1j * (2 * cmath.pi * k / deg + 0.4)) for k in range(deg)]

    c0 = list(rng.standard_normal(5) + 1j * rng.standard_normal(5)) + [1]
    dc = list(rng.standard_normal(5) + 1j * rng.standard_normal(5)) + [0]
    start = np.roots(c0[::-1]).tolist()

    s8 = [Permutation.parse("(1 2)", 8).images, Permutation.parse("(1 2 3 4 5 6 7 8)", 8).images]
    elems = _kernels.available_backends()["pure"].closure(s8, 8, 10**6)

    return {
        "aberth deg 30": lambda k: k.aberth(coeffs, z0, 500),
        "track quintic segment": lambda k: k.track_segment(c0, dc, start, 1e-3, 1e-10, 1e-12, 4.0, 8, None),
        "closure S8": lambda k: k.closure(s8, 8, 10**6),
        "cycle types S8": lambda k: k.cycle_types(elems, 8),
    }


def end_to_end(pure):
    env = dict(os.environ)
    if pure:
        env["RESOLVENT_PURE"] = "1"
    else:
        env.pop("RESOLVENT_PURE", None)
    code = (
        "import time;from resolvent.monodromy import general_family,monodromy_group;"
        "t=time.perf_counter();monodromy_group(general_family(6),seed=1);print(time.perf_counter()-t)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--skip-end-to-end", action="store_true")
    args = parser.parse_args(argv)

    backends = _kernels.available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the pure backend is available")
    names = sorted(backends)
    print(f"{'workload':28s}" + "".join(f"{n:>12s}" for n in names) + f"{'speedup':>10s}")
    for label, fn in workloads().items():
        times = {n: best_of(lambda: fn(backends[n]), args.repeat) for n in names}
        speed = times["pure"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{label:28s}" + "".join(f"{times[n]:12.4f}" for n in names) + f"{speed:10.1f}x")
    if not args.skip_end_to_end and "compiled" in backends:
        tp = end_to_end(True)
        tc = end_to_end(False)
        print(f"{'monodromy S6 (end to end)':28s}{tc:12.4f}{tp:12.4f}{tp / tc:10.1f}x")


if __name__ == "__main__":
    main()
