"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from lambda_potts._core import available_backends
from lambda_potts.finite_validation import layout


def cases(rng):
    lay3 = layout(3)
    tab3 = rng.normal(size=(len(lay3.vertices), 3, 3))
    weights = rng.uniform(size=3**15)
    starts = rng.uniform(np.log(1e-3), np.log(1e3), size=(64, 8))
    w = (1.0, 1.0, 0.984375, 4.0)
    return {
        "log_weights n=3 (3^15 configs)": lambda k: k.log_weights(lay3.parent, lay3.grandparent, tab3, 0.4),
        "marginal_sum 3^15 -> 3^7": lambda k: k.marginal_sum(weights, 3**7),
        "damped_iterate 64 starts x 2000 steps": lambda k: k.damped_iterate(starts, w, 2, 0.5, 2000, 0.0),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = available_backends()
    rng = np.random.default_rng(0)
    print(f"{'kernel':40s}" + "".join(f"{name:>12s}" for name in backends) + "     speedup")
    for label, fn in cases(rng).items():
        times = {}
        for name, kern in backends.items():
            times[name] = min(timeit.repeat(lambda: fn(kern), number=1, repeat=args.repeat))
        row = f"{label:40s}" + "".join(f"{times[n]:11.3f}s" for n in backends)
        if "cython" in times:
            row += f"  {times['python'] / times['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
