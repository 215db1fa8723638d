"""Per-stage timings of the fusion pipeline at a few image sizes."""
import argparse
import time

import numpy as np

from gradfuse.pipeline import fuse_pair
from gradfuse.synth import make_synth


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 520, 1024])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    for n in args.sizes:
        a, b, _, _ = make_synth(n, n, 3.0, 0, "disk")
        fuse_pair(a, b)
        walls, stages = [], {}
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            res = fuse_pair(a, b)
            walls.append(time.perf_counter() - t0)
            for k, v in res.timings.items():
                stages.setdefault(k, []).append(v)
        parts = " ".join(f"{k}={np.median(v):.1f}" for k, v in stages.items())
        print(f"{n}x{n}: {np.median(walls) * 1e3:.1f} ms  [{parts}] (ms, median of {args.repeats})")


if __name__ == "__main__":
    main()
