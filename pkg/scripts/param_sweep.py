"""Sweep one fusion parameter over the synth suite and write a CSV of mean metrics.

    python scripts/param_sweep.py k 0 0.25 0.5 0.75 1.0 --out sweep_k.csv
"""
import argparse

from gradfuse.batch import sweep, write_sweep_csv
from gradfuse.synth import synth_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("param", choices=("k", "th", "r", "eps", "q", "tw"))
    ap.add_argument("values", type=float, nargs="+")
    ap.add_argument("--pairs", type=int, default=20)
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--sigma", type=float, default=3.0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="sweep.csv")
    args = ap.parse_args()

    rows = sweep(args.param, args.values, synth_suite(args.pairs, args.size, args.sigma), jobs=args.jobs)
    write_sweep_csv(rows, args.out)
    for r in rows:
        print(f"{args.param}={r['value']}: accuracy={r['accuracy']:.7f} psnr={r['psnr']:.3f} qabf={r['qabf']:.4f}")


if __name__ == "__main__":
    main()
