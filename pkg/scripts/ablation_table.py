"""Mean decision-map accuracy and PSNR for every ablation preset on the synth suite.

    python scripts/ablation_table.py --pairs 20 --size 256 --out ablations.csv
"""
import argparse
import csv

from scipy.stats import rankdata

from gradfuse.batch import evaluate_pairs
from gradfuse.params import ABLATIONS, ablation_config
from gradfuse.synth import synth_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=20)
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--sigma", type=float, default=3.0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", help="optional CSV")
    args = ap.parse_args()

    suite = synth_suite(args.pairs, args.size, args.sigma)
    rows = []
    for name in ABLATIONS:
        rep = evaluate_pairs(suite, ablation_config(name), args.jobs)
        m = rep.means
        rows.append([name, m["accuracy"], m["psnr"], m["sf"], m["nmi"], m["qabf"]])
    # rank-sum over the five metrics (1 = best in each); a local summary, not comparable across suites
    ranks = [rankdata([-r[c] for r in rows]) for c in range(1, 6)]
    for i, r in enumerate(rows):
        r.append(float(sum(rk[i] for rk in ranks)))
    for name, acc, db, sf, nmi, q, score in rows:
        print(f"{name:18s} acc={acc:.6f} psnr={db:7.3f} sf={sf:.3f} nmi={nmi:.4f} qabf={q:.4f} rank_sum={score:g}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("ablation", "accuracy", "psnr", "sf", "nmi", "qabf", "rank_sum"))
            w.writerows(rows)


if __name__ == "__main__":
    main()
