"""Command line interface: ``fuse``, ``eval``, ``synth``, ``batch`` and ``sweep``.

Exit codes: 0 success, 1 usage or input error, 2 partial batch failure.
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys

import numpy as np

from . import batch as batch_mod
from .image import ImageError, load_image, luma, save_image
from .metrics import evaluate
from .params import ABLATIONS, FusionParams, ablation_config, load_config
from .pipeline import fuse_pair
from .synth import MASKS, make_synth, synth_suite

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2

log = logging.getLogger("gradfuse")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("fusion parameters (override --config)")
    g.add_argument("--config", help="key=value parameter file")
    g.add_argument("--ablate", choices=ABLATIONS, help="switch off one pipeline stage")
    g.add_argument("--k", type=float)
    g.add_argument("--th", type=float)
    g.add_argument("--r", type=int)
    g.add_argument("--eps", type=float)
    g.add_argument("--q", type=float)
    g.add_argument("--tw", type=int)
    g.add_argument("--connectivity", type=int, choices=(4, 8))
    g.add_argument("--pairing", choices=("cross", "literal"))


def params_from_args(args) -> FusionParams:
    values = load_config(args.config) if getattr(args, "config", None) else {}
    for key in ("k", "th", "r", "eps", "q", "tw", "connectivity", "pairing"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    try:
        params = FusionParams().replace(**values)
        if getattr(args, "ablate", None):
            params = ablation_config(args.ablate, params)
    except (TypeError, ValueError) as err:
        raise UsageError(str(err)) from None
    return params


def _suffixed(path: str, suffix: str) -> str:
    stem, ext = os.path.splitext(path)
    return f"{stem}_{suffix}{ext or '.png'}"


def _normalized(m: np.ndarray) -> np.ndarray:
    top = float(m.max())
    return m / top if top > 0 else np.zeros_like(m)


def cmd_fuse(args) -> int:
    params = params_from_args(args)
    a, b = load_image(args.a), load_image(args.b)
    res = fuse_pair(a, b, params)
    save_image(res.fused, args.output)
    st = res.stages
    if args.map:
        save_image(res.map_a, args.map)
    if args.dump_initial:
        save_image(res.initial_fused, args.dump_initial)
    if args.dump_saliency:
        for tag in ("a", "b", "f"):
            save_image(_normalized(st[f"saliency_{tag}"]), _suffixed(args.dump_saliency, tag))
    if args.dump_decision_initial:
        save_image(st["decision_initial"], args.dump_decision_initial)
    for flag, key in (("dump_areaopen", "areaopen"), ("dump_guided", "guided"), ("dump_verified", "verified")):
        path = getattr(args, flag)
        if path:
            for tag in ("a", "b"):
                save_image(st[f"{key}_{tag}"], _suffixed(path, tag))
    if args.dump_final_maps:
        save_image(res.map_a, _suffixed(args.dump_final_maps, "a"))
        save_image(res.map_b, _suffixed(args.dump_final_maps, "b"))
    total = sum(res.timings.values())
    log.info("fused %s + %s -> %s in %.1f ms", args.a, args.b, args.output, total)
    return EXIT_OK


EVAL_COLUMNS = ("name", "sf", "nmi", "qabf", "params_hash")


def cmd_eval(args) -> int:
    params = params_from_args(args)
    a, b, f = (luma(load_image(p)) for p in (args.a, args.b, args.fused))
    name = args.name or os.path.splitext(os.path.basename(args.fused))[0]
    rep = evaluate(a, b, f, name, params.digest())
    print(f"{rep.name} sf={rep.sf:.4f} nmi={rep.nmi:.4f} qabf={rep.qabf:.4f} params={rep.params_hash}")
    if args.csv:
        new = not os.path.exists(args.csv) or os.path.getsize(args.csv) == 0
        with open(args.csv, "a", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            if new:
                w.writerow(EVAL_COLUMNS)
            w.writerow([rep.name, repr(rep.sf), repr(rep.nmi), repr(rep.qabf), rep.params_hash])
    return EXIT_OK


def write_synth_pair(out_dir: str, name: str, a, b, truth, mask) -> None:
    save_image(a, os.path.join(out_dir, f"{name}-A.png"))
    save_image(b, os.path.join(out_dir, f"{name}-B.png"))
    save_image(truth, os.path.join(out_dir, f"{name}-GT.png"))
    save_image(mask, os.path.join(out_dir, f"{name}-MASK.png"))


def cmd_synth(args) -> int:
    os.makedirs(args.output, exist_ok=True)
    for i in range(args.count):
        seed = args.seed + i
        a, b, truth, mask = make_synth(args.width, args.height, args.sigma, seed, args.mask)
        write_synth_pair(args.output, f"synth-{args.mask}-{seed:03d}", a, b, truth, mask)
    print(f"wrote {args.count} pair(s) to {args.output}")
    return EXIT_OK


def cmd_batch(args) -> int:
    params = params_from_args(args)
    report = batch_mod.batch_evaluate(args.directory, params, args.out_dir, args.jobs)
    batch_mod.write_csv(report, args.output)
    means = " ".join(f"{k}={v:.4f}" for k, v in report.means.items())
    print(f"{len(report.ok_rows)}/{len(report.rows)} pairs ok in {report.runtime_s:.2f} s; {means}")
    for row in report.failures:
        print(f"FAILED {row['name']}: {row['error']}", file=sys.stderr)
    return EXIT_PARTIAL if report.failures else EXIT_OK


def cmd_sweep(args) -> int:
    params = params_from_args(args)
    if args.directory:
        pairs = []
        for pf in batch_mod.find_pairs(args.directory):
            if pf.b is None:
                continue
            truth = load_image(pf.gt) if pf.gt else None
            mask = luma(load_image(pf.mask)) > 0.5 if pf.mask else None
            pairs.append((pf.name, load_image(pf.a), load_image(pf.b), truth, mask))
    else:
        pairs = synth_suite(args.pairs, args.size, args.sigma)
    rows = batch_mod.sweep(args.param, args.values, pairs, params, args.jobs)
    batch_mod.write_sweep_csv(rows, args.output)
    for row in rows:
        acc = row["accuracy"]
        print(f"{row['param']}={row['value']}: accuracy={acc if acc is None else f'{acc:.6f}'}")
    return EXIT_PARTIAL if any(r["failed"] for r in rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    parser = _Parser(prog="gradfuse", description="Gradient-domain multi-focus image fusion",
                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fuse", parents=[common], help="fuse two partially focused images")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--map", help="write the final decision map for A")
    p.add_argument("--dump-initial", help="write the gradient-domain initial fusion")
    p.add_argument("--dump-saliency", help="write Tenengrad maps (suffixes _a/_b/_f, max-normalised)")
    p.add_argument("--dump-decision-initial", help="write the first binary decision map")
    p.add_argument("--dump-areaopen", help="write area-opened maps (_a/_b)")
    p.add_argument("--dump-guided", help="write guided-filter outputs (_a/_b)")
    p.add_argument("--dump-verified", help="write consistency-verified maps (_a/_b)")
    p.add_argument("--dump-final-maps", help="write both final maps (_a/_b)")
    _add_param_flags(p)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("eval", parents=[common], help="score a fused image against its sources")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("fused")
    p.add_argument("--name")
    p.add_argument("--csv", default="metrics.csv", help="append the report here ('' to skip)")
    _add_param_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", parents=[common], help="write synthetic pairs with ground truth")
    p.add_argument("--width", type=int, default=256)
    p.add_argument("--height", type=int, default=256)
    p.add_argument("--sigma", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mask", choices=MASKS, default="half")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("batch", parents=[common], help="fuse and score every pair in a directory")
    p.add_argument("directory")
    p.add_argument("-o", "--output", required=True, help="report CSV")
    p.add_argument("--out-dir", help="write fused images and maps here")
    p.add_argument("--jobs", type=int, default=1)
    _add_param_flags(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("sweep", parents=[common], help="evaluate a parameter over several values")
    p.add_argument("--param", choices=("k", "th", "r", "eps", "q", "tw"), required=True)
    p.add_argument("--values", type=float, nargs="+", required=True)
    p.add_argument("--dir", dest="directory", help="pair directory (default: built-in synth suite)")
    p.add_argument("--pairs", type=int, default=20)
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--sigma", type=float, default=3.0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    _add_param_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ImageError, batch_mod.BatchError, ValueError, OSError) as err:
        print(f"gradfuse: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
