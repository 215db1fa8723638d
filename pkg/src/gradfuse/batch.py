"""Directory-level evaluation, CSV reports and parameter sweeps.

Pairs are discovered by file name: ``<name>-A.<ext>`` and ``<name>-B.<ext>``,
optionally accompanied by ``<name>-GT.<ext>`` (all-in-focus truth) and
``<name>-MASK.<ext>`` (white where A is in focus).
"""
from __future__ import annotations

import csv
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .image import ColorImage, load_image, luma, save_image
from .metrics import evaluate, psnr
from .params import FusionParams
from .pipeline import fuse_pair
from .synth import map_accuracy

log = logging.getLogger(__name__)

EXTENSIONS = (".png", ".pgm", ".ppm", ".pnm")
COLUMNS = ("name", "status", "sf", "nmi", "qabf", "accuracy", "psnr", "params_hash", "error")
METRIC_COLUMNS = ("sf", "nmi", "qabf", "accuracy", "psnr")


class BatchError(RuntimeError):
    pass


@dataclass(frozen=True)
class PairFiles:
    name: str
    a: str
    b: str | None
    gt: str | None = None
    mask: str | None = None


@dataclass
class BatchReport:
    rows: list[dict]
    means: dict[str, float] = field(default_factory=dict)
    runtime_s: float = 0.0

    @property
    def ok_rows(self) -> list[dict]:
        return [r for r in self.rows if r["status"] == "ok"]

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.rows if r["status"] != "ok"]


def worker_cap(requested: int | None = None) -> int:
    """Worker count, capped by the ``GRADFUSE_THREADS`` environment variable."""
    n = requested if requested and requested > 0 else (os.cpu_count() or 1)
    env = os.environ.get("GRADFUSE_THREADS")
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            log.warning("ignoring non-integer GRADFUSE_THREADS=%r", env)
    return n


def find_pairs(directory: str) -> list[PairFiles]:
    if not os.path.isdir(directory):
        raise BatchError(f"not a directory: {directory}")
    by_name: dict[str, dict[str, str]] = {}
    for fn in sorted(os.listdir(directory)):
        stem, ext = os.path.splitext(fn)
        if ext.lower() not in EXTENSIONS or "-" not in stem:
            continue
        name, role = stem.rsplit("-", 1)
        role = role.upper()
        if role in ("A", "B", "GT", "MASK"):
            by_name.setdefault(name, {}).setdefault(role, os.path.join(directory, fn))
    pairs = [
        PairFiles(name, roles["A"], roles.get("B"), roles.get("GT"), roles.get("MASK"))
        for name, roles in sorted(by_name.items())
        if "A" in roles
    ]
    if not pairs:
        raise BatchError(f"no pairs found in {directory}")
    return pairs


def score_pair(name: str, a: ColorImage, b: ColorImage, params: FusionParams,
               truth: ColorImage | None = None, mask: np.ndarray | None = None):
    """Fuse one pair and compute its report row. Returns ``(row, FusionResult)``."""
    res = fuse_pair(a, b, params)
    la, lb, lf = luma(a), luma(b), luma(res.fused)
    m = evaluate(la, lb, lf, name, params.digest())
    row = {"name": name, "status": "ok", "sf": m.sf, "nmi": m.nmi, "qabf": m.qabf,
           "accuracy": None, "psnr": None, "params_hash": m.params_hash, "error": ""}
    if mask is not None:
        row["accuracy"] = map_accuracy(res.map_a, mask)
    if truth is not None:
        row["psnr"] = psnr(lf, luma(truth))
    return row, res


def _failed(name: str, params: FusionParams, err: Exception) -> dict:
    row = dict.fromkeys(COLUMNS)
    row.update(name=name, status="failed", params_hash=params.digest(), error=f"{type(err).__name__}: {err}")
    return row


def _run_files(job) -> dict:
    pair, params, out_dir = job
    try:
        if pair.b is None:
            raise BatchError(f"missing B image for {pair.name}")
        a, b = load_image(pair.a), load_image(pair.b)
        truth = load_image(pair.gt) if pair.gt else None
        mask = luma(load_image(pair.mask)) > 0.5 if pair.mask else None
        row, res = score_pair(pair.name, a, b, params, truth, mask)
        if out_dir:
            save_image(res.fused, os.path.join(out_dir, f"{pair.name}-F.png"))
            save_image(res.map_a, os.path.join(out_dir, f"{pair.name}-MAP.png"))
        return row
    except Exception as err:  # a bad pair must not abort the batch
        log.warning("pair %s failed: %s", pair.name, err)
        return _failed(pair.name, params, err)


def _run_arrays(job) -> dict:
    (name, a, b, truth, mask), params = job
    try:
        return score_pair(name, a, b, params, truth, mask)[0]
    except Exception as err:
        log.warning("pair %s failed: %s", name, err)
        return _failed(name, params, err)


def _map(fn, jobs, n_workers: int) -> list:
    if n_workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(n_workers, len(jobs))) as ex:
        return list(ex.map(fn, jobs))  # input order regardless of completion order


def aggregate(rows: list[dict]) -> dict[str, float]:
    means = {}
    for col in METRIC_COLUMNS:
        vals = [r[col] for r in rows if r["status"] == "ok" and r[col] is not None]
        if vals:
            means[col] = float(np.mean(vals))
    return means


def batch_evaluate(directory: str, params: FusionParams | None = None, out_dir: str | None = None,
                   jobs: int = 1) -> BatchReport:
    params = params or FusionParams()
    t0 = time.perf_counter()
    pairs = find_pairs(directory)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    rows = _map(_run_files, [(p, params, out_dir) for p in pairs], worker_cap(jobs))
    return BatchReport(rows, aggregate(rows), time.perf_counter() - t0)


def evaluate_pairs(pairs, params: FusionParams | None = None, jobs: int = 1) -> BatchReport:
    """Like :func:`batch_evaluate` for in-memory ``(name, a, b, truth, mask)`` tuples."""
    params = params or FusionParams()
    t0 = time.perf_counter()
    rows = _map(_run_arrays, [(p, params) for p in pairs], worker_cap(jobs))
    return BatchReport(rows, aggregate(rows), time.perf_counter() - t0)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(report: BatchReport, path: str) -> None:
    """Rows in input order followed by a ``MEAN`` row; no wall-clock fields, so reruns are byte-identical."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in report.rows:
            w.writerow([_fmt(row.get(c)) for c in COLUMNS])
        hashes = {r["params_hash"] for r in report.rows}
        mean_row = {"name": "MEAN", "status": f"{len(report.ok_rows)}/{len(report.rows)}",
                    "params_hash": hashes.pop() if len(hashes) == 1 else "", "error": ""}
        mean_row.update(report.means)
        w.writerow([_fmt(mean_row.get(c)) for c in COLUMNS])


def read_csv(path: str) -> BatchReport:
    rows, means = [], {}
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            parsed = dict(rec)
            for col in METRIC_COLUMNS:
                parsed[col] = float(rec[col]) if rec[col] else None
            if rec["name"] == "MEAN":
                means = {c: parsed[c] for c in METRIC_COLUMNS if parsed[c] is not None}
            else:
                rows.append(parsed)
    return BatchReport(rows, means)


SWEEP_COLUMNS = ("param", "value", "pairs", "failed", "accuracy", "psnr", "sf", "nmi", "qabf")


def sweep(param: str, values, pairs, base: FusionParams | None = None, jobs: int = 1) -> list[dict]:
    """Evaluate ``pairs`` once per parameter value; returns one row of means per value."""
    base = base or FusionParams()
    if param not in ("k", "th", "r", "eps", "q", "tw"):
        raise ValueError(f"cannot sweep {param!r}")
    out = []
    for v in values:
        v = int(v) if param in ("r", "tw") else float(v)
        rep = evaluate_pairs(pairs, base.replace(**{param: v}), jobs)
        row = {"param": param, "value": v, "pairs": len(rep.ok_rows), "failed": len(rep.failures)}
        row.update({c: rep.means.get(c) for c in ("accuracy", "psnr", "sf", "nmi", "qabf")})
        out.append(row)
    return out


def write_sweep_csv(rows: list[dict], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in SWEEP_COLUMNS])

