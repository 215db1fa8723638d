"""End-to-end acceptance gate; each test records one PASS/FAIL line in the terminal summary."""
import csv
import time

import numpy as np
import pytest

from gradfuse import batch
from gradfuse.cli import main, write_synth_pair
from gradfuse.gradient import compute_gradients, reconstruct_from_gradients
from gradfuse.image import luma
from gradfuse.metrics import normalized_mutual_information, psnr, qabf, spatial_frequency
from gradfuse.params import ABLATIONS, FusionParams, ablation_config
from gradfuse.pipeline import fuse_pair
from gradfuse.refine import area_open, guided_filter, resolve_conflicts
from gradfuse.saliency import tenengrad
from gradfuse.synth import make_synth, map_accuracy, procedural_base

import oracles


@pytest.fixture(scope="module")
def full_results(suite):
    return [fuse_pair(a, b) for _, a, b, _, _ in suite]


def test_01_gradient_round_trip(report):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        p = rng.random((64, 64))
        rec = reconstruct_from_gradients(compute_gradients(p), p.mean())
        worst = max(worst, float(np.abs(rec - p).max()))
    elapsed = time.perf_counter() - t0
    ok = report("01 gradient round-trip", worst <= 1e-3 and elapsed < 5.0,
                f"max err {worst:.2e}, {elapsed:.2f} s for 100 planes")
    assert ok


def test_02_area_open_oracle(report):
    rng = np.random.default_rng(2)
    differing = 0
    for _ in range(200):
        m = (rng.random((64, 64)) < rng.uniform(0.2, 0.8)).astype(float)
        t = int(rng.integers(1, 401))
        for conn in (4, 8):
            differing += int((area_open(m, t, conn) != oracles.area_open(m, t, conn)).sum())
    ok = report("02 area opening vs brute force", differing == 0, f"{differing} differing pixels over 400 runs")
    assert ok


def test_03_guided_filter_oracle(report):
    rng = np.random.default_rng(3)
    worst = 0.0
    for i in range(50):
        guide, p = rng.random((2, 32, 32))
        r = (1, 3, 5)[i % 3]
        eps = (1e-3, 0.3)[(i // 3) % 2]
        worst = max(worst, float(np.abs(guided_filter(guide, p, r, eps) - oracles.guided_filter(guide, p, r, eps)).max()))
    ok = report("03 guided filter vs naive", worst <= 1e-6, f"max err {worst:.2e}")
    assert ok


def test_04_tenengrad_oracle(report):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(50):
        h, w = rng.integers(9, 34, size=2)
        tw = int(rng.choice([3, 5, 7, 9]))
        p = rng.random((h, w))
        worst = max(worst, float(np.abs(tenengrad(p, tw) - oracles.tenengrad(p, tw)).max()))
    ok = report("04 Tenengrad vs explicit sums", worst <= 1e-9, f"max err {worst:.2e}")
    assert ok


def test_05_complementarity(report, suite, full_results):
    rng = np.random.default_rng(5)
    shape = (32, 32)
    cases = [(np.zeros(shape), np.zeros(shape)), (np.ones(shape), np.ones(shape)),
             (np.ones(shape), np.zeros(shape)), (np.zeros(shape), np.ones(shape))]
    cases += [tuple((rng.random((2, *shape)) > 0.5).astype(float)) for _ in range(20)]
    bad = sum(int(((a + b) != 1).sum()) for a, b in (resolve_conflicts(va, vb) for va, vb in cases))
    bad += sum(int(((r.map_a + r.map_b) != 1).sum()) for r in full_results)
    ok = report("05 complementary final maps", bad == 0, f"{bad} violating pixels")
    assert ok


def test_06_desk_scale_quality(report, suite, full_results):
    acc = [map_accuracy(r.map_a, mask) for r, (_, _, _, _, mask) in zip(full_results, suite)]
    db = [psnr(luma(r.fused), luma(truth)) for r, (_, _, _, truth, _) in zip(full_results, suite)]
    ok = report("06 synth fusion quality", min(acc) >= 0.95 and min(db) >= 35.0,
                f"accuracy min {min(acc):.5f} mean {np.mean(acc):.5f}; PSNR min {min(db):.2f} dB")
    assert ok


def test_07_copy_purity(report, suite, full_results):
    impure = 0
    for r, (_, a, b, _, _) in zip(full_results, suite):
        impure += int((~((r.fused.data == a.data) | (r.fused.data == b.data))).sum())
    ok = report("07 copy purity", impure == 0, f"{impure} channel values not copied from A or B")
    assert ok


def test_08_ablation_ordering(report, suite, full_results):
    def mean_acc(results):
        return float(np.mean([map_accuracy(r.map_a, s[4]) for r, s in zip(results, suite)]))

    scores = {"full": mean_acc(full_results)}
    for name in ABLATIONS[1:]:
        params = ablation_config(name)
        scores[name] = mean_acc([fuse_pair(a, b, params) for _, a, b, _, _ in suite])
    worse = [n for n, v in scores.items() if v > scores["full"]]
    detail = ", ".join(f"{n}={v:.5f}" for n, v in scores.items())
    ok = report("08 full pipeline >= every ablation", not worse, detail)
    assert ok


@pytest.fixture(scope="module")
def textured():
    return luma(procedural_base(128, 128, seed=21))


def test_09a_sf_constant(report):
    v = spatial_frequency(np.full((32, 32), 0.4))
    assert report("09a SF(constant) = 0", v == 0.0, f"SF = {v}")


def test_09b_nmi_identity(report, textured):
    v = normalized_mutual_information(textured, textured, textured)
    assert report("09b NMI(A,A,A) = 2", abs(v - 2.0) <= 1e-9, f"NMI = {v:.12f}")


def test_09c_qabf_identity(report, textured):
    v = qabf(textured, textured, textured)
    assert report("09c Qabf(A,A,A) >= 0.99", v >= 0.99, f"Qabf = {v:.6f}")


def test_09d_metric_oracles(report):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(5):
        a, b, f = rng.random((3, 32, 32))
        worst = max(worst,
                    abs(spatial_frequency(f) - oracles.spatial_frequency(f)),
                    abs(normalized_mutual_information(a, b, f) - oracles.nmi(a, b, f)),
                    abs(qabf(a, b, f) - oracles.qabf(a, b, f)))
    assert report("09d metrics vs naive oracles", worst <= 1e-9, f"max err {worst:.2e}")


def test_10_k_sweep(report, suite, tmp_path):
    out = tmp_path / "sweep_k.csv"
    batch.write_sweep_csv(batch.sweep("k", [0, 0.25, 0.5, 0.75, 1.0], suite), str(out))
    rows = {float(r["value"]): float(r["accuracy"]) for r in csv.DictReader(out.open())}
    assert sorted(rows) == [0.0, 0.25, 0.5, 0.75, 1.0]
    detail = ", ".join(f"k={k:g}: {v:.7f}" for k, v in rows.items())
    ok = report("10 k sweep: acc(0.5) >= acc(0)", rows[0.5] >= rows[0.0], detail)
    assert ok


def test_11_performance(report, tmp_path):
    a, b, _, _ = make_synth(520, 520, 3.0, 0, "disk")
    fuse_pair(a, b)  # warm caches and imports
    t0 = time.perf_counter()
    fuse_pair(a, b)
    single = time.perf_counter() - t0

    d = tmp_path / "pairs"
    d.mkdir()
    for seed in range(20):
        write_synth_pair(str(d), f"s{seed:02d}", *make_synth(256, 256, 3.0, seed, ("half", "disk")[seed % 2]))
    t0 = time.perf_counter()
    rep = batch.batch_evaluate(str(d), FusionParams(), jobs=4)
    many = time.perf_counter() - t0
    ok = report("11 performance", single < 2.0 and many < 15.0 and not rep.failures,
                f"520x520 pair {single:.2f} s; 20-pair batch with 4 workers {many:.2f} s")
    assert ok


def test_12_batch_determinism(report, tmp_path):
    d = tmp_path / "pairs"
    d.mkdir()
    for seed in range(6):
        write_synth_pair(str(d), f"s{seed}", *make_synth(128, 128, 3.0, seed, ("half", "disk")[seed % 2]))
    first, second = tmp_path / "1.csv", tmp_path / "2.csv"
    assert main(["batch", str(d), "-o", str(first), "--jobs", "2"]) == 0
    assert main(["batch", str(d), "-o", str(second), "--jobs", "2"]) == 0
    same = first.read_bytes() == second.read_bytes()
    assert report("12 byte-identical batch CSVs", same, f"{len(first.read_bytes())} bytes each")
