"""End-to-end two-image fusion."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import gici, refine
from .gradient import initial_fusion
from .image import ColorImage, luma
from .params import FusionParams
from .saliency import tenengrad


@dataclass
class FusionResult:
    fused: ColorImage
    map_a: np.ndarray
    map_b: np.ndarray
    initial_fused: np.ndarray
    timings: dict[str, float] = field(default_factory=dict)
    # named intermediate planes, for inspection and the CLI dump flags
    stages: dict[str, np.ndarray] = field(default_factory=dict)


def compose(a: ColorImage, b: ColorImage, ma: np.ndarray, mb: np.ndarray) -> ColorImage:
    """Pixel-wise selection ``F = ma*A + mb*B`` for binary complementary maps."""
    if a.data.shape != b.data.shape or a.space != b.space:
        raise ValueError(f"sources differ: {a.data.shape}/{a.space.value} vs {b.data.shape}/{b.space.value}")
    ma = np.asarray(ma)
    mb = np.asarray(mb)
    if ma.shape != a.shape or mb.shape != a.shape:
        raise ValueError(f"decision maps must be {a.shape}, got {ma.shape} and {mb.shape}")
    if not (np.isin(ma, (0.0, 1.0)).all() and np.array_equal(ma + mb, np.ones_like(ma))):
        raise ValueError("decision maps must be binary and complementary")
    # a select rather than a weighted sum keeps every output sample an exact copy
    return ColorImage(np.where(ma[:, :, None] > 0.5, a.data, b.data), a.space)


class _Clock:
    def __init__(self):
        self.timings = {}
        self._t = time.perf_counter()

    def lap(self, name):
        now = time.perf_counter()
        self.timings[name] = (now - self._t) * 1e3
        self._t = now


def fuse_pair(a: ColorImage, b: ColorImage, params: FusionParams | None = None) -> FusionResult:
    params = params or FusionParams()
    abl = params.ablation
    if a.shape != b.shape:
        raise ValueError(f"source images differ in size: {a.shape} vs {b.shape}")
    if a.space != b.space:
        raise ValueError(f"source images differ in colour space: {a.space.value} vs {b.space.value}")
    h, w = a.shape
    if min(h, w) < params.tw:
        raise ValueError(f"images of {w}x{h} are smaller than the Tenengrad window {params.tw}")
    clock = _Clock()
    stages = {}

    la, lb = luma(a), luma(b)
    f = initial_fusion(la, lb)
    clock.lap("initial_fusion")

    sa, sb, sf = (tenengrad(p, params.tw) for p in (la, lb, f))
    stages.update(saliency_a=sa, saliency_b=sb, saliency_f=sf)
    clock.lap("saliency")

    if abl.enhance:
        if abl.enhance_reference == "fused":
            dif_a = gici.difference_saliency(sf, sa)
            dif_b = gici.difference_saliency(sf, sb)
        else:
            dif_a = gici.difference_saliency(sb, sa)
            dif_b = gici.difference_saliency(sa, sb)
        sha = gici.enhanced_difference(dif_a, params.tw)
        shb = gici.enhanced_difference(dif_b, params.tw)
        if params.pairing == "cross":
            sha, shb = shb, sha
        stages.update(enhanced_a=sha, enhanced_b=shb)
        qa, _ = gici.enhance(sa, sb, sha, shb, params.k)
    else:
        qa = sa
    ma = gici.initial_decision(qa, sf)
    mb = 1.0 - ma
    stages.update(decision_initial=ma)
    clock.lap("gici")

    map_a, map_b = refine.refine_pair(ma, mb, la, lb, params, stages, clock.lap)

    fused = compose(a, b, map_a, map_b)
    clock.lap("compose")
    return FusionResult(fused, map_a, map_b, f, clock.timings, stages)
