"""Decision-map post-processing.

Area opening removes small misclassified blobs, the guided filter aligns the
map with image edges, a majority vote re-binarises it and the last step makes
the two maps exactly complementary.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from ._box import box_mean, box_sum

_STRUCTURE = {
    4: ndimage.generate_binary_structure(2, 1),
    8: ndimage.generate_binary_structure(2, 2),
}


def adaptive_area_threshold(th: float, width: int, height: int) -> int:
    if not 0 < th < 1:
        raise ValueError(f"th must lie in (0, 1), got {th}")
    return max(1, int(math.floor(th * width * height + 0.5)))


def area_open(m: np.ndarray, t: int, connectivity: int = 8) -> np.ndarray:
    """Zero every foreground component with fewer than ``t`` pixels."""
    if t < 1:
        raise ValueError(f"area threshold must be >= 1, got {t}")
    if connectivity not in _STRUCTURE:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    fg = np.asarray(m) > 0.5
    labels, n = ndimage.label(fg, structure=_STRUCTURE[connectivity])
    if n == 0:
        return np.zeros(fg.shape)
    sizes = np.bincount(labels.ravel())
    keep = sizes >= t
    keep[0] = False
    return keep[labels].astype(np.float64)


def guided_filter(guide: np.ndarray, src: np.ndarray, r: int = 5, eps: float = 0.3) -> np.ndarray:
    """Grey-scale guided filter with (2r+1)^2 box windows and replicate borders."""
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if r < 1:
        raise ValueError(f"radius must be >= 1, got {r}")
    I = np.asarray(guide, dtype=np.float64)
    p = np.asarray(src, dtype=np.float64)
    if I.shape != p.shape:
        raise ValueError(f"guide and input differ in shape: {I.shape} vs {p.shape}")
    mean_I = box_mean(I, r)
    mean_p = box_mean(p, r)
    var_I = box_mean(I * I, r) - mean_I * mean_I
    cov_Ip = box_mean(I * p, r) - mean_I * mean_p
    a = cov_Ip / (var_I + eps)
    b = mean_p - a * mean_I
    out = box_mean(a, r) * I + box_mean(b, r)
    return np.clip(out, 0.0, 1.0)


def consistency_window(q: float, width: int, height: int) -> int:
    """Odd window side whose area approximates ``q * width * height`` (at least 3)."""
    if not q > 0:
        raise ValueError(f"q must be > 0, got {q}")
    side = int(math.floor(math.sqrt(q * width * height) + 0.5))
    if side % 2 == 0:
        side -= 1
    return max(3, side)


def consistency_verify(fm: np.ndarray, side: int) -> np.ndarray:
    """Majority vote of a soft map over a ``side x side`` window."""
    if side < 3 or side % 2 == 0:
        raise ValueError(f"window side must be odd and >= 3, got {side}")
    total = box_sum(np.asarray(fm, dtype=np.float64), side // 2)
    return (total >= side * side / 2.0).astype(np.float64)


def resolve_conflicts(vma: np.ndarray, vmb: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Make the pair complementary: undecided (0,0) pixels go to B, doubly claimed (1,1) to A."""
    a = np.asarray(vma) > 0.5
    b = np.asarray(vmb) > 0.5
    if a.shape != b.shape:
        raise ValueError(f"maps differ in shape: {a.shape} vs {b.shape}")
    # (0,0) -> (0,1) and (1,1) -> (1,0): in every case A keeps exactly its own claim
    out_a = a.astype(np.float64)
    return out_a, 1.0 - out_a


def refine_pair(ma, mb, guide_a, guide_b, params, stages: dict | None = None, lap=None):
    """Run the post-processing chain on complementary initial maps, honouring ablation switches.

    Skipped stages pass their input through; without consistency verification
    the guided outputs are binarised at 0.5.
    """
    abl = params.ablation
    stages = {} if stages is None else stages
    lap = lap or (lambda name: None)
    h, w = np.shape(ma)

    if abl.area_open:
        t = adaptive_area_threshold(params.th, w, h)
        ma = area_open(ma, t, params.connectivity)
        mb = area_open(mb, t, params.connectivity)
    stages.update(areaopen_a=ma, areaopen_b=mb)
    lap("area_open")

    if abl.guided:
        fma = guided_filter(guide_a, ma, params.r, params.eps)
        fmb = guided_filter(guide_b, mb, params.r, params.eps)
    else:
        fma, fmb = ma, mb
    stages.update(guided_a=fma, guided_b=fmb)
    lap("guided")

    if abl.consistency:
        side = consistency_window(params.q, w, h)
        vma = consistency_verify(fma, side)
        vmb = consistency_verify(fmb, side)
    else:
        vma = (np.asarray(fma) >= 0.5).astype(np.float64)
        vmb = (np.asarray(fmb) >= 0.5).astype(np.float64)
    stages.update(verified_a=vma, verified_b=vmb)
    out = resolve_conflicts(vma, vmb)
    lap("consistency")
    return out
