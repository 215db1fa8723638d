"""Synthetic multi-focus pairs with known ground truth."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .image import ColorImage, ColorSpace

MASKS = ("half", "disk", "blob")


@dataclass(frozen=True)
class SynthSpec:
    base: ColorImage
    mask: np.ndarray
    sigma: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if np.shape(self.mask) != self.base.shape:
            raise ValueError(f"mask shape {np.shape(self.mask)} does not match base {self.base.shape}")


def gaussian_blur(data: np.ndarray, sigma: float) -> np.ndarray:
    """Per-channel Gaussian blur, kernel radius ceil(3*sigma), replicate borders."""
    if sigma <= 0:
        return np.array(data, dtype=np.float64)
    radius = math.ceil(3 * sigma)
    sig = (sigma, sigma, 0) if np.ndim(data) == 3 else sigma
    return ndimage.gaussian_filter(np.asarray(data, dtype=np.float64), sig, mode="nearest",
                                   truncate=radius / sigma)


def _value_noise(rng: np.random.Generator, h: int, w: int, cell: int) -> np.ndarray:
    gh, gw = h // cell + 2, w // cell + 2
    grid = rng.random((gh, gw))
    ys = np.arange(h) / cell
    xs = np.arange(w) / cell
    yy, xx = np.meshgrid(ys, xs, indexing="ij")
    return ndimage.map_coordinates(grid, [yy, xx], order=3, mode="nearest")


def procedural_base(width: int, height: int, seed: int = 0) -> ColorImage:
    """Deterministic RGB test scene: multi-octave value noise overlaid with flat-edged shapes."""
    if width < 64 or height < 64:
        raise ValueError(f"procedural base needs at least 64x64, got {width}x{height}")
    rng = np.random.default_rng(seed)
    h, w = height, width

    tex = np.zeros((h, w, 3))
    amp_total = 0.0
    for cell, amp in ((2, 0.35), (4, 0.3), (8, 0.2), (16, 0.15), (32, 0.1), (64, 0.1)):
        for c in range(3):
            tex[:, :, c] += amp * _value_noise(rng, h, w, cell)
        amp_total += amp
    tex /= amp_total
    tex = (tex - tex.min()) / max(tex.max() - tex.min(), 1e-12)

    yy, xx = np.mgrid[0:h, 0:w]
    shapes = np.zeros((h, w, 3))
    cover = np.zeros((h, w))
    for _ in range(int(rng.integers(4, 9))):
        colour = rng.random(3)
        if rng.random() < 0.5:
            cy, cx = rng.random(2) * (h, w)
            rad = rng.uniform(0.05, 0.2) * min(h, w)
            region = (yy - cy) ** 2 + (xx - cx) ** 2 <= rad * rad
        else:
            y0, x0 = rng.integers(0, h - 8), rng.integers(0, w - 8)
            region = np.zeros((h, w), bool)
            region[y0:y0 + int(rng.integers(8, h // 3)), x0:x0 + int(rng.integers(8, w // 3))] = True
        shapes[region] = colour
        cover[region] = 1.0
    out = np.where(cover[:, :, None] > 0, 0.5 * shapes + 0.5 * tex, tex)
    return ColorImage(np.clip(out, 0.0, 1.0), ColorSpace.RGB)


def make_mask(kind: str, width: int, height: int, seed: int = 0) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width]
    if kind == "half":
        return (xx < width // 2).astype(np.float64)
    if kind == "disk":
        rad = 0.3 * min(width, height)
        return (((yy - height / 2 + 0.5) ** 2 + (xx - width / 2 + 0.5) ** 2) <= rad * rad).astype(np.float64)
    if kind == "blob":
        rng = np.random.default_rng(seed + 7919)
        field = ndimage.gaussian_filter(rng.standard_normal((height, width)), min(width, height) / 8,
                                        mode="wrap")
        m = field > np.median(field)
        # keep the largest component of each class so the mask is a clean region split
        for val in (True, False):
            lab, n = ndimage.label(m == val)
            if n > 1:
                sizes = np.bincount(lab.ravel())
                sizes[0] = 0
                m[(lab > 0) & (lab != sizes.argmax())] = not val
        return m.astype(np.float64)
    raise ValueError(f"unknown mask {kind!r}; choose from {', '.join(MASKS)}")


def synth_pair(spec: SynthSpec) -> tuple[ColorImage, ColorImage, ColorImage, np.ndarray]:
    """Return ``(a, b, truth, mask)``; A is sharp where ``mask == 1``, B elsewhere."""
    base = spec.base
    mask = np.asarray(spec.mask, dtype=np.float64)
    blurred = gaussian_blur(base.data, spec.sigma)
    sel = mask[:, :, None] > 0.5
    a = ColorImage(np.where(sel, base.data, blurred), base.space)
    b = ColorImage(np.where(sel, blurred, base.data), base.space)
    return a, b, base, mask


def make_synth(width: int = 256, height: int = 256, sigma: float = 3.0, seed: int = 0,
               mask: str = "half") -> tuple[ColorImage, ColorImage, ColorImage, np.ndarray]:
    base = procedural_base(width, height, seed)
    return synth_pair(SynthSpec(base, make_mask(mask, width, height, seed), sigma, seed))


def boundary_band(mask: np.ndarray, width: int = 5) -> np.ndarray:
    """Pixels within ``width`` pixels (Euclidean) of the other mask class."""
    m = np.asarray(mask) > 0.5
    if m.all() or not m.any():
        return np.zeros(m.shape, bool)
    d_in = ndimage.distance_transform_edt(m)
    d_out = ndimage.distance_transform_edt(~m)
    return np.where(m, d_in, d_out) <= width


def map_accuracy(decision: np.ndarray, mask: np.ndarray, band: int = 5) -> float:
    """Fraction of pixels outside the boundary band where the decision matches the mask."""
    keep = ~boundary_band(mask, band)
    agree = (np.asarray(decision) > 0.5) == (np.asarray(mask) > 0.5)
    return float(agree[keep].mean())


def synth_suite(n: int = 20, size: int = 256, sigma: float = 3.0, masks=("half", "disk")):
    """``n`` seeded pairs cycling through ``masks``: ``(name, a, b, truth, mask)`` tuples."""
    out = []
    for seed in range(n):
        kind = masks[seed % len(masks)]
        a, b, truth, mask = make_synth(size, size, sigma, seed, kind)
        out.append((f"synth-{kind}-{seed:03d}", a, b, truth, mask))
    return out
