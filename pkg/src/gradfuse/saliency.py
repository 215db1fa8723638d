"""Tenengrad focus measure."""
from __future__ import annotations

import numpy as np
from scipy import ndimage

from ._box import box_sum
from .image import check_plane


def sobel_energy(p: np.ndarray) -> np.ndarray:
    """Squared Sobel gradient magnitude, replicate borders."""
    p = np.asarray(p, dtype=np.float64)
    gx = ndimage.sobel(p, axis=1, mode="nearest")
    gy = ndimage.sobel(p, axis=0, mode="nearest")
    return gx * gx + gy * gy


def tenengrad(p: np.ndarray, tw: int = 7) -> np.ndarray:
    """Per-pixel Tenengrad saliency: Sobel energy summed over a ``tw x tw`` window."""
    p = check_plane(p)
    if tw < 1 or tw % 2 == 0 or tw > min(p.shape):
        raise ValueError(f"window side must be odd and in [1, {min(p.shape)}], got {tw}")
    return box_sum(sobel_energy(p), tw // 2)


def total_tenengrad(p: np.ndarray) -> float:
    """Whole-image Tenengrad: Sobel energy summed over interior pixels."""
    p = check_plane(p)
    return float(sobel_energy(p)[1:-1, 1:-1].sum())
