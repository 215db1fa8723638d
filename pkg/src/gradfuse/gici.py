"""Focus detection from gradient and complementary information.

Difference saliencies against the initial fused image are re-measured with
Tenengrad and combined across the two sources to sharpen the focus contrast
before the first binary decision.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .saliency import tenengrad


class EnhancedSaliency(NamedTuple):
    qa: np.ndarray
    qb: np.ndarray


def _same_shape(*arrays):
    shapes = {np.shape(a) for a in arrays}
    if len(shapes) != 1:
        raise ValueError(f"maps differ in shape: {sorted(shapes)}")


def difference_saliency(sf: np.ndarray, si: np.ndarray) -> np.ndarray:
    _same_shape(sf, si)
    return np.asarray(sf, dtype=np.float64) - np.asarray(si, dtype=np.float64)


def enhanced_difference(dif: np.ndarray, tw: int = 7) -> np.ndarray:
    """Tenengrad of the min-max normalised difference map (zero map if flat)."""
    dif = np.asarray(dif, dtype=np.float64)
    lo, hi = dif.min(), dif.max()
    if hi <= lo:
        return np.zeros_like(dif)
    return tenengrad((dif - lo) / (hi - lo), tw)


def enhance(sa, sb, sha, shb, k: float = 0.5) -> EnhancedSaliency:
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    _same_shape(sa, sb, sha, shb)
    return EnhancedSaliency(sa + sha - k * shb, sb + shb - k * sha)


def initial_decision(qa: np.ndarray, sf: np.ndarray) -> np.ndarray:
    """Binary map selecting source A wherever ``qa >= sf``."""
    _same_shape(qa, sf)
    return (np.asarray(qa) >= np.asarray(sf)).astype(np.float64)
