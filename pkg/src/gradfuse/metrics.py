"""Fusion quality metrics: spatial frequency, normalised mutual information, Q^AB/F."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .image import to_uint8


@dataclass(frozen=True)
class QabfConstants:
    gamma_g: float = 0.9994
    kappa_g: float = -15.0
    sigma_g: float = 0.5
    gamma_a: float = 0.9879
    kappa_a: float = -22.0
    sigma_a: float = 0.8
    L: float = 1.0


@dataclass
class MetricsReport:
    name: str
    sf: float
    nmi: float
    qabf: float
    params_hash: str = ""


def _check_same(*planes):
    shapes = {np.shape(p) for p in planes}
    if len(shapes) != 1:
        raise ValueError(f"planes differ in shape: {sorted(shapes)}")


def spatial_frequency(f: np.ndarray) -> float:
    """SF = sqrt(RF^2 + CF^2) on the 0-255 scale."""
    f = np.asarray(f, dtype=np.float64) * 255.0
    rf2 = np.mean(np.diff(f, axis=1) ** 2) if f.shape[1] > 1 else 0.0
    cf2 = np.mean(np.diff(f, axis=0) ** 2) if f.shape[0] > 1 else 0.0
    return float(np.sqrt(rf2 + cf2))


def _entropy(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def _mi_ratio(x: np.ndarray, y: np.ndarray) -> float:
    """I(X;Y) / (H(X) + H(Y)) from a 256x256 joint histogram; 0 when both entropies vanish."""
    joint = np.bincount(x.ravel().astype(np.int64) * 256 + y.ravel(), minlength=65536)
    joint = joint.reshape(256, 256) / x.size
    hx = _entropy(joint.sum(axis=1))
    hy = _entropy(joint.sum(axis=0))
    hxy = _entropy(joint.ravel())
    denom = hx + hy
    if denom <= 0:
        return 0.0
    return (hx + hy - hxy) / denom


def normalized_mutual_information(a, b, f) -> float:
    _check_same(a, b, f)
    qa, qb, qf = (to_uint8(np.asarray(p, dtype=np.float64)) for p in (a, b, f))
    return 2.0 * (_mi_ratio(qa, qf) + _mi_ratio(qb, qf))


_SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
_SOBEL_Y = _SOBEL_X.T


def _edge_info(p):
    p = np.asarray(p, dtype=np.float64) * 255.0
    sx = ndimage.correlate(p, _SOBEL_X, mode="nearest")
    sy = ndimage.correlate(p, _SOBEL_Y, mode="nearest")
    g = np.sqrt(sx * sx + sy * sy)
    alpha = np.full_like(p, np.pi / 2)
    nz = sx != 0
    alpha[nz] = np.arctan(sy[nz] / sx[nz])
    return g, alpha


def _preservation(g_s, a_s, g_f, a_f, c: QabfConstants):
    hi = np.maximum(g_s, g_f)
    lo = np.minimum(g_s, g_f)
    strength = np.divide(lo, hi, out=np.zeros_like(hi), where=hi > 0)
    strength[hi == 0] = 1.0  # no edge in either image: nothing lost
    orient = 1.0 - np.abs(a_s - a_f) / (np.pi / 2)
    qg = c.gamma_g / (1.0 + np.exp(c.kappa_g * (strength - c.sigma_g)))
    qa = c.gamma_a / (1.0 + np.exp(c.kappa_a * (orient - c.sigma_a)))
    return qg * qa


def qabf(a, b, f, constants: QabfConstants | None = None) -> float:
    """Xydeas-Petrovic edge-preservation score (Sobel strength and orientation)."""
    c = constants or QabfConstants()
    _check_same(a, b, f)
    ga, aa = _edge_info(a)
    gb, ab = _edge_info(b)
    gf, af = _edge_info(f)
    wa, wb = ga ** c.L, gb ** c.L
    denom = float((wa + wb).sum())
    if denom == 0:
        return 0.0
    q_af = _preservation(ga, aa, gf, af, c)
    q_bf = _preservation(gb, ab, gf, af, c)
    return float((q_af * wa + q_bf * wb).sum() / denom)


def evaluate(a, b, f, name: str = "", params_hash: str = "") -> MetricsReport:
    return MetricsReport(name, spatial_frequency(f), normalized_mutual_information(a, b, f),
                         qabf(a, b, f), params_hash)


def psnr(x, y, peak: float = 255.0) -> float:
    """PSNR on the 0-255 scale; ``inf`` for identical inputs."""
    _check_same(x, y)
    mse = float(np.mean(((np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)) * 255.0) ** 2))
    if mse == 0:
        return float("inf")
    return float(10.0 * np.log10(peak * peak / mse))
