"""Gradient-domain initial fusion.

The two luminance planes are differentiated with forward differences, the
stronger gradient vector is kept per pixel, and the combined field is
integrated back by a least-squares (Neumann Poisson) solve diagonalised with
the type-II DCT.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import fft

from .image import check_plane


class GradientField(NamedTuple):
    gx: np.ndarray
    gy: np.ndarray


def compute_gradients(p: np.ndarray) -> GradientField:
    p = check_plane(p)
    gx = np.zeros_like(p)
    gy = np.zeros_like(p)
    gx[:, :-1] = p[:, 1:] - p[:, :-1]
    gy[:-1, :] = p[1:, :] - p[:-1, :]
    return GradientField(gx, gy)


def fuse_gradients(ga: GradientField, gb: GradientField) -> GradientField:
    """Per pixel keep whichever vector has the larger magnitude (ties -> ``ga``)."""
    if ga.gx.shape != gb.gx.shape or ga.gy.shape != gb.gy.shape:
        raise ValueError(f"gradient fields differ in shape: {ga.gx.shape} vs {gb.gx.shape}")
    take_b = np.hypot(gb.gx, gb.gy) > np.hypot(ga.gx, ga.gy)
    return GradientField(np.where(take_b, gb.gx, ga.gx), np.where(take_b, gb.gy, ga.gy))


def _neumann_eigenvalues(n: int) -> np.ndarray:
    return 2.0 - 2.0 * np.cos(np.pi * np.arange(n) / n)


def reconstruct_from_gradients(g: GradientField, target_mean: float, clamp: bool = True) -> np.ndarray:
    """Least-squares integration of a (possibly non-integrable) gradient field.

    Minimises ``sum |grad u - g|^2`` over the forward differences that exist
    inside the image. The normal equations are the Neumann Poisson problem,
    solved exactly in the DCT-II basis; the free constant is fixed so that
    ``mean(u) == target_mean``.
    """
    gx = np.asarray(g.gx, dtype=np.float64)
    gy = np.asarray(g.gy, dtype=np.float64)
    h, w = gx.shape

    # rhs = -D^T g, i.e. backward-difference divergence of the valid edges
    div = np.zeros((h, w))
    ex = gx[:, :-1]
    div[:, :-1] += ex
    div[:, 1:] -= ex
    ey = gy[:-1, :]
    div[:-1, :] += ey
    div[1:, :] -= ey

    rhs = fft.dctn(div, type=2, norm="ortho")
    lam = _neumann_eigenvalues(h)[:, None] + _neumann_eigenvalues(w)[None, :]
    lam[0, 0] = 1.0
    u_hat = -rhs / lam
    u_hat[0, 0] = 0.0
    u = fft.idctn(u_hat, type=2, norm="ortho")
    u += target_mean - u.mean()
    return np.clip(u, 0.0, 1.0) if clamp else u


def initial_fusion(la: np.ndarray, lb: np.ndarray) -> np.ndarray:
    la = check_plane(la, "la")
    lb = check_plane(lb, "lb")
    if la.shape != lb.shape:
        raise ValueError(f"luminance planes differ in shape: {la.shape} vs {lb.shape}")
    field = fuse_gradients(compute_gradients(la), compute_gradients(lb))
    return reconstruct_from_gradients(field, 0.5 * (la.mean() + lb.mean()))
