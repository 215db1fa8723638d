import numpy as np


def _sum1d(a: np.ndarray, radius: int, axis: int) -> np.ndarray:
    n = a.shape[axis]
    pad = [(0, 0)] * a.ndim
    pad[axis] = (radius + 1, radius)
    c = np.cumsum(np.pad(a, pad, mode="edge"), axis=axis)
    hi = np.take(c, np.arange(2 * radius + 1, 2 * radius + 1 + n), axis=axis)
    lo = np.take(c, np.arange(0, n), axis=axis)
    return hi - lo


def box_sum(a: np.ndarray, radius: int) -> np.ndarray:
    """Sum over the (2r+1)^2 window around each pixel, edge-replicated borders.

    Separable integral image: one cumulative sum per axis.
    """
    a = np.asarray(a, dtype=np.float64)
    if radius == 0:
        return a.copy()
    return _sum1d(_sum1d(a, radius, 0), radius, 1)


def box_mean(a: np.ndarray, radius: int) -> np.ndarray:
    return box_sum(a, radius) / float((2 * radius + 1) ** 2)
