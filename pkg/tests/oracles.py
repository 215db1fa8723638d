"""Slow, loop-based reference implementations used only by the tests.

Nothing here imports from gradfuse, so each oracle checks the optimised
code along an independent route.
"""
import math
from collections import deque

import numpy as np

SOBEL_X = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]]
SOBEL_Y = [[-1, -2, -1], [0, 0, 0], [1, 2, 1]]


def clamp(i, n):
    return min(max(i, 0), n - 1)


def sobel_pair(p):
    h, w = p.shape
    gx = np.zeros((h, w))
    gy = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            sx = sy = 0.0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    v = p[clamp(y + dy, h), clamp(x + dx, w)]
                    sx += SOBEL_X[dy + 1][dx + 1] * v
                    sy += SOBEL_Y[dy + 1][dx + 1] * v
            gx[y, x] = sx
            gy[y, x] = sy
    return gx, gy


def window_sum(m, side):
    h, w = m.shape
    r = side // 2
    out = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            s = 0.0
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    s += m[clamp(y + dy, h), clamp(x + dx, w)]
            out[y, x] = s
    return out


def tenengrad(p, tw):
    gx, gy = sobel_pair(p)
    return window_sum(gx ** 2 + gy ** 2, tw)


def area_open(m, t, connectivity):
    h, w = m.shape
    if connectivity == 4:
        nbrs = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    else:
        nbrs = [(dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if (dy, dx) != (0, 0)]
    seen = np.zeros((h, w), bool)
    out = np.zeros((h, w))
    for y0 in range(h):
        for x0 in range(w):
            if m[y0, x0] < 0.5 or seen[y0, x0]:
                continue
            comp = []
            queue = deque([(y0, x0)])
            seen[y0, x0] = True
            while queue:
                y, x = queue.popleft()
                comp.append((y, x))
                for dy, dx in nbrs:
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < h and 0 <= xx < w and not seen[yy, xx] and m[yy, xx] >= 0.5:
                        seen[yy, xx] = True
                        queue.append((yy, xx))
            if len(comp) >= t:
                for y, x in comp:
                    out[y, x] = 1.0
    return out


def _window_values(img, y, x, r):
    h, w = img.shape
    return [img[clamp(y + dy, h), clamp(x + dx, w)] for dy in range(-r, r + 1) for dx in range(-r, r + 1)]


def guided_filter(I, p, r, eps):
    h, w = I.shape
    a = np.zeros((h, w))
    b = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            iv = _window_values(I, y, x, r)
            pv = _window_values(p, y, x, r)
            n = len(iv)
            mi = sum(iv) / n
            mp = sum(pv) / n
            var = sum((v - mi) ** 2 for v in iv) / n
            cov = sum((u - mi) * (v - mp) for u, v in zip(iv, pv)) / n
            a[y, x] = cov / (var + eps)
            b[y, x] = mp - a[y, x] * mi
    out = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            av = _window_values(a, y, x, r)
            bv = _window_values(b, y, x, r)
            out[y, x] = sum(av) / len(av) * I[y, x] + sum(bv) / len(bv)
    return np.clip(out, 0.0, 1.0)


def spatial_frequency(f):
    f = np.asarray(f, dtype=float) * 255.0
    h, w = f.shape
    rs = [(f[y, x] - f[y, x - 1]) ** 2 for y in range(h) for x in range(1, w)]
    cs = [(f[y, x] - f[y - 1, x]) ** 2 for y in range(1, h) for x in range(w)]
    rf = sum(rs) / len(rs)
    cf = sum(cs) / len(cs)
    return math.sqrt(rf + cf)


def quantize(p):
    return [[int(math.floor(min(max(v, 0.0), 1.0) * 255 + 0.5)) for v in row] for row in np.asarray(p)]


def _entropy(counts, n):
    return -sum(c / n * math.log2(c / n) for c in counts.values() if c)


def _mi_term(x, y):
    n = 0
    cx, cy, cxy = {}, {}, {}
    for rx, ry in zip(x, y):
        for u, v in zip(rx, ry):
            n += 1
            cx[u] = cx.get(u, 0) + 1
            cy[v] = cy.get(v, 0) + 1
            cxy[(u, v)] = cxy.get((u, v), 0) + 1
    hx, hy, hxy = _entropy(cx, n), _entropy(cy, n), _entropy(cxy, n)
    if hx + hy == 0:
        return 0.0
    return (hx + hy - hxy) / (hx + hy)


def nmi(a, b, f):
    qa, qb, qf = quantize(a), quantize(b), quantize(f)
    return 2.0 * (_mi_term(qa, qf) + _mi_term(qb, qf))


def qabf(a, b, f):
    tg, kg, dg = 0.9994, -15.0, 0.5
    ta, ka, da = 0.9879, -22.0, 0.8

    def edges(p):
        gx, gy = sobel_pair(np.asarray(p, dtype=float) * 255.0)
        g = np.sqrt(gx ** 2 + gy ** 2)
        ang = np.where(gx == 0, math.pi / 2, np.arctan(np.divide(gy, np.where(gx == 0, 1, gx))))
        return g, ang

    ga, aa = edges(a)
    gb, ab = edges(b)
    gf, af = edges(f)
    num = den = 0.0
    h, w = ga.shape
    for y in range(h):
        for x in range(w):
            for gs, as_ in ((ga, aa), (gb, ab)):
                s, t = gs[y, x], gf[y, x]
                if s == 0 and t == 0:
                    G = 1.0
                else:
                    G = min(s, t) / max(s, t)
                A = 1 - abs(as_[y, x] - af[y, x]) / (math.pi / 2)
                q = tg / (1 + math.exp(kg * (G - dg))) * ta / (1 + math.exp(ka * (A - da)))
                num += q * s
                den += s
    return num / den if den else 0.0
