"""Pure numpy versions of the O(N^2) pair kernels.

These are the reference implementations; ``_ckernels`` computes the same
sums in compiled loops.  Rows are processed in fixed-size blocks and the row
sums are added in index order, so results do not depend on the block size.
"""

import numpy as np

BLOCK = 256


def _offband(rows, n):
    """Mask of pairs (i, j) with periodic index distance >= 2."""
    diff = np.abs(rows[:, None] - np.arange(n)[None, :])
    dist = np.minimum(diff, n - diff)
    return dist >= 2


def tangents(points, h):
    return (np.roll(points, -1, axis=0) - np.roll(points, 1, axis=0)) / (2.0 * h)


def _pair_terms(points, a, rows, q, h):
    """Tangent-point integrand on the block ``rows x all`` (j is the tangency node)."""
    n = points.shape[0]
    d = points[rows, None, :] - points[None, :, :]
    aj = np.broadcast_to(a[None, :, :], d.shape)
    c = np.cross(aj, d)
    cc = np.einsum("ijk,ijk->ij", c, c)
    dd = np.einsum("ijk,ijk->ij", d, d)
    na = np.linalg.norm(a, axis=1)
    mask = _offband(rows, n)
    dd_safe = np.where(mask, dd, 1.0)
    cq2 = np.where(mask, cc, 0.0) ** ((q - 2.0) / 2.0)
    k = (h * h * 2.0**q) * na[rows, None] / (na[None, :] ** (q - 1.0) * dd_safe**q)
    k = np.where(mask, k, 0.0)
    t = k * cq2 * cc
    return d, aj, cc, dd_safe, cq2, k, t, mask


def tp_energy(points, h, q):
    n = points.shape[0]
    a = tangents(points, h)
    row_sums = np.empty(n)
    for start in range(0, n, BLOCK):
        rows = np.arange(start, min(start + BLOCK, n))
        t = _pair_terms(points, a, rows, q, h)[6]
        row_sums[rows] = t.sum(axis=1)
    return float(_ordered_sum(row_sums))


def _ordered_sum(values):
    total = 0.0
    for v in values:
        total += v
    return total


def tp_energy_grad(points, h, q):
    """Energy, gradient with respect to node positions, and min off-band distance."""
    n = points.shape[0]
    a = tangents(points, h)
    na2 = np.einsum("ij,ij->i", a, a)
    row_sums = np.empty(n)
    g_a = np.zeros_like(points)
    g_p = np.zeros_like(points)
    dmin = np.inf
    for start in range(0, n, BLOCK):
        rows = np.arange(start, min(start + BLOCK, n))
        d, aj, cc, dd, cq2, k, t, mask = _pair_terms(points, a, rows, q, h)
        row_sums[rows] = t.sum(axis=1)
        dmin = min(dmin, float(np.sqrt(np.where(mask, dd, np.inf).min())))
        # d/d a_i
        g_a[rows] += t.sum(axis=1)[:, None] * a[rows] / na2[rows, None]
        # d/d a_j
        adot = np.einsum("ijk,ijk->ij", aj, d)
        kq = q * k * cq2
        ga_j = kq[:, :, None] * (dd[:, :, None] * aj - adot[:, :, None] * d)
        ga_j -= ((q - 1.0) * t)[:, :, None] * aj / na2[None, :, None]
        g_a += ga_j.sum(axis=0)
        # d/d d, with d = p_i - p_j
        gd = kq[:, :, None] * (na2[None, :, None] * d - adot[:, :, None] * aj)
        gd -= (2.0 * q * t / dd)[:, :, None] * d
        g_p[rows] += gd.sum(axis=1)
        g_p -= gd.sum(axis=0)
    g_p += (np.roll(g_a, 1, axis=0) - np.roll(g_a, -1, axis=0)) / (2.0 * h)
    return float(_ordered_sum(row_sums)), g_p, dmin


def bilipschitz(points, ell, threads=1):
    n = points.shape[0]
    h = ell / n
    best = np.inf
    for start in range(0, n, BLOCK):
        rows = np.arange(start, min(start + BLOCK, n))
        diff = np.abs(rows[:, None] - np.arange(n)[None, :])
        steps = np.minimum(diff, n - diff)
        chord = np.linalg.norm(points[rows, None, :] - points[None, :, :], axis=2)
        ratio = np.where(steps > 0, chord / np.maximum(steps, 1) / h, np.inf)
        best = min(best, float(ratio.min()))
    return best
