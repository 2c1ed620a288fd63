# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled pair kernels; see ``_pykernels`` for the reference versions.

Every parallel loop writes only to the row it owns and the final reduction
runs serially in index order, so results are identical for any thread count.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange, parallel
from libc.stdlib cimport malloc, free
from libc.math cimport sqrt, pow, INFINITY

cnp.import_array()


cdef inline double _powh(double x, double e) noexcept nogil:
    if e == 0.5:
        return sqrt(x)
    if e == 1.0:
        return x
    return pow(x, e)


cdef inline double _pair(const double[:, ::1] p, const double[:, ::1] a,
                         const double[::1] na2, const double[::1] wt,
                         Py_ssize_t i, Py_ssize_t j, double q,
                         double* out) noexcept nogil:
    """Integrand T_ij; fills out[0..8] with dT/da_i, dT/da_j, dT/dd.

    ``wt[k] = h^2 2^q / |a_k|^(q-1)`` is precomputed per node so the
    pair evaluation needs a single ``pow``.
    """
    cdef double d0 = p[i, 0] - p[j, 0]
    cdef double d1 = p[i, 1] - p[j, 1]
    cdef double d2 = p[i, 2] - p[j, 2]
    cdef double a0 = a[j, 0], a1 = a[j, 1], a2 = a[j, 2]
    cdef double c0 = a1 * d2 - a2 * d1
    cdef double c1 = a2 * d0 - a0 * d2
    cdef double c2 = a0 * d1 - a1 * d0
    cdef double cc = c0 * c0 + c1 * c1 + c2 * c2
    cdef double dd = d0 * d0 + d1 * d1 + d2 * d2
    cdef double inv_dd2 = 1.0 / (dd * dd)
    # base * (cc / dd^2)^((q-2)/2) / dd^2 is the smooth factor k * |a x d|^(q-2)
    cdef double kc = sqrt(na2[i]) * wt[j] * _powh(cc * inv_dd2, 0.5 * (q - 2.0)) * inv_dd2
    cdef double t = kc * cc
    cdef double kq, adot, s
    if out != NULL:
        s = t / na2[i]
        out[0] = s * a[i, 0]
        out[1] = s * a[i, 1]
        out[2] = s * a[i, 2]
        kq = q * kc
        adot = a0 * d0 + a1 * d1 + a2 * d2
        s = (q - 1.0) * t / na2[j]
        out[3] = kq * (dd * a0 - adot * d0) - s * a0
        out[4] = kq * (dd * a1 - adot * d1) - s * a1
        out[5] = kq * (dd * a2 - adot * d2) - s * a2
        s = 2.0 * q * t / dd
        out[6] = kq * (na2[j] * d0 - adot * a0) - s * d0
        out[7] = kq * (na2[j] * d1 - adot * a1) - s * d1
        out[8] = kq * (na2[j] * d2 - adot * a2) - s * d2
    return t


cdef inline bint _offband(Py_ssize_t i, Py_ssize_t j, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t diff = i - j
    if diff < 0:
        diff = -diff
    if n - diff < diff:
        diff = n - diff
    return diff >= 2


def _tangents(const double[:, ::1] p, double h):
    cdef Py_ssize_t n = p.shape[0], k, c
    out = np.empty((n, 3))
    cdef double[:, ::1] a = out
    for k in range(n):
        for c in range(3):
            a[k, c] = (p[(k + 1) % n, c] - p[(k + n - 1) % n, c]) / (2.0 * h)
    return out


def tp_energy(points, double h, double q, int threads=1):
    cdef const double[:, ::1] p = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0], i, j
    a_arr = _tangents(p, h)
    cdef double[:, ::1] a = a_arr
    na2_arr = np.einsum("ij,ij->i", a_arr, a_arr)
    cdef double[::1] na2 = na2_arr
    rows_arr = np.zeros(n)
    cdef double[::1] rows = rows_arr
    cdef double[::1] wt = (h * h * 2.0**q) * na2_arr ** (-0.5 * (q - 1.0))
    cdef double acc
    for i in prange(n, nogil=True, num_threads=threads, schedule="static"):
        acc = 0.0
        for j in range(n):
            if _offband(i, j, n):
                acc = acc + _pair(p, a, na2, wt, i, j, q, NULL)
        rows[i] = acc
    acc = 0.0
    for i in range(n):
        acc += rows[i]
    return acc


def tp_energy_grad(points, double h, double q, int threads=1):
    cdef const double[:, ::1] p = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0], k, m, c
    a_arr = _tangents(p, h)
    cdef double[:, ::1] a = a_arr
    na2_arr = np.einsum("ij,ij->i", a_arr, a_arr)
    cdef double[::1] na2 = na2_arr
    rows_arr = np.zeros(n)
    dmin_arr = np.full(n, INFINITY)
    ga_arr = np.zeros((n, 3))
    gp_arr = np.zeros((n, 3))
    cdef double[::1] rows = rows_arr
    cdef double[::1] dmin = dmin_arr
    cdef double[:, ::1] ga = ga_arr
    cdef double[:, ::1] gp = gp_arr
    cdef double[::1] wt = (h * h * 2.0**q) * na2_arr ** (-0.5 * (q - 1.0))
    cdef double acc, dist
    cdef double* buf
    with nogil, parallel(num_threads=threads):
        buf = <double*> malloc(9 * sizeof(double))
        for k in prange(n, schedule="static"):
            acc = 0.0
            for m in range(n):
                if not _offband(k, m, n):
                    continue
                # k as the non-tangency node i
                acc = acc + _pair(p, a, na2, wt, k, m, q, buf)
                ga[k, 0] += buf[0]
                ga[k, 1] += buf[1]
                ga[k, 2] += buf[2]
                gp[k, 0] += buf[6]
                gp[k, 1] += buf[7]
                gp[k, 2] += buf[8]
                # k as the tangency node j
                _pair(p, a, na2, wt, m, k, q, buf)
                ga[k, 0] += buf[3]
                ga[k, 1] += buf[4]
                ga[k, 2] += buf[5]
                gp[k, 0] -= buf[6]
                gp[k, 1] -= buf[7]
                gp[k, 2] -= buf[8]
                dist = (p[k, 0] - p[m, 0]) * (p[k, 0] - p[m, 0]) \
                    + (p[k, 1] - p[m, 1]) * (p[k, 1] - p[m, 1]) \
                    + (p[k, 2] - p[m, 2]) * (p[k, 2] - p[m, 2])
                if dist < dmin[k]:
                    dmin[k] = dist
            rows[k] = acc
        free(buf)
    acc = 0.0
    for k in range(n):
        acc += rows[k]
    for k in range(n):
        for c in range(3):
            gp[k, c] += (ga[(k + n - 1) % n, c] - ga[(k + 1) % n, c]) / (2.0 * h)
    return acc, gp_arr, float(np.sqrt(dmin_arr.min()))


def bilipschitz(points, double ell, int threads=1):
    cdef const double[:, ::1] p = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0], i, j, steps
    cdef double h = ell / n
    best_arr = np.full(n, INFINITY)
    cdef double[::1] best = best_arr
    cdef double chord, ratio
    for i in prange(n, nogil=True, num_threads=threads, schedule="static"):
        for j in range(n):
            if j == i:
                continue
            steps = i - j if i > j else j - i
            if n - steps < steps:
                steps = n - steps
            chord = sqrt((p[i, 0] - p[j, 0]) * (p[i, 0] - p[j, 0])
                         + (p[i, 1] - p[j, 1]) * (p[i, 1] - p[j, 1])
                         + (p[i, 2] - p[j, 2]) * (p[i, 2] - p[j, 2]))
            ratio = chord / (steps * h)
            if ratio < best[i]:
                best[i] = ratio
    return float(best_arr.min())
