"""Closed curves sampled on a uniform periodic grid.

A curve is stored as ``N`` points ``p_k = gamma(k * ell / N)`` on the periodic
parameter domain ``R / ell Z``.  Derivatives are second-order central
differences with periodic wraparound; integrals are trapezoidal sums, which on
a periodic grid reduce to plain sums times ``h = ell / N``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from . import kernels
from .errors import SymknotsError

REGULARITY_TOL = 1e-8
COINCIDENCE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteClosedCurve:
    """Uniform samples of a closed curve ``R / ell Z -> R^3``."""

    ell: float
    points: np.ndarray

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def h(self) -> float:
        return self.ell / self.n

    @property
    def params(self) -> np.ndarray:
        return np.arange(self.n) * self.h

    def __len__(self):
        return self.n


@dataclass(frozen=True, eq=False)
class CurveField:
    """A vector field along a curve, e.g. its first or second derivative."""

    samples: np.ndarray
    order: int

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.samples, axis=1)


def make_curve(ell, points) -> DiscreteClosedCurve:
    """Validate and freeze a sampled closed curve.

    Raises ``SymknotsError("bad-grid")`` unless ``N >= 8`` and ``N % 4 == 0``,
    and ``SymknotsError("degenerate")`` if consecutive nodes coincide or some
    central-difference speed vanishes.
    """
    ell = float(ell)
    if not np.isfinite(ell) or ell <= 0:
        raise SymknotsError("bad-grid", f"period must be positive, got {ell}")
    pts = np.array(points, dtype=float, copy=True)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise SymknotsError("bad-grid", f"expected an (N, 3) array, got shape {pts.shape}")
    n = pts.shape[0]
    if n < 8 or n % 4:
        raise SymknotsError("bad-grid", f"N must be >= 8 and divisible by 4, got {n}")
    if not np.all(np.isfinite(pts)):
        raise SymknotsError("degenerate", "non-finite coordinates")
    gaps = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    if gaps.min() <= COINCIDENCE_TOL * ell:
        k = int(gaps.argmin())
        raise SymknotsError("degenerate", f"nodes {k} and {(k + 1) % n} coincide")
    speed = np.linalg.norm(first_difference(pts, ell / n), axis=1)
    if speed.min() <= REGULARITY_TOL * ell:
        raise SymknotsError("degenerate", f"zero speed at node {int(speed.argmin())}")
    pts.setflags(write=False)
    return DiscreteClosedCurve(ell, pts)


def with_points(curve: DiscreteClosedCurve, points) -> DiscreteClosedCurve:
    """Same period, new node positions (validated)."""
    return make_curve(curve.ell, points)


def first_difference(points: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(points, -1, axis=0) - np.roll(points, 1, axis=0)) / (2.0 * h)


def second_difference(points: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(points, -1, axis=0) - 2.0 * points + np.roll(points, 1, axis=0)) / (h * h)


def derivative(curve: DiscreteClosedCurve, order: int = 1) -> CurveField:
    """Periodic central-difference derivative of order 1 or 2."""
    if order == 1:
        return CurveField(first_difference(curve.points, curve.h), 1)
    if order == 2:
        return CurveField(second_difference(curve.points, curve.h), 2)
    raise ValueError(f"order must be 1 or 2, got {order}")


def speed(curve: DiscreteClosedCurve) -> np.ndarray:
    return np.linalg.norm(first_difference(curve.points, curve.h), axis=1)


def length(curve: DiscreteClosedCurve) -> float:
    return float(speed(curve).sum() * curve.h)


def scale(curve: DiscreteClosedCurve, r: float) -> DiscreteClosedCurve:
    """Dilate by ``r`` about the origin; the period scales too."""
    return make_curve(curve.ell * r, curve.points * r)


def translate(curve: DiscreteClosedCurve, offset) -> DiscreteClosedCurve:
    return make_curve(curve.ell, curve.points + np.asarray(offset, dtype=float))


def curvature(curve: DiscreteClosedCurve) -> np.ndarray:
    d1 = first_difference(curve.points, curve.h)
    d2 = second_difference(curve.points, curve.h)
    v = np.linalg.norm(d1, axis=1)
    if v.min() <= 0:
        raise SymknotsError("degenerate", "zero speed")
    return np.linalg.norm(np.cross(d1, d2), axis=1) / v**3


def total_curvature(curve: DiscreteClosedCurve) -> float:
    return float(np.sum(curvature(curve) * speed(curve)) * curve.h)


def _cumulative_chord(points: np.ndarray):
    chords = np.linalg.norm(np.roll(points, -1, axis=0) - points, axis=1)
    s = np.concatenate(([0.0], np.cumsum(chords)))
    return s


def reparametrize_arclength(curve: DiscreteClosedCurve, max_iter: int = 50, tol: float = 1e-14):
    """Resample the curve at equally spaced arclength.

    Node positions are interpolated by a periodic cubic spline over
    cumulative chord length and resampled at equal spacing; this is repeated
    until the nodes stop moving, so the result is a fixed point of the map.
    The new nodes keep the mean chord parameter of the old ones, which makes
    the resampling commute with index shifts and reversals, and hence with
    the D2 action.
    """
    v = speed(curve)
    if v.min() <= REGULARITY_TOL * curve.ell:
        raise SymknotsError("degenerate", "zero speed")
    new_ell = length(curve)
    pts = np.array(curve.points)
    n = pts.shape[0]
    k = np.arange(n)
    for _ in range(max_iter):
        s = _cumulative_chord(pts)
        total = s[-1]
        spline = CubicSpline(s, np.vstack([pts, pts[:1]]), bc_type="periodic")
        offset = np.mean(s[:-1] - k * (total / n))
        new = spline(offset + k * (total / n))
        moved = np.abs(new - pts).max()
        pts = new
        if moved <= tol * total:
            break
    return make_curve(new_ell, pts)


def check_arclength(curve: DiscreteClosedCurve, rel_tol: float = 0.01) -> bool:
    v = speed(curve)
    mean = v.mean()
    return bool(np.abs(v - mean).max() <= rel_tol * mean)


def bilipschitz_constant(curve: DiscreteClosedCurve, threads=None) -> float:
    """Smallest ratio of chord length to periodic parameter distance.

    Defined for arclength-parametrized curves only; speed may deviate from
    its mean by at most 1%.
    """
    if not check_arclength(curve):
        raise SymknotsError("not-arclength", "speed varies by more than 1%")
    return kernels.bilipschitz(curve.points, curve.ell, threads=threads)


def max_radius(curve: DiscreteClosedCurve) -> float:
    return float(np.linalg.norm(curve.points, axis=1).max())


def _check_same_grid(a: DiscreteClosedCurve, b: DiscreteClosedCurve):
    if a.n != b.n or not np.isclose(a.ell, b.ell, rtol=1e-12, atol=0.0):
        raise SymknotsError("grid-mismatch", f"(N={a.n}, ell={a.ell}) vs (N={b.n}, ell={b.ell})")


def c1_distance(a: DiscreteClosedCurve, b: DiscreteClosedCurve) -> float:
    _check_same_grid(a, b)
    d0 = np.linalg.norm(a.points - b.points, axis=1).max()
    d1 = np.linalg.norm(derivative(a, 1).samples - derivative(b, 1).samples, axis=1).max()
    return float(d0 + d1)


def w22_distance(a: DiscreteClosedCurve, b: DiscreteClosedCurve, parts: bool = False):
    """Discrete W^{2,2} distance; ``parts=True`` also returns the three squared terms."""
    _check_same_grid(a, b)
    h = a.h
    terms = []
    for k in range(3):
        if k == 0:
            diff = a.points - b.points
        else:
            diff = derivative(a, k).samples - derivative(b, k).samples
        terms.append(float(np.sum(diff * diff) * h))
    total = float(np.sqrt(sum(terms)))
    if parts:
        return total, tuple(terms)
    return total
