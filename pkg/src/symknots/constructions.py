"""Explicit generating arcs and the symmetric closed curves glued from them.

* ``circle_arc``: a quarter of the unit-length circle in the e1-e3 plane.
* ``tpc_pi_arc``: a semicircle of radius ``ell/(4 pi)``; glued, it gives two
  co-planar circles touching at the origin.
* ``torus_knot_arc``: a helical piece that twists ``b`` half-turns around the
  e2 axis, followed by a semicircle and a straight segment of a stadium curve.
  Glued, it represents the (2, b) torus knot; as ``eps -> 0`` it tends to the
  tangential pair of circles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import DiscreteClosedCurve, make_curve
from .dihedral import GeneratingArc, glue, reflect
from .errors import SymknotsError


def _arc_params(ell, m):
    if m < 2:
        raise SymknotsError("bad-grid", f"arc needs m >= 2, got {m}")
    return np.arange(m + 1) * (ell / (4 * m))


def circle_arc(ell: float, m: int) -> GeneratingArc:
    t = _arc_params(ell, m)
    w = 2 * math.pi * t / ell
    pts = (ell / (2 * math.pi)) * np.column_stack([np.sin(w), np.zeros_like(w), np.cos(w)])
    return GeneratingArc(ell, pts)


def tpc_pi_arc(ell: float, m: int, plane: str = "e3perp") -> GeneratingArc:
    """Semicircle generating a tangential pair of circles.

    ``plane="e3perp"`` puts both circles in the e1-e2 plane, ``"e1perp"`` in
    the e2-e3 plane.
    """
    t = _arc_params(ell, m)
    w = 4 * math.pi * t / ell
    c = ell / (4 * math.pi)
    zero = np.zeros_like(w)
    if plane == "e3perp":
        pts = c * np.column_stack([1 - np.cos(w), np.sin(w), zero])
    elif plane == "e1perp":
        pts = c * np.column_stack([zero, np.sin(w), 1 + np.cos(w)])
    else:
        raise SymknotsError("bad-params", f"plane must be 'e3perp' or 'e1perp', got {plane!r}")
    return GeneratingArc(ell, pts)


def max_eps(b: int, ell: float = 1.0) -> float:
    """Largest admissible eps: the stadium radius must stay positive."""
    return ell / (4 * (abs(b) + 1))


def rate_eps(b: int, ell: float = 1.0) -> float:
    """Upper end of the range on which the sqrt(eps) convergence estimate is stated."""
    return ell / (8 * (abs(b) + 1))


@dataclass(frozen=True)
class TorusKnotParams:
    """Parameters of the symmetric (2, b) torus knot.

    ``rho`` is the helix radius (``eps**2`` unless given) and ``r`` the
    stadium radius fixed by ``(b + 1) eps + pi r = ell / 4``.
    """

    b: int
    eps: float
    ell: float = 1.0
    rho: float | None = None
    r: float = field(init=False)

    def __post_init__(self):
        b = self.b
        if int(b) != b or b % 2 == 0 or abs(b) < 3:
            raise SymknotsError("bad-params", "b must be odd, |b| >= 3")
        if not self.eps > 0:
            raise SymknotsError("bad-params", "eps must be positive")
        limit = max_eps(b, self.ell)
        if self.eps >= limit:
            raise SymknotsError("eps-too-large", f"eps must be < ell/(4(|b|+1)) = {limit:g}")
        if self.rho is None:
            object.__setattr__(self, "rho", self.eps**2)
        object.__setattr__(self, "r", (self.ell / 4 - (abs(b) + 1) * self.eps) / math.pi)

    @property
    def helix_end(self) -> float:
        return (abs(self.b) + 1) * self.eps / 2


def _phi(s, b):
    """Piecewise C^{1,1} ramp: identity, then a parabola, then constant b/2."""
    s = np.asarray(s, dtype=float)
    lo, hi = (b - 1) / 2, (b + 1) / 2
    return np.where(s <= lo, s, np.where(s <= hi, b / 2 - 0.5 * (s - hi) ** 2, b / 2))


def _phi_d1(s, b):
    s = np.asarray(s, dtype=float)
    lo, hi = (b - 1) / 2, (b + 1) / 2
    return np.where(s <= lo, 1.0, np.where(s <= hi, hi - s, 0.0))


def _phi_d2(s, b):
    s = np.asarray(s, dtype=float)
    lo, hi = (b - 1) / 2, (b + 1) / 2
    return np.where(s <= lo, 0.0, np.where(s <= hi, -1.0, 0.0))


def torus_knot_curve(params: TorusKnotParams, t, order: int = 0) -> np.ndarray:
    """Evaluate the generating arc (or its first/second derivative) at ``t``.

    Works for ``b >= 3``; negative ``b`` is handled by :func:`torus_knot`.
    """
    b, eps, rho, r, ell = abs(params.b), params.eps, params.rho, params.r, params.ell
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros((t.size, 3))
    t1 = params.helix_end
    t2 = ell / 4 - t1
    sign = (-1) ** ((b - 1) // 2)

    helix = t <= t1
    s = t[helix] / eps
    ph = math.pi * _phi(s, b)
    if order == 0:
        out[helix] = np.column_stack([rho * sign * np.sin(ph), t[helix], rho * np.cos(ph)])
    else:
        w1 = math.pi * _phi_d1(s, b) / eps
        if order == 1:
            out[helix] = np.column_stack(
                [rho * sign * np.cos(ph) * w1, np.ones_like(s), -rho * np.sin(ph) * w1]
            )
        else:
            w2 = math.pi * _phi_d2(s, b) / eps**2
            out[helix] = np.column_stack(
                [
                    rho * sign * (np.cos(ph) * w2 - np.sin(ph) * w1**2),
                    np.zeros_like(s),
                    -rho * (np.sin(ph) * w2 + np.cos(ph) * w1**2),
                ]
            )

    bend = (t > t1) & (t <= t2)
    a = (t[bend] - t1) / r
    if order == 0:
        out[bend] = np.column_stack([rho + r - r * np.cos(a), t1 + r * np.sin(a), np.zeros_like(a)])
    elif order == 1:
        out[bend] = np.column_stack([np.sin(a), np.cos(a), np.zeros_like(a)])
    else:
        out[bend] = np.column_stack([np.cos(a) / r, -np.sin(a) / r, np.zeros_like(a)])

    straight = t > t2
    tt = t[straight]
    if order == 0:
        out[straight] = np.column_stack([np.full_like(tt, rho + 2 * r), ell / 4 - tt, np.zeros_like(tt)])
    elif order == 1:
        out[straight] = np.column_stack([np.zeros_like(tt), -np.ones_like(tt), np.zeros_like(tt)])
    return out


def tpc_pi_curve(ell: float, t, order: int = 0, plane: str = "e3perp") -> np.ndarray:
    """Semicircle arc of :func:`tpc_pi_arc` and its analytic derivatives."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    k = 4 * math.pi / ell
    c = 1 / k
    w = k * t
    zero = np.zeros_like(w)
    if order == 0:
        x, y = c * (1 - np.cos(w)), c * np.sin(w)
    elif order == 1:
        x, y = np.sin(w), np.cos(w)
    else:
        x, y = k * np.cos(w), -k * np.sin(w)
    if plane == "e3perp":
        return np.column_stack([x, y, zero])
    # e2-e3 version: (0, sin, 1 + cos) * c
    if order == 0:
        z = c * (1 + np.cos(w))
    elif order == 1:
        z = -np.sin(w)
    else:
        z = -k * np.cos(w)
    return np.column_stack([zero, y, z])


def torus_knot_arc(params: TorusKnotParams, m: int) -> GeneratingArc:
    t = _arc_params(params.ell, m)
    h = params.ell / (4 * m)
    if params.helix_end < 8 * h:
        raise SymknotsError("bad-grid", f"m={m} leaves fewer than 8 nodes on the helical part")
    return GeneratingArc(params.ell, torus_knot_curve(params, t))


# The arcs below meet the tangent constraints exactly; the one-sided stencil
# used by the check is only accurate on fine grids, so it is skipped here.
_EXACT = math.inf


def unit_circle(n: int) -> DiscreteClosedCurve:
    if n % 4:
        raise SymknotsError("bad-grid", f"n must be divisible by 4, got {n}")
    return glue(circle_arc(1.0, n // 4), tol_tangent=_EXACT)


def tpc_pi(n: int, plane: str = "e3perp", ell: float = 1.0) -> DiscreteClosedCurve:
    if n % 4:
        raise SymknotsError("bad-grid", f"n must be divisible by 4, got {n}")
    return glue(tpc_pi_arc(ell, n // 4, plane), tol_tangent=_EXACT)


def torus_knot(params: TorusKnotParams, n: int) -> DiscreteClosedCurve:
    """Glued (2, b) torus knot; ``b < 0`` mirrors the ``|b|`` knot in the e1-e2 plane."""
    if n % 4:
        raise SymknotsError("bad-grid", f"n must be divisible by 4, got {n}")
    curve = glue(torus_knot_arc(params, n // 4), tol_tangent=_EXACT)
    if params.b < 0:
        curve = reflect(curve, 2)
    return curve


def doubly_covered_circle(n: int) -> DiscreteClosedCurve:
    """Circle of radius ``1/(4 pi)`` traversed twice with unit speed."""
    if n % 4:
        raise SymknotsError("bad-grid", f"n must be divisible by 4, got {n}")
    w = 4 * math.pi * np.arange(n) / n
    pts = np.column_stack([np.sin(w), np.zeros_like(w), np.cos(w)]) / (4 * math.pi)
    return make_curve(1.0, pts)


def knot_label(params: TorusKnotParams) -> str:
    return f"T(2,{params.b})"
