"""Bending and tangent-point energies of discrete closed curves.

All gradients are exact derivatives of the discrete sums with respect to the
node positions, so they agree with finite differences to rounding.  Each
energy is invariant under the D2 action and under rigid motions, and has a
fixed degree of homogeneity under dilation:

    bending   r^-1      tangent-point   r^(2-q)      repulsive   r^-1

so ``scaled = length * total`` is scale invariant.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .curve import (
    DiscreteClosedCurve,
    bilipschitz_constant,
    check_arclength,
    first_difference,
    length,
    max_radius,
    reparametrize_arclength,
    second_difference,
    total_curvature,
)
from .dihedral import symmetry_defect
from .errors import SymknotsError

SELF_CONTACT_TOL = 1e-12


@dataclass(frozen=True)
class EnergyParams:
    q: float = 3.0
    theta: float = 0.0

    def __post_init__(self):
        if not 2.0 < self.q <= 4.0:
            raise SymknotsError("bad-params", f"q must lie in (2, 4], got {self.q}")
        if not self.theta >= 0.0:
            raise SymknotsError("bad-params", f"theta must be >= 0, got {self.theta}")


@dataclass(frozen=True)
class EnergyReport:
    length: float
    bending: float
    tp: float
    repulsive: float
    total: float
    scaled: float
    total_curvature: float
    bilipschitz: float
    max_radius: float
    symmetry_defect: float
    lam: float = math.nan

    def to_dict(self):
        return asdict(self)


def _as_params(params) -> EnergyParams:
    if isinstance(params, EnergyParams):
        return params
    if params is None:
        return EnergyParams()
    return EnergyParams(q=float(params))


def _bending_terms(points, h):
    a = first_difference(points, h)
    b = second_difference(points, h)
    va2 = np.einsum("ij,ij->i", a, a)
    if va2.min() <= 0:
        raise SymknotsError("degenerate", "zero speed")
    c = np.cross(a, b)
    cc = np.einsum("ij,ij->i", c, c)
    return a, b, va2, cc


def bending_energy(curve: DiscreteClosedCurve) -> float:
    """Sum of ``kappa_k^2 |gamma'_k| h``."""
    _, _, va2, cc = _bending_terms(curve.points, curve.h)
    return float(np.sum(cc / va2**2.5) * curve.h)


def bending_gradient(curve: DiscreteClosedCurve) -> np.ndarray:
    h = curve.h
    a, b, va2, cc = _bending_terms(curve.points, h)
    ab = np.einsum("ij,ij->i", a, b)
    bb = np.einsum("ij,ij->i", b, b)
    inv5 = va2**-2.5
    g_b = (2.0 * inv5)[:, None] * (va2[:, None] * b - ab[:, None] * a)
    g_a = (2.0 * inv5)[:, None] * (bb[:, None] * a - ab[:, None] * b)
    g_a -= (5.0 * cc * inv5 / va2)[:, None] * a
    grad = (np.roll(g_a, 1, axis=0) - np.roll(g_a, -1, axis=0)) / (2.0 * h)
    grad += (np.roll(g_b, 1, axis=0) - 2.0 * g_b + np.roll(g_b, -1, axis=0)) / (h * h)
    return grad * h


def length_gradient(curve: DiscreteClosedCurve) -> np.ndarray:
    a = first_difference(curve.points, curve.h)
    u = a / np.linalg.norm(a, axis=1)[:, None]
    return (np.roll(u, 1, axis=0) - np.roll(u, -1, axis=0)) / 2.0


def tangent_point_radius(p, u, x) -> float:
    """Radius of the circle through ``x`` that touches the line ``p + R u`` at ``p``.

    Infinite when ``x`` lies on that line (including ``x == p``).
    """
    p, u, x = (np.asarray(v, dtype=float) for v in (p, u, x))
    if abs(np.linalg.norm(u) - 1.0) > 1e-8:
        raise SymknotsError("bad-params", "tangent must be a unit vector")
    d = x - p
    nd = np.linalg.norm(d)
    normal = np.linalg.norm(d - np.dot(d, u) * u)
    if nd == 0.0 or normal <= 1e-14 * nd:
        return math.inf
    return float(nd * nd / (2.0 * normal))


def tp_energy(curve: DiscreteClosedCurve, params=None) -> float:
    """Tangent-point energy; node pairs closer than two grid steps are skipped.

    Infinite when two non-adjacent nodes coincide.
    """
    q = _as_params(params).q
    value = float(kernels.tp_energy(curve.points, curve.h, q))
    # 0/0 only arises from coincident nodes, where the integrand blows up
    return math.inf if math.isnan(value) else value


def _tp_with_grad(curve, q):
    tp, grad, dmin = kernels.tp_energy_grad(curve.points, curve.h, q)
    return tp, grad, dmin


def repulsive(curve: DiscreteClosedCurve, params=None) -> float:
    q = _as_params(params).q
    return tp_energy(curve, q) ** (1.0 / (q - 2.0))


def total_energy(curve: DiscreteClosedCurve, params=None) -> float:
    params = _as_params(params)
    e = bending_energy(curve)
    if params.theta == 0.0:
        return e
    return e + params.theta * repulsive(curve, params)


def scaled_energy(curve: DiscreteClosedCurve, params=None) -> float:
    return length(curve) * total_energy(curve, params)


def total_energy_and_gradient(curve: DiscreteClosedCurve, params=None):
    params = _as_params(params)
    e = bending_energy(curve)
    grad = bending_gradient(curve)
    if params.theta == 0.0:
        return e, grad
    q = params.q
    tp, tp_grad, dmin = _tp_with_grad(curve, q)
    if dmin < 2.0 * SELF_CONTACT_TOL:
        raise SymknotsError("self-intersecting", f"non-adjacent nodes at distance {dmin:.3e}")
    rep = tp ** (1.0 / (q - 2.0))
    grad = grad + (params.theta * rep / ((q - 2.0) * tp)) * tp_grad
    return e + params.theta * rep, grad


def total_energy_gradient(curve: DiscreteClosedCurve, params=None) -> np.ndarray:
    return total_energy_and_gradient(curve, params)[1]


def scaled_energy_and_gradient(curve: DiscreteClosedCurve, params=None):
    """``S = L * E_theta`` and its gradient ``L dE_theta + E_theta dL``."""
    e, g = total_energy_and_gradient(curve, params)
    ell = length(curve)
    return ell * e, ell * g + e * length_gradient(curve)


def normal_part(curve: DiscreteClosedCurve, field: np.ndarray) -> np.ndarray:
    """Remove the component of a node-wise field along the unit tangent."""
    a = first_difference(curve.points, curve.h)
    u = a / np.linalg.norm(a, axis=1)[:, None]
    return field - np.einsum("ij,ij->i", field, u)[:, None] * u


def residual_norm(curve: DiscreteClosedCurve, field: np.ndarray, lam: float) -> float:
    """``sqrt(sum |normal part|^2 h) / (1 + |lam|)``.

    Tangential components are dropped: the continuous energies do not change
    under reparametrization, so the tangential part of a discrete gradient only
    reflects how the nodes are spaced.
    """
    r = normal_part(curve, field)
    return float(np.sqrt(np.sum(r * r) * curve.h) / (1.0 + abs(lam)))


def el_residual(curve: DiscreteClosedCurve, params=None, lam=None) -> float:
    """Normalized norm of ``dE_theta + lam dL`` with ``lam = E_theta(curve)``.

    Only the normal part counts (see :func:`residual_norm`).  ``lam`` may be
    overridden to probe how the residual depends on the multiplier.
    """
    if not check_arclength(curve):
        raise SymknotsError("not-arclength", "speed varies by more than 1%")
    e, g = total_energy_and_gradient(curve, params)
    if lam is None:
        lam = e
    return residual_norm(curve, g + lam * length_gradient(curve), lam)


def energy_report(curve: DiscreteClosedCurve, params=None) -> EnergyReport:
    """All diagnostics at once; ``lam`` is the Lagrange multiplier ``E_theta``."""
    params = _as_params(params)
    ell = length(curve)
    e = bending_energy(curve)
    tp = tp_energy(curve, params)
    rep = tp ** (1.0 / (params.q - 2.0))
    total = e + params.theta * rep
    arc = curve if check_arclength(curve) else reparametrize_arclength(curve)
    return EnergyReport(
        length=ell,
        bending=e,
        tp=tp,
        repulsive=rep,
        total=total,
        scaled=ell * total,
        total_curvature=total_curvature(curve),
        bilipschitz=bilipschitz_constant(arc),
        max_radius=max_radius(curve),
        symmetry_defect=symmetry_defect(curve),
        lam=total,
    )
