"""The dihedral group D2 acting on parametrized closed curves.

Each element pairs a half-turn ``R_i`` about a coordinate axis with a map of
the parameter domain.  On a grid with ``N % 4 == 0`` the parameter maps are
index permutations and the rotations are sign flips, so the action is exact
in floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .curve import DiscreteClosedCurve, make_curve
from .errors import SymknotsError


class DihedralElement(enum.Enum):
    E = "e"
    D1 = "d1"
    D2 = "d2"
    D3 = "d3"

    @property
    def index(self) -> int:
        return _ORDER.index(self)

    @classmethod
    def parse(cls, tag):
        if isinstance(tag, cls):
            return tag
        return cls(str(tag).lower())


_ORDER = [DihedralElement.E, DihedralElement.D1, DihedralElement.D2, DihedralElement.D3]
ELEMENTS = tuple(_ORDER)
NONTRIVIAL = tuple(_ORDER[1:])

# Half-turns about e1, e2, e3 written as diagonal sign vectors.
_SIGNS = np.array(
    [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]
)

# Multiplication table: d_i d_j = d_(i xor j) for the labelling e=0, d1=1, d2=2, d3=3.
_TABLE = [[i ^ j for j in range(4)] for i in range(4)]


def rotation_matrix(g) -> np.ndarray:
    return np.diag(_SIGNS[DihedralElement.parse(g).index])


def compose(a, b) -> DihedralElement:
    a, b = DihedralElement.parse(a), DihedralElement.parse(b)
    return _ORDER[_TABLE[a.index][b.index]]


def param_map(g, ell: float, t: float) -> float:
    g = DihedralElement.parse(g)
    if g is DihedralElement.E:
        s = t
    elif g is DihedralElement.D1:
        s = -t + ell / 2
    elif g is DihedralElement.D2:
        s = t - ell / 2
    else:
        s = -t + ell
    return s % ell


def index_map(g, n: int) -> np.ndarray:
    """Grid version of :func:`param_map`: node ``k`` is sent to ``index_map[k]``."""
    if n % 4:
        raise SymknotsError("bad-grid", f"N must be divisible by 4, got {n}")
    g = DihedralElement.parse(g)
    k = np.arange(n)
    if g is DihedralElement.E:
        return k
    if g is DihedralElement.D1:
        return (n // 2 - k) % n
    if g is DihedralElement.D2:
        return (k - n // 2) % n
    return (n - k) % n


def act_points(g, points: np.ndarray) -> np.ndarray:
    g = DihedralElement.parse(g)
    return points[index_map(g, points.shape[0])] * _SIGNS[g.index]


def act(g, curve: DiscreteClosedCurve) -> DiscreteClosedCurve:
    """``tau_g(gamma)(t) = R_g gamma(psi_g(t))`` on the grid."""
    return make_curve(curve.ell, act_points(g, curve.points))


def act_field(g, field: np.ndarray) -> np.ndarray:
    """Induced action on node-wise vectors such as gradients (same formula as on points)."""
    return act_points(g, field)


def symmetry_defect(curve) -> float:
    pts = curve.points if isinstance(curve, DiscreteClosedCurve) else np.asarray(curve)
    worst = 0.0
    for g in NONTRIVIAL:
        worst = max(worst, float(np.linalg.norm(act_points(g, pts) - pts, axis=1).max()))
    return worst


def symmetrize_points(points: np.ndarray) -> np.ndarray:
    total = points.copy()
    for g in NONTRIVIAL:
        total += act_points(g, points)
    return total / 4.0


def symmetrize(curve: DiscreteClosedCurve) -> DiscreteClosedCurve:
    """Average over the group orbit; the result is a fixed point of every action."""
    return make_curve(curve.ell, symmetrize_points(curve.points))


def reflect(curve: DiscreteClosedCurve, axis: int) -> DiscreteClosedCurve:
    """Mirror in the coordinate plane perpendicular to ``e_(axis+1)`` (axis in 0..2)."""
    signs = np.ones(3)
    signs[axis] = -1.0
    return make_curve(curve.ell, curve.points * signs)


@dataclass(frozen=True, eq=False)
class GeneratingArc:
    """Samples ``alpha(j * ell / (4M))`` for ``j = 0..M`` covering ``[0, ell/4]``."""

    ell: float
    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[1] != 3 or s.shape[0] < 3:
            raise SymknotsError("bad-grid", f"arc needs M+1 >= 3 rows of 3D points, got {s.shape}")
        if not self.ell > 0:
            raise SymknotsError("bad-grid", "period must be positive")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "ell", float(self.ell))

    @property
    def m(self) -> int:
        return self.samples.shape[0] - 1

    @property
    def h(self) -> float:
        return self.ell / (4 * self.m)

    def length(self) -> float:
        return float(np.linalg.norm(np.diff(self.samples, axis=0), axis=1).sum())


@dataclass(frozen=True)
class ArcConstraintReport:
    endpoint0_defect: float
    endpoint1_defect: float
    tangent0_defect: float
    tangent1_defect: float
    tol_point: float = 1e-8
    tol_tangent: float = 1e-4

    @property
    def point_ok(self) -> bool:
        return max(self.endpoint0_defect, self.endpoint1_defect) <= self.tol_point

    @property
    def tangent_ok(self) -> bool:
        return max(self.tangent0_defect, self.tangent1_defect) <= self.tol_tangent

    def ok(self) -> bool:
        return self.point_ok and self.tangent_ok


def _one_sided_tangent(a, h):
    if a.shape[0] < 5:
        return (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * h)
    return (-25.0 * a[0] + 48.0 * a[1] - 36.0 * a[2] + 16.0 * a[3] - 3.0 * a[4]) / (12.0 * h)


def check_arc_constraints(
    arc: GeneratingArc, tol_point: float = 1e-8, tol_tangent: float = 1e-4
) -> ArcConstraintReport:
    """Distances of the arc's endpoints and end tangents from what glueing needs.

    ``alpha(0)`` must lie on the e3 axis and ``alpha(ell/4)`` on the e1 axis;
    the start tangent must be orthogonal to e3 and the end tangent to e1.
    Tangents use one-sided fourth-order differences (second order if M < 4).  ``tol_point`` is
    relative to ``ell``; endpoint defects are absolute distances.
    """
    a = arc.samples
    h = arc.h
    t0 = _one_sided_tangent(a[:5], h)
    t1 = -_one_sided_tangent(a[::-1][:5], h)
    return ArcConstraintReport(
        endpoint0_defect=float(np.hypot(a[0, 0], a[0, 1])),
        endpoint1_defect=float(np.hypot(a[-1, 1], a[-1, 2])),
        tangent0_defect=float(abs(t0[2]) / np.linalg.norm(t0)),
        tangent1_defect=float(abs(t1[0]) / np.linalg.norm(t1)),
        tol_point=tol_point * arc.ell,
        tol_tangent=tol_tangent,
    )


def glue(arc: GeneratingArc, tol_point: float = 1e-8, tol_tangent: float = 1e-4) -> DiscreteClosedCurve:
    """Assemble the closed curve from four rotated copies of a quarter arc.

    The endpoint tolerance is relative to ``ell``.  Raises
    ``SymknotsError("endpoint-constraint")`` or ``("tangent-constraint")``.
    """
    report = check_arc_constraints(arc, tol_point, tol_tangent)
    if not report.point_ok:
        worst = max(report.endpoint0_defect, report.endpoint1_defect)
        raise SymknotsError("endpoint-constraint", f"endpoint defect {worst:.3e}")
    if not report.tangent_ok:
        worst = max(report.tangent0_defect, report.tangent1_defect)
        raise SymknotsError("tangent-constraint", f"tangent defect {worst:.3e}")
    m = arc.m
    n = 4 * m
    a = arc.samples
    k = np.arange(n)
    out = np.empty((n, 3))
    q0, q1, q2, q3 = (slice(i * m, (i + 1) * m) for i in range(4))
    out[q0] = a[:m]
    out[q1] = a[n // 2 - k[q1]] * _SIGNS[1]
    out[q2] = a[k[q2] - n // 2] * _SIGNS[2]
    out[q3] = a[n - k[q3]] * _SIGNS[3]
    return make_curve(arc.ell, out)


def restrict(curve: DiscreteClosedCurve) -> GeneratingArc:
    """The first quarter ``[0, ell/4]`` of a curve as a generating arc."""
    return GeneratingArc(curve.ell, curve.points[: curve.n // 4 + 1])
