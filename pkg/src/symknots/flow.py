"""Length-normalized descent for the total energy, optionally inside the D2-symmetric set.

The flow minimizes the scale-invariant energy ``S = length * E_theta`` and
rescales to unit length after every accepted step, which keeps the length
constraint exact.  Steps are accepted by an Armijo backtracking line search,
so ``S`` never increases along the trajectory.

Two metrics are available for the descent direction.  ``"euclidean"`` uses
the raw node-wise gradient.  ``"sobolev"`` (the default) first applies the
inverse of ``h (D^4 + mu)``, where ``D^4`` is the periodic discrete
bilaplacian; this cancels the ``h^-3`` stiffness of the bending term so that
step sizes of order one are accepted at any resolution.  Both operators are
circulant and act coordinate-wise, hence commute with the D2 action.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import curve as cv
from . import energies as en
from .constructions import TorusKnotParams, max_eps, torus_knot_curve, tpc_pi_curve
from .curve import DiscreteClosedCurve, make_curve
from .dihedral import symmetrize_points, symmetry_defect
from .errors import SymknotsError

TRAJECTORY_COLUMNS = (
    "step",
    "bending",
    "tp",
    "total",
    "scaled",
    "length",
    "residual",
    "symmetry_defect",
    "bilipschitz",
    "step_size",
)


@dataclass(frozen=True)
class FlowConfig:
    params: en.EnergyParams = field(default_factory=en.EnergyParams)
    max_steps: int = 1000
    tol: float = 1e-6
    initial_step: float = 1e-3
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    symmetric: bool = True
    reparam_interval: int = 25
    log_interval: int = 1
    metric: str = "sobolev"
    step_growth: float = 2.0
    max_backtracks: int = 60
    max_move: float = 0.25
    sobolev_shift: float = (2 * math.pi) ** 4

    def __post_init__(self):
        if self.max_steps < 1:
            raise SymknotsError("bad-params", "max_steps must be >= 1")
        if not self.tol > 0:
            raise SymknotsError("bad-params", "tol must be positive")
        if not 0 < self.backtrack_factor < 1 or not 0 < self.armijo_c < 1:
            raise SymknotsError("bad-params", "backtrack_factor and armijo_c must lie in (0, 1)")
        if self.metric not in ("sobolev", "euclidean"):
            raise SymknotsError("bad-params", f"unknown metric {self.metric!r}")


@dataclass(frozen=True, eq=False)
class FlowState:
    curve: DiscreteClosedCurve
    step: int
    step_size: float
    lam: float
    residual: float
    scaled: float = math.nan
    accepted: int = 0
    last_reparam: int = 0


@dataclass(frozen=True)
class TrajectoryRecord:
    step: int
    bending: float
    tp: float
    total: float
    scaled: float
    length: float
    residual: float
    symmetry_defect: float
    bilipschitz: float
    step_size: float

    def as_row(self):
        return [getattr(self, c) for c in TRAJECTORY_COLUMNS]


def sobolev_solve(grad: np.ndarray, h: float, shift: float) -> np.ndarray:
    """Apply ``(h (D^4 + shift))^-1`` column-wise via the FFT."""
    n = grad.shape[0]
    lap = -(4.0 / h**2) * np.sin(np.pi * np.arange(n // 2 + 1) / n) ** 2
    symbol = h * (lap**2 + shift)
    return np.fft.irfft(np.fft.rfft(grad, axis=0) / symbol[:, None], n=n, axis=0)


def _normalize(points: np.ndarray, symmetric: bool) -> DiscreteClosedCurve:
    """Project onto the symmetric set if asked, then rescale to unit length."""
    if symmetric:
        points = symmetrize_points(points)
    c = make_curve(1.0, points)
    return make_curve(1.0, points / cv.length(c))


def _scaled(curve: DiscreteClosedCurve, params: en.EnergyParams) -> float:
    try:
        s = en.scaled_energy(curve, params)
    except (SymknotsError, FloatingPointError, ZeroDivisionError):
        return math.inf
    return s if math.isfinite(s) else math.inf


def _residual(curve: DiscreteClosedCurve, grad_s: np.ndarray, lam: float) -> float:
    # At unit length grad S = dE_theta + lam dL with lam = E_theta.
    return en.residual_norm(curve, grad_s, lam)


def _min_separation(points: np.ndarray) -> float:
    n = points.shape[0]
    d = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    gap = np.minimum(gap, n - gap)
    return float(np.where(gap >= 2, d, np.inf).min())


def initial_state(curve: DiscreteClosedCurve, config: FlowConfig) -> FlowState:
    """Symmetrize (if asked), rescale to unit length and reparametrize by arclength."""
    if config.symmetric and symmetry_defect(curve) > 1e-6:
        raise SymknotsError("not-symmetric", f"initial symmetry defect {symmetry_defect(curve):.3e} > 1e-6")
    c = _normalize(curve.points, config.symmetric)
    c = _normalize(cv.reparametrize_arclength(c).points, config.symmetric)
    s, g = en.scaled_energy_and_gradient(c, config.params)
    lam = en.total_energy(c, config.params)
    return FlowState(c, 0, config.initial_step, lam, _residual(c, g, lam), s, 0)


def flow_step(state: FlowState, config: FlowConfig) -> FlowState:
    """One accepted descent step on ``S`` (or an error if none can be found)."""
    params = config.params
    c = state.curve
    s0, grad = en.scaled_energy_and_gradient(c, params)
    if config.metric == "sobolev":
        direction = -sobolev_solve(grad, c.h, config.sobolev_shift)
    else:
        direction = -grad
    if config.symmetric:
        direction = symmetrize_points(direction)
    slope = float(np.sum(grad * direction))
    if slope >= 0:
        # grad is numerically zero
        return replace(state, step=state.step + 1, scaled=s0)

    # keep every node from travelling further than a fraction of the local spacing
    spacing = c.h
    if params.theta > 0:
        spacing = min(spacing, _min_separation(c.points))
    biggest = float(np.linalg.norm(direction, axis=1).max())
    alpha = min(state.step_size * config.step_growth, config.max_move * spacing / biggest)
    if state.accepted == 0:
        alpha = min(config.initial_step, config.max_move * spacing / biggest)

    for _ in range(config.max_backtracks):
        try:
            cand = _normalize(c.points + alpha * direction, config.symmetric)
        except SymknotsError:
            cand = None
        if cand is not None:
            s1 = _scaled(cand, params)
            if s1 <= s0 + config.armijo_c * alpha * slope:
                break
        alpha *= config.backtrack_factor
    else:
        raise SymknotsError("line-search-failed", f"no Armijo step after {config.max_backtracks} halvings")

    accepted = state.accepted + 1
    last = state.last_reparam
    if config.reparam_interval and accepted - last >= config.reparam_interval:
        try:
            rep = _normalize(cv.reparametrize_arclength(cand).points, config.symmetric)
            s_rep = _scaled(rep, params)
        except SymknotsError:
            s_rep = math.inf
        # Resampling may cost a little energy; keep it only if step plus
        # resampling still decrease S, otherwise retry after the next step.
        if s_rep <= s0:
            cand, s1, last = rep, s_rep, accepted
    return FlowState(cand, state.step + 1, alpha, math.nan, math.nan, s1, accepted, last)


def _evaluate(state: FlowState, params) -> FlowState:
    c = state.curve
    s, g = en.scaled_energy_and_gradient(c, params)
    lam = en.total_energy(c, params)
    return replace(state, lam=lam, residual=_residual(c, g, lam), scaled=s)


def record(state: FlowState, params) -> TrajectoryRecord:
    c = state.curve
    e = en.bending_energy(c)
    tp = en.tp_energy(c, params)
    rep = tp ** (1.0 / (params.q - 2.0))
    total = e + params.theta * rep
    ell = cv.length(c)
    try:
        arc = c if cv.check_arclength(c) else cv.reparametrize_arclength(c)
        bilip = cv.bilipschitz_constant(arc)
    except SymknotsError:
        # very rough curves can miss the 1% speed tolerance even after resampling
        bilip = math.nan
    return TrajectoryRecord(
        step=state.step,
        bending=e,
        tp=tp,
        total=total,
        scaled=ell * total,
        length=ell,
        residual=state.residual,
        symmetry_defect=symmetry_defect(c),
        bilipschitz=bilip,
        step_size=state.step_size,
    )


def run_flow(initial: DiscreteClosedCurve, config: FlowConfig, callback=None):
    """Descend from ``initial`` until the residual drops below ``tol`` or steps run out.

    Returns ``(final_curve, trajectory, final_state)``.  The final curve has
    unit length and, if the flow left the nodes unevenly spaced, is resampled
    by arclength once more before returning; the last trajectory row then
    describes the resampled curve.
    """
    state = initial_state(initial, config)
    trajectory = [record(state, config.params)]
    while state.residual > config.tol and state.step < config.max_steps:
        state = _evaluate(flow_step(state, config), config.params)
        if callback is not None:
            callback(state)
        if state.step % config.log_interval == 0 or state.residual <= config.tol:
            trajectory.append(record(state, config.params))
    if state.step > 0 and not cv.check_arclength(state.curve):
        curve = _normalize(cv.reparametrize_arclength(state.curve).points, config.symmetric)
        state = _evaluate(replace(state, curve=curve), config.params)
        if trajectory[-1].step == state.step:
            trajectory.pop()
    if trajectory[-1].step != state.step:
        trajectory.append(record(state, config.params))
    return state.curve, trajectory, state


def convergence_study(b: int, eps_list, m: int):
    """Deviation of the torus-knot generating arc from the tpc[pi] arc, per eps.

    Uses ``ell = 1`` and helix radius ``eps**2``.  Derivatives are the exact
    piecewise derivatives sampled on the arc grid ``t_j = j / (4m)``; norms
    are trapezoidal.  Returns rows ``(eps, e2, e1, e0, e2/sqrt(eps), e1/sqrt(eps))``
    with ``e2 = ||alpha'' - alpha_2''||_L2``, ``e1`` the W^{1,2} norm of the
    first-derivative deviation and ``e0`` the sup-norm deviation.
    """
    if abs(b) < 3 or b % 2 == 0:
        raise SymknotsError("bad-params", "b must be odd, |b| >= 3")
    t = np.arange(m + 1) / (4 * m)
    weights = np.full(m + 1, 1.0 / (4 * m))
    weights[[0, -1]] *= 0.5
    rows = []
    for eps in eps_list:
        if eps >= max_eps(b):
            raise SymknotsError("eps-too-large", f"eps must be < 1/(4(|b|+1)) = {max_eps(b):g}")
        p = TorusKnotParams(abs(b), eps)
        diffs = [torus_knot_curve(p, t, k) - tpc_pi_curve(1.0, t, k) for k in range(3)]
        sq = [np.einsum("ij,ij->i", d, d) for d in diffs]
        e2 = math.sqrt(float(weights @ sq[2]))
        e1 = math.sqrt(float(weights @ (sq[1] + sq[2])))
        e0 = math.sqrt(float(sq[0].max()))
        rows.append((eps, e2, e1, e0, e2 / math.sqrt(eps), e1 / math.sqrt(eps)))
    return rows
