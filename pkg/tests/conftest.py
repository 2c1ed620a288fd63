import numpy as np
import pytest

from symknots.curve import make_curve


def random_curve(rng, n=16, ell=1.0, amp=0.15):
    """Smooth random closed curve: a circle plus a few random Fourier modes."""
    t = 2 * np.pi * np.arange(n) / n
    pts = np.column_stack([np.cos(t), np.sin(t), np.zeros(n)]) * (ell / (2 * np.pi))
    for k in range(1, 4):
        c = rng.normal(size=(2, 3)) * amp * ell / (2 * np.pi) / k
        pts = pts + np.outer(np.cos(k * t), c[0]) + np.outer(np.sin(k * t), c[1])
    return make_curve(ell, pts)


def finite_difference_gradient(f, curve, step=1e-6):
    from symknots.curve import make_curve as mk

    base = np.array(curve.points)
    grad = np.zeros_like(base)
    eps = step * curve.ell
    for i in range(base.shape[0]):
        for j in range(3):
            up, down = base.copy(), base.copy()
            up[i, j] += eps
            down[i, j] -= eps
            grad[i, j] = (f(mk(curve.ell, up)) - f(mk(curve.ell, down))) / (2 * eps)
    return grad


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
