"""The thirteen acceptance criteria, one test each.

Every test records a one-line PASS/FAIL summary (printed at the end of the
pytest run and immediately with ``-s``) before asserting.
"""

import math
import time

import numpy as np
import pytest

from symknots import cli, io, kernels
from symknots import constructions as co
from symknots import curve as cv
from symknots import dihedral as dh
from symknots import energies as en
from symknots import flow as fl

from conftest import ACCEPTANCE_LINES, finite_difference_gradient, random_curve

TWO_PI = 2 * math.pi
FOUR_PI = 4 * math.pi


def verdict(number, title, ok, detail):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    assert ok, line


@pytest.fixture(autouse=True)
def single_thread():
    before = kernels.get_threads()
    kernels.set_threads(1)
    yield
    kernels.set_threads(before)


def test_01_circle_bending():
    t0 = time.perf_counter()
    e = en.bending_energy(co.unit_circle(1024))
    elapsed = time.perf_counter() - t0
    rel = abs(e / TWO_PI**2 - 1)
    verdict(1, "circle bending energy", rel <= 1e-3 and elapsed < 1.0, f"E={e:.6f} rel.err={rel:.2e} in {elapsed:.3f}s")


def test_02_tpc_pi_bending():
    e = en.bending_energy(co.tpc_pi(1024))
    rel = abs(e / FOUR_PI**2 - 1)
    verdict(2, "tpc[pi] bending energy", rel <= 1e-2, f"E={e:.4f} rel.err={rel:.2e}")


def test_03_tangent_point_oracle():
    c = co.unit_circle(512)
    e3, e4 = en.tp_energy(c, 3.0), en.tp_energy(c, 4.0)
    r3, r4 = abs(e3 / TWO_PI**3 - 1), abs(e4 / TWO_PI**4 - 1)
    verdict(3, "tangent-point circle oracle", r3 <= 0.02 and r4 <= 0.02, f"q=3 rel.err={r3:.2e}, q=4 rel.err={r4:.2e}")


def test_04_homogeneity():
    rng = np.random.default_rng(4)
    p = en.EnergyParams(3.0, 0.01)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(10):
        c = random_curve(rng, 64, amp=0.1)
        for r in (0.5, 2.0):
            big = cv.scale(c, r)
            worst = max(worst, abs(en.total_energy(big, p) * r / en.total_energy(c, p) - 1))
            worst = max(worst, abs(en.scaled_energy(big, p) / en.scaled_energy(c, p) - 1))
    elapsed = time.perf_counter() - t0
    verdict(4, "homogeneity and scale invariance", worst <= 1e-10 and elapsed < 10, f"max rel.dev={worst:.2e} in {elapsed:.2f}s")


def test_05_group_law():
    rng = np.random.default_rng(5)
    p = en.EnergyParams(3.0, 0.01)
    bitwise = True
    worst = 0.0
    for _ in range(5):
        c = random_curve(rng, 32, amp=0.1)
        for a in dh.ELEMENTS:
            for b in dh.ELEMENTS:
                lhs = dh.act(dh.compose(a, b), c).points
                bitwise &= bool(np.array_equal(lhs, dh.act(a, dh.act(b, c)).points))
        for g in dh.ELEMENTS:
            moved = dh.act(g, c)
            for f in (en.bending_energy, lambda x: en.tp_energy(x, p), lambda x: en.total_energy(x, p),
                      lambda x: en.scaled_energy(x, p)):
                worst = max(worst, abs(f(moved) / f(c) - 1))
    verdict(5, "group law and invariance", bitwise and worst <= 1e-10, f"bitwise={bitwise} max rel.dev={worst:.2e}")


def test_06_glueing():
    n = 512
    w = TWO_PI * np.arange(n) / n
    exact = np.column_stack([np.sin(w), np.zeros(n), np.cos(w)]) / TWO_PI
    circle_err = np.abs(dh.glue(co.circle_arc(1.0, n // 4)).points - exact).max()
    bad = np.array(co.circle_arc(1.0, 64).samples)
    bad[0] = [0.1, 0.0, 0.0]
    try:
        dh.glue(dh.GeneratingArc(1.0, bad))
        rejected = False
    except Exception as exc:  # noqa: BLE001
        rejected = getattr(exc, "code", None) == "endpoint-constraint"
    rng = np.random.default_rng(6)
    curves = [co.unit_circle(256), co.tpc_pi(256), co.torus_knot(co.TorusKnotParams(3, 0.04), 512)]
    curves += [dh.symmetrize(random_curve(rng, 128, amp=0.05)) for _ in range(5)]
    reglue = max(np.abs(dh.glue(dh.restrict(c), tol_tangent=math.inf).points - c.points).max() for c in curves)
    ok = circle_err <= 1e-12 and rejected and reglue <= 1e-12
    verdict(6, "glueing characterization", ok, f"circle err={circle_err:.1e}, bad arc rejected={rejected}, re-glue err={reglue:.1e}")


def test_07_radius_bound():
    curves = [co.unit_circle(n) for n in (64, 256, 1024)]
    curves += [co.tpc_pi(n, plane) for n in (64, 512) for plane in ("e3perp", "e1perp")]
    for b in (3, 5, 7, -3):
        for frac in (0.1, 0.5, 0.9):
            p = co.TorusKnotParams(b, frac * co.max_eps(b))
            for n in (512, 2048):
                if p.helix_end >= 8 / n:
                    curves.append(co.torus_knot(p, n))
    slack = min(cv.length(c) / 4 + 2 * c.h - cv.max_radius(c) for c in curves)
    verdict(7, "L-infinity bound", slack >= 0, f"{len(curves)} curves, min slack={slack:.3e}")


def test_08_gradient_consistency():
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        c = random_curve(rng, 16, amp=0.1)
        for theta in (0.0, 1e-2):
            for q in (2.5, 3.0, 4.0):
                p = en.EnergyParams(q, theta)
                fd = finite_difference_gradient(lambda x: en.total_energy(x, p), c)
                g = en.total_energy_gradient(c, p)
                worst = max(worst, np.abs(g - fd).max() / np.abs(fd).max())
    elapsed = time.perf_counter() - t0
    verdict(8, "gradient vs finite differences", worst <= 1e-5 and elapsed < 60, f"max rel.err={worst:.2e} in {elapsed:.1f}s")


def test_09_convergence_rate(tmp_path):
    out = tmp_path / "study.csv"
    t0 = time.perf_counter()
    code = cli.main(["study", "--b", "3", "--eps", "0.04,0.01,0.0025", "--m", "4096", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    rows = io.read_table(out)
    cols = {k: [r[k] for r in rows] for k in ("e2", "e1", "e0", "e2_over_sqrt_eps")}
    decreasing = all(v[0] > v[1] > v[2] for k, v in cols.items() if k != "e2_over_sqrt_eps")
    spread = max(cols["e2_over_sqrt_eps"]) / min(cols["e2_over_sqrt_eps"])
    ok = code == 0 and decreasing and spread <= 2.0 and elapsed < 30
    verdict(9, "sqrt(eps) convergence rate", ok, f"e2/sqrt(eps) spread={spread:.3f}, strictly decreasing={decreasing}, {elapsed:.1f}s")


@pytest.mark.slow
def test_10_unknot_flow():
    rng = np.random.default_rng(10)
    c = co.unit_circle(256)
    c = dh.symmetrize(cv.make_curve(1.0, c.points + 0.01 * rng.standard_normal(c.points.shape)))
    config = fl.FlowConfig(params=en.EnergyParams(3.0, 1e-3), max_steps=5000, log_interval=100)
    t0 = time.perf_counter()
    final, _, state = fl.run_flow(c, config)
    elapsed = time.perf_counter() - t0
    e = en.bending_energy(final)
    k = cv.curvature(final)
    spread = (k.max() - k.min()) / k.mean()
    rel = abs(e / TWO_PI**2 - 1)
    ok = rel <= 0.01 and spread <= 0.05 and elapsed < 600
    verdict(10, "unknot flow reaches the circle", ok,
            f"{state.step} steps, E={e:.4f} rel.err={rel:.2e}, curvature spread={spread:.2e}, residual={state.residual:.1e}, {elapsed:.0f}s")


@pytest.mark.slow
def test_11_symmetric_trefoil_flow():
    n = 512
    c = co.torus_knot(co.TorusKnotParams(3, 0.05), n)
    params = en.EnergyParams(3.0, 1e-3)
    config = fl.FlowConfig(params=params, symmetric=True, max_steps=20000, log_interval=500)
    t0 = time.perf_counter()
    final, trajectory, state = fl.run_flow(c, config)
    elapsed = time.perf_counter() - t0
    s = en.scaled_energy(final, params)
    defect = max(r.symmetry_defect for r in trajectory)
    min_bending = min(r.bending for r in trajectory)
    dist = min(cv.c1_distance(final, co.tpc_pi(n, plane)) for plane in ("e3perp", "e1perp"))
    checks = {
        "S<=1.05(4pi)^2": s <= 1.05 * FOUR_PI**2,
        "defect<=1e-10": defect <= 1e-10,
        "bending>=(4pi)^2(1-5h)": min_bending >= FOUR_PI**2 * (1 - 5 / n),
        "c1<=0.15": dist <= 0.15,
        "time<60min": elapsed < 3600,
    }
    failed = [k for k, v in checks.items() if not v]
    verdict(11, "symmetric trefoil flow", not failed,
            f"{state.step} steps, S={s:.3f} (bound {1.05 * FOUR_PI**2:.3f}), defect={defect:.1e}, "
            f"min bending={min_bending:.3f}, c1 to tpc[pi]={dist:.3f}, {elapsed:.0f}s"
            + (f"; failed: {', '.join(failed)}" if failed else ""))


def test_12_doubly_covered_circle(tmp_path):
    c = co.doubly_covered_circle(512)
    defect = dh.symmetry_defect(c)
    path = tmp_path / "tpc0.json"
    io.write_curve(path, c)
    code = cli.main(["check", str(path), "--what", "symmetry"])
    ok = abs(defect - 1 / TWO_PI) <= 1e-3 and code == 5
    verdict(12, "doubly covered circle is not symmetric", ok, f"defect={defect:.6f}, check exit code={code}")


def test_13_el_residual_at_circle():
    c = co.unit_circle(512)
    p = en.EnergyParams(3.0, 1e-3)
    lam = en.energy_report(c, p).lam
    r = en.el_residual(c, p)
    verdict(13, "Euler-Lagrange residual at the circle", r <= 1e-2, f"residual={r:.2e}, lambda={lam:.4f}")
