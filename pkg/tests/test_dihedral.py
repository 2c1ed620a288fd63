import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symknots import constructions as co
from symknots import curve as cv
from symknots import dihedral as dh
from symknots import energies as en
from symknots.dihedral import DihedralElement as D
from symknots.errors import SymknotsError

from conftest import random_curve

seeds = st.integers(0, 2**32 - 1)
elements = st.sampled_from(dh.ELEMENTS)


def test_rotation_matrices():
    assert np.array_equal(dh.rotation_matrix(D.D1), np.diag([1.0, -1.0, -1.0]))
    e1, e3 = np.eye(3)[0], np.eye(3)[2]
    assert np.array_equal(dh.rotation_matrix(D.D3) @ e3, e3)
    assert np.array_equal(dh.rotation_matrix(D.D2) @ e1, -e1)


@pytest.mark.parametrize("g", dh.ELEMENTS)
def test_rotations_are_orthogonal_involutions(g):
    r = dh.rotation_matrix(g)
    assert np.array_equal(r @ r, np.eye(3))
    assert np.array_equal(r @ r.T, np.eye(3))


@pytest.mark.parametrize("g, expected", [(D.D1, 0.4), (D.D2, 0.6), (D.D3, 0.9), (D.E, 0.1)])
def test_param_map(g, expected):
    assert dh.param_map(g, 1.0, 0.1) == pytest.approx(expected, abs=1e-15)


def test_param_map_matches_index_map():
    n = 16
    for g in dh.ELEMENTS:
        idx = dh.index_map(g, n)
        for k in range(n):
            assert dh.param_map(g, 1.0, k / n) == pytest.approx(idx[k] / n, abs=1e-15)


def test_compose_examples():
    assert dh.compose(D.D1, D.D2) is D.D3
    assert dh.compose("d1", "d1") is D.E
    assert dh.compose(D.E, D.D2) is D.D2


def test_compose_matches_rotations():
    for a, b in itertools.product(dh.ELEMENTS, repeat=2):
        assert np.array_equal(dh.rotation_matrix(dh.compose(a, b)), dh.rotation_matrix(a) @ dh.rotation_matrix(b))


def test_identity_and_involution(rng):
    c = random_curve(rng, 32)
    assert np.array_equal(dh.act(D.E, c).points, c.points)
    for g in dh.ELEMENTS:
        assert np.array_equal(dh.act(g, dh.act(g, c)).points, c.points)


@given(seeds, elements, elements)
@settings(max_examples=40, deadline=None)
def test_group_law_is_bitwise(seed, a, b):
    c = random_curve(np.random.default_rng(seed), 24)
    lhs = dh.act(dh.compose(a, b), c).points
    rhs = dh.act(a, dh.act(b, c)).points
    assert np.array_equal(lhs, rhs)


@given(seeds, elements, st.floats(-3, 3))
@settings(max_examples=30, deadline=None)
def test_action_is_linear(seed, g, sigma):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(16, 3))
    y = rng.normal(size=(16, 3))
    assert np.array_equal(dh.act_points(g, sigma * x + y), sigma * dh.act_points(g, x) + dh.act_points(g, y))


def test_circle_is_fixed_by_d2():
    c = co.unit_circle(256)
    assert np.abs(dh.act(D.D2, c).points - c.points).max() <= 1e-12


def test_symmetry_defect_examples():
    assert dh.symmetry_defect(co.tpc_pi(512)) <= 1e-12
    assert dh.symmetry_defect(co.doubly_covered_circle(512)) == pytest.approx(1 / (2 * math.pi), abs=1e-3)
    assert dh.symmetry_defect(cv.translate(co.unit_circle(128), [0.1, 0, 0])) > 0.05


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_symmetrize_is_idempotent_projection(seed):
    c = random_curve(np.random.default_rng(seed), 32)
    s1 = dh.symmetrize(c)
    s2 = dh.symmetrize(s1)
    assert np.abs(s2.points - s1.points).max() <= 1e-12
    assert dh.symmetry_defect(s1) <= 1e-12


def test_symmetrize_examples():
    tpc = co.tpc_pi(256)
    assert np.abs(dh.symmetrize(tpc).points - tpc.points).max() <= 1e-12
    shifted = cv.translate(co.unit_circle(256), [0.1, 0, 0])
    centred = dh.symmetrize(shifted)
    assert np.abs(centred.points.mean(axis=0)).max() <= 1e-12


def test_glue_circle_matches_analytic():
    n = 512
    c = dh.glue(co.circle_arc(1.0, n // 4))
    w = 2 * math.pi * np.arange(n) / n
    exact = np.column_stack([np.sin(w), np.zeros(n), np.cos(w)]) / (2 * math.pi)
    assert np.abs(c.points - exact).max() <= 1e-12


def test_glue_tpc_pi_shape():
    c = co.tpc_pi(512)
    assert np.abs(c.points[0]).max() <= 1e-12 and np.abs(c.points[256]).max() <= 1e-12
    assert np.abs(c.points[:, 2]).max() == 0.0
    # two circles of radius 1/(4 pi) centred at (+-1/(4 pi), 0, 0)
    centre = np.where(c.points[:, :1] >= 0, 1.0, -1.0) * np.array([1 / (4 * math.pi), 0, 0])
    radii = np.linalg.norm(c.points - centre, axis=1)
    assert np.allclose(radii, 1 / (4 * math.pi), atol=1e-12)
    # the common tangent at the double point is e2, up to the O(h) kink of the junction
    tangent = cv.derivative(c, 1).samples[0]
    assert abs(tangent[0]) <= 4 * math.pi * c.h and tangent[2] == 0.0
    assert tangent[1] == pytest.approx(1.0, abs=1e-3)


def test_glue_rejects_bad_endpoint():
    samples = np.array(co.circle_arc(1.0, 64).samples)
    samples[0] = [0.1, 0.0, 0.0]
    with pytest.raises(SymknotsError) as err:
        dh.glue(dh.GeneratingArc(1.0, samples))
    assert err.value.code == "endpoint-constraint"


def test_glue_rejects_kinked_tangent():
    arc = co.circle_arc(1.0, 64)
    # keep the endpoints, bend the start so it leaves the e3 axis steeply
    samples = np.array(arc.samples)
    samples[1:5, 2] += 0.01 * np.arange(1, 5)
    with pytest.raises(SymknotsError) as err:
        dh.glue(dh.GeneratingArc(1.0, samples))
    assert err.value.code == "tangent-constraint"


def test_glue_identities_are_bitwise():
    arc = co.torus_knot_arc(co.TorusKnotParams(3, 0.03), 128)
    c = dh.glue(arc)
    n, a = c.n, arc.samples
    for i in range(n // 4, n // 2):
        assert np.array_equal(c.points[i], dh.rotation_matrix(D.D1) @ a[n // 2 - i])
    for i in range(n // 2, 3 * n // 4):
        assert np.array_equal(c.points[i], dh.rotation_matrix(D.D2) @ a[i - n // 2])
    for i in range(3 * n // 4, n):
        assert np.array_equal(c.points[i], dh.rotation_matrix(D.D3) @ a[n - i])


def test_arc_constraint_examples():
    r = dh.check_arc_constraints(co.circle_arc(1.0, 1024))
    assert max(r.endpoint0_defect, r.endpoint1_defect, r.tangent0_defect, r.tangent1_defect) <= 1e-12
    r = dh.check_arc_constraints(co.torus_knot_arc(co.TorusKnotParams(3, 0.01), 1024))
    assert max(r.endpoint0_defect, r.endpoint1_defect, r.tangent0_defect, r.tangent1_defect) <= 1e-6
    assert r.ok()


def test_tilted_arc_fails_constraints():
    a = math.radians(5)
    rot = np.array([[math.cos(a), 0, math.sin(a)], [0, 1, 0], [-math.sin(a), 0, math.cos(a)]])
    arc = dh.GeneratingArc(1.0, co.circle_arc(1.0, 64).samples @ rot.T)
    r = dh.check_arc_constraints(arc)
    assert r.endpoint0_defect > 1e-3
    assert not r.ok()


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_reglue_restriction_is_identity(seed):
    c = dh.symmetrize(random_curve(np.random.default_rng(seed), 64, amp=0.05))
    again = dh.glue(dh.restrict(c), tol_tangent=math.inf)
    assert np.abs(again.points - c.points).max() <= 1e-12


@pytest.mark.parametrize("axis", [0, 1, 2])
def test_reflection_keeps_symmetry(axis):
    c = co.torus_knot(co.TorusKnotParams(3, 0.03), 512)
    assert dh.symmetry_defect(dh.reflect(c, axis)) <= 1e-12


@given(seeds, elements)
@settings(max_examples=20, deadline=None)
def test_energies_are_invariant(seed, g):
    c = random_curve(np.random.default_rng(seed), 32, amp=0.05)
    moved = dh.act(g, c)
    p = en.EnergyParams(3.0, 0.01)
    for f in (en.bending_energy, lambda x: en.tp_energy(x, p), lambda x: en.total_energy(x, p)):
        assert f(moved) == pytest.approx(f(c), rel=1e-10)


def test_parse_accepts_strings():
    assert D.parse("D3") is D.D3
    assert D.parse(D.D1) is D.D1
    with pytest.raises(ValueError):
        D.parse("d4")
