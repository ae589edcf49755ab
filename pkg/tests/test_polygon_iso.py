import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import least_squares

from spiderweb.errors import Infeasible, ModeUnavailable, PreconditionViolated
from spiderweb.generators import dido_polygon, edge_spec, outside_polygon
from spiderweb.polygon_iso import (EdgeLengthSpec, area_derivative, chord_angle,
                                   classify, dominated_area_check,
                                   lexell_locus_check, maximize_area,
                                   solve_circumscribed)
from spiderweb.sphere_core import (GeodesicArc, SphericalPolygon, circumcircle3,
                                   enclosing_hemisphere,
                                   rotation_about, signed_area,
                                   triangle_signed_area)

X, Y, Z = np.eye(3)
EDGE = np.arccos(1 / 3)

# high-precision values (40-digit mpmath: closure equation root plus side-length area formula)
DIDO_AREA = 0.67967381890824387419
PENTAGON = (0.5, 0.7, 0.9, 0.4, 0.6)
PENTAGON_RADIUS = 0.55636639084940079429
PENTAGON_AREA = 0.69820096540742250124
OBTUSE = (0.3, 0.4, 0.65)
OBTUSE_RADIUS = 0.44834293094825341320
OBTUSE_AREA = 0.042924975018152594835


def dido_triangle():
    s = np.sin(np.pi / 4)
    return SphericalPolygon([[s, 0, s], [-s, 0, s], [0, s, s]])


# --- specs and classification ---------------------------------------------------

@pytest.mark.parametrize("lengths", [(3.0, 0.1, 0.1), (1.0, 1.0), (3.2, 1.0, 1.0), (2.0, 2.0, 2.5),
                                     (0.0, 1.0, 1.0)])
def test_infeasible_specs(lengths):
    with pytest.raises(Infeasible):
        EdgeLengthSpec(lengths)


def test_classify_cube_face():
    face = SphericalPolygon(np.array([[1, 1, 1], [-1, 1, 1], [-1, -1, 1], [1, -1, 1]]) / np.sqrt(3))
    c = classify(face)
    assert c.is_proper and c.cocircular and not c.is_dido
    assert c.center_location.kind == "Inside"
    assert c.circumcircle.radius == pytest.approx(np.arccos(1 / np.sqrt(3)), abs=1e-12)


def test_classify_dido_triangle():
    T = dido_triangle()
    np.testing.assert_allclose(T.edge_lengths, [np.pi / 2, np.pi / 3, np.pi / 3], atol=1e-15)
    c = classify(T)
    assert c.is_dido and c.dido_edge == 0
    assert c.center_location.kind == "Boundary" and c.center_location.edge == 0
    np.testing.assert_allclose(c.circumcircle.center, Z, atol=1e-15)


def test_classify_octant():
    c = classify(SphericalPolygon([X, Y, Z]))
    assert c.is_proper and c.cocircular and c.center_location.kind == "Inside"
    np.testing.assert_allclose(c.circumcircle.center, np.ones(3) / np.sqrt(3), atol=1e-15)


def test_classify_non_cocircular_and_improper():
    c = classify(SphericalPolygon([X, Y, [-1, 0.2, 0.1], [0.1, -1, 0.3]]))
    assert not c.cocircular and c.center_location.kind == "NotApplicable"
    ring = SphericalPolygon([X, Y, -X + 0.01 * Y, -Y])
    assert not classify(ring).is_proper


def test_classify_outside_polygon():
    rng = np.random.default_rng(5)
    P = outside_polygon(rng)
    c = classify(P)
    assert c.center_location.kind == "Outside"
    assert c.center_location.edge == int(np.argmax(P.edge_lengths))


# --- circumscribed solver ---------------------------------------------------------

def test_regular_triangle_is_octant():
    sol = solve_circumscribed((np.pi / 2,) * 3, center_inside=True)
    assert sol.side == "inside"
    assert sol.radius == pytest.approx(np.arccos(1 / np.sqrt(3)), abs=1e-14)
    assert sol.area == pytest.approx(np.pi / 2, abs=1e-13)
    R = np.linalg.qr(np.column_stack([X, Y, Z]))[0]
    assert abs(sol.area - signed_area(SphericalPolygon([X, Y, Z]) .rotated(R))) < 1e-12


def test_dido_lengths_only_on_the_boundary():
    spec = (np.pi / 3, np.pi / 3, np.pi / 2)
    sol = solve_circumscribed(spec)
    assert sol.side == "boundary"
    assert sol.radius == pytest.approx(np.pi / 4, abs=1e-15)
    assert sum(chord_angle(l, sol.radius) for l in spec[:2]) == pytest.approx(np.pi, abs=1e-13)
    assert sol.area == pytest.approx(DIDO_AREA, abs=1e-13)
    # the hand-built triangle runs clockwise
    assert sol.area == pytest.approx(-signed_area(dido_triangle()), abs=1e-13)
    for side in (True, False):
        with pytest.raises(ModeUnavailable):
            solve_circumscribed(spec, center_inside=side)


def test_cube_face_lengths_give_square():
    sol = solve_circumscribed((EDGE,) * 4)
    assert sol.radius == pytest.approx(np.arccos(1 / np.sqrt(3)), abs=1e-14)
    assert sol.area == pytest.approx(2 * np.pi / 3, abs=1e-12)


def test_frozen_pentagon_and_obtuse_triangle():
    sol = solve_circumscribed(PENTAGON)
    assert sol.side == "inside"
    assert sol.radius == pytest.approx(PENTAGON_RADIUS, abs=1e-13)
    assert sol.area == pytest.approx(PENTAGON_AREA, abs=1e-12)
    sol = solve_circumscribed(OBTUSE)
    assert sol.side == "outside"
    assert sol.radius == pytest.approx(OBTUSE_RADIUS, abs=1e-13)
    assert sol.area == pytest.approx(OBTUSE_AREA, abs=1e-13)


@given(st.integers(0, 10**6))
def test_solver_realizes_the_lengths(seed):
    ls = edge_spec(np.random.default_rng(seed))
    sol = solve_circumscribed(ls)
    P = sol.polygon
    np.testing.assert_allclose(P.edge_lengths, ls, atol=1e-10)
    c = classify(P)
    assert c.cocircular
    assert c.circumcircle.radius == pytest.approx(sol.radius, abs=1e-9)
    assert P.perimeter < 2 * np.pi
    assert enclosing_hemisphere(P.vertices) is not None


@given(st.integers(0, 10**6), st.sampled_from([1e-3, 1e-2]))
def test_monotonicity_on_each_side(seed, delta):
    ls = edge_spec(np.random.default_rng(seed))
    base = solve_circumscribed(ls)
    m = int(np.argmax(ls))
    if base.side == "inside":
        for i in range(len(ls)):
            up = ls.copy()
            up[i] += delta
            try:
                moved = solve_circumscribed(up)
            except Infeasible:
                continue
            if moved.side == "inside":
                assert moved.area > base.area
    elif base.side == "outside":
        dn = ls.copy()
        dn[m] -= delta
        moved = solve_circumscribed(dn)
        if moved.side == "outside":
            assert moved.area > base.area


# --- maximization ---------------------------------------------------------------------

def test_maximize_regular_triangle():
    P = maximize_area((np.pi / 2,) * 3, seed=0)
    assert signed_area(P) == pytest.approx(np.pi / 2, abs=1e-9)


def test_maximize_dido_lengths():
    P = maximize_area((np.pi / 3, np.pi / 3, np.pi / 2), seed=0)
    assert signed_area(P) == pytest.approx(DIDO_AREA, abs=1e-6)
    c = classify(P)
    assert c.is_dido and c.center_location.kind == "Boundary"


def test_maximize_frozen_pentagon():
    P = maximize_area(PENTAGON, seed=1)
    assert signed_area(P) == pytest.approx(PENTAGON_AREA, abs=1e-6)
    assert classify(P).cocircular_residual < 1e-6


def _random_same_length_polygon(ls, rng):
    n = len(ls)

    def resid(x):
        v = x.reshape(n, 3)
        nv = np.linalg.norm(v, axis=1)
        u = v / nv[:, None]
        w = np.roll(u, -1, axis=0)
        d = np.arctan2(np.linalg.norm(np.cross(u, w), axis=1), np.einsum("ij,ij->i", u, w))
        return np.concatenate([d - ls, nv - 1])

    sol = least_squares(resid, rng.normal(size=3 * n), xtol=1e-14, ftol=1e-14, gtol=1e-14)
    if np.max(np.abs(sol.fun)) > 1e-9:
        return None
    v = sol.x.reshape(n, 3)
    return SphericalPolygon(v / np.linalg.norm(v, axis=1)[:, None])


def test_maximum_beats_random_polygons_with_same_lengths():
    ls = np.array(PENTAGON)
    best = signed_area(maximize_area(ls, seed=3))
    rng = np.random.default_rng(17)
    found = 0
    while found < 1000:
        Q = _random_same_length_polygon(ls, rng)
        if Q is None:
            continue
        found += 1
        # sign depends on traversal direction; compare magnitudes
        assert abs(signed_area(Q)) <= best + 1e-9


def test_maximize_is_deterministic():
    a = maximize_area(PENTAGON, seed=4).vertices
    b = maximize_area(PENTAGON, seed=4).vertices
    assert np.array_equal(a, b)


def test_maximize_infeasible():
    with pytest.raises(Infeasible):
        maximize_area((3.0, 0.1, 0.1))


# --- derivatives ------------------------------------------------------------------------

def test_dido_derivatives():
    T = dido_triangle()
    assert abs(area_derivative(T, 0)) < 5e-4
    assert area_derivative(T, 1) > 1e-4
    assert area_derivative(T, 2) > 1e-4


def test_outside_derivative_is_negative():
    sol = solve_circumscribed(OBTUSE)
    assert area_derivative(sol.polygon, 2) < -1e-4


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_generated_dido_polygons_are_critical(seed):
    rng = np.random.default_rng(seed)
    P = dido_polygon(rng)
    c = classify(P)
    assert c.is_dido
    assert abs(area_derivative(P, c.dido_edge)) < 5e-4
    for i in range(len(P)):
        if i != c.dido_edge:
            assert area_derivative(P, i) > 1e-4


# --- domination and Lexell --------------------------------------------------------------

def test_domination_examples():
    P = solve_circumscribed(PENTAGON).polygon
    R = rotation_about([1, 2, 3], 0.7)
    v = dominated_area_check(P, P.rotated(R))
    assert v.q_area_leq and v.congruent
    v = dominated_area_check(P, P)
    assert v.q_area_leq and v.congruent
    shorter = np.array(PENTAGON)
    shorter[2] -= 0.05
    Q = maximize_area(shorter, seed=0)
    v = dominated_area_check(P, Q)
    assert v.q_area_leq and not v.congruent
    longer = np.array(PENTAGON)
    longer[1] += 0.05
    with pytest.raises(PreconditionViolated):
        dominated_area_check(P, solve_circumscribed(longer).polygon)


def _lexell_apexes(a, b, c0, k=6):
    circ = circumcircle3(-a, -b, c0)
    e1 = c0 - np.dot(c0, circ.center) * circ.center
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(circ.center, e1)
    side = np.sign(np.dot(c0, np.cross(a, b)))
    out = []
    for t in np.linspace(-2.0, 2.0, 41):
        p = np.cos(circ.radius) * circ.center + np.sin(circ.radius) * (np.cos(t) * e1 + np.sin(t) * e2)
        if np.sign(np.dot(p, np.cross(a, b))) == side and min(np.linalg.norm(p - a), np.linalg.norm(p - b)) > 0.1:
            out.append(p)
    return out[:k]


def test_lexell_circle_apexes():
    a, b = np.array([np.sin(0.4), 0, np.cos(0.4)]), np.array([-np.sin(0.4), 0, np.cos(0.4)])
    c0 = np.array([0.0, np.sin(0.6), np.cos(0.6)])
    apexes = _lexell_apexes(a, b, c0)
    assert len(apexes) >= 4
    areas = [triangle_signed_area(a, b, p) for p in apexes]
    assert max(areas) - min(areas) < 1e-12
    assert lexell_locus_check(GeodesicArc(a, b), apexes)


def test_lexell_unequal_areas_and_single_apex():
    a, b = X, Y
    r = lexell_locus_check(GeodesicArc(a, b), [Z, np.array([0.3, 0.3, 0.9])])
    assert not r and not r.areas_equal
    assert lexell_locus_check(GeodesicArc(a, b), [Z])
