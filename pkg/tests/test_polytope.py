import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spiderweb.errors import (CenterOutside, EulerViolation, NonManifold, NonPlanarFace,
                              NotConvex, NotInscribed, P0NotInterior, ParseError)
from spiderweb.fixtures import cube, get_fixture, hull_polytope, random_inscribed, tetrahedron
from spiderweb.polytope import (Polytope, SphericalRealization, Tightness, central_projection,
                                check_convex, check_tensegrity_hypotheses, emit_off,
                                inscribed_check, parse_off, reciprocal_diagram, tightness)
from spiderweb.sphere_core import signed_area, SphericalPolygon

TETRA_OFF = """OFF
# regular tetrahedron
4 4 6
1 1 1
1 -1 -1
-1 1 -1
-1 -1 1
3 0 1 2
3 0 3 1
3 0 2 3
3 1 3 2
"""


def sph(colat, az):
    return [np.sin(colat) * np.cos(az), np.sin(colat) * np.sin(az), np.cos(colat)]


def obtuse_face_polytope():
    pts = [sph(0.5, np.radians(a)) for a in (0, 60, 120)]
    pts += [sph(2.0, np.radians(a)) for a in (0, 120, 240)]
    return hull_polytope(np.array(pts + [[0.0, 0.0, -1.0]]))


# --- OFF ------------------------------------------------------------------------

def test_parse_tetrahedron():
    P = parse_off(TETRA_OFF)
    assert P.vertices.shape == (4, 3) and len(P.faces) == 4 and len(P.edges) == 6
    check_convex(P)


def test_parse_header_with_counts_and_bytes():
    text = TETRA_OFF.replace("OFF\n# regular tetrahedron\n4 4 6\n", "OFF 4 4 6\n")
    assert parse_off(text.encode()).faces == parse_off(TETRA_OFF).faces


def test_off_round_trip():
    for P in (cube(), tetrahedron(), random_inscribed(12, 3)):
        Q = parse_off(emit_off(P))
        assert np.array_equal(P.vertices, Q.vertices)
        assert P.faces == Q.faces
        assert emit_off(Q) == emit_off(P)


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("PLY\n", 1),
    (TETRA_OFF.replace("3 1 3 2", "3 1 3 9"), 11),
    (TETRA_OFF.replace("-1 -1 1", "-1 -1 x"), 7),
    (TETRA_OFF.replace("3 0 1 2", "2 0 1"), 8),
    ("\n".join(TETRA_OFF.splitlines()[:8]), 8),
])
def test_parse_errors_report_lines(text, line):
    with pytest.raises(ParseError) as exc:
        parse_off(text)
    assert exc.value.line == line


def test_non_manifold_and_euler():
    v = np.eye(3).tolist() + [[0, 0, 0], [1, 1, 1]]
    with pytest.raises(NonManifold):
        Polytope.from_faces(v, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    two = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]
    both = two + [tuple(i + 4 for i in f) for f in two]
    with pytest.raises(EulerViolation):
        Polytope.from_faces(np.vstack([np.eye(4)[:, :3], np.eye(4)[:, :3] + 5]), both)


def test_non_planar_and_non_convex():
    P = cube()
    v = P.vertices.copy()
    v[0] *= 1.2
    with pytest.raises(NonPlanarFace):
        check_convex(Polytope(v, P.faces))
    dent = get_fixture("icosahedron").polytope
    v = dent.vertices.copy()
    v[0] *= 0.3  # below the plane of its five neighbours
    with pytest.raises(NotConvex):
        check_convex(Polytope(v, dent.faces))


# --- inscribed sphere -------------------------------------------------------------

def test_inscribed_cube():
    s = inscribed_check(cube())
    np.testing.assert_allclose(s.center, 0, atol=1e-14)
    assert s.radius == pytest.approx(1.0)


def test_not_inscribed_after_scaling_a_vertex():
    P = get_fixture("octahedron").polytope
    v = P.vertices.copy()
    v[0] *= 1.1
    with pytest.raises(NotInscribed) as exc:
        inscribed_check(Polytope(v, P.faces))
    assert exc.value.max_residual > 1e-3


def test_center_outside():
    # a thin cap of the unit sphere: all vertices inscribed, center not enclosed
    pts = [sph(0.3, a) for a in np.linspace(0, 2 * np.pi, 7)[:-1]] + [[0, 0, 1]]
    with pytest.raises(CenterOutside):
        inscribed_check(hull_polytope(np.array(pts)))


# --- projection and tightness -----------------------------------------------------

def test_cube_projection_lengths():
    R = central_projection(cube(), np.zeros(3))
    np.testing.assert_allclose(R.edge_lengths, np.arccos(1 / 3), atol=1e-14)
    assert tightness(R).grade is Tightness.TIGHT


def test_tetrahedron_projection_lengths():
    R = central_projection(tetrahedron(), np.zeros(3))
    np.testing.assert_allclose(R.edge_lengths, np.arccos(-1 / 3), atol=1e-14)
    np.testing.assert_allclose(R.face_perimeters, 3 * np.arccos(-1 / 3), atol=1e-13)


def test_cone_point_outside():
    with pytest.raises(P0NotInterior):
        central_projection(cube(), [2.0, 0, 0])
    with pytest.raises(P0NotInterior):
        central_projection(cube(), [1.0, 0, 0])


def test_projection_from_off_center_point_stays_tight():
    R = central_projection(cube(), [0.5, -0.2, 0.4])
    assert tightness(R).grade is Tightness.TIGHT


def test_weakly_and_not_tight():
    ring = [[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]]
    faces = [(0, 1, 2, 3), (3, 2, 1, 0)]
    assert tightness(SphericalRealization.from_faces(ring, faces)).grade is Tightness.WEAKLY_TIGHT
    wavy = [[1, 0, 0.1], [0, 1, -0.1], [-1, 0, 0.1], [0, -1, -0.1]]
    rep = tightness(SphericalRealization.from_faces(wavy, faces))
    assert rep.grade is Tightness.NOT_TIGHT
    assert rep.face_margins.min() < 0


def test_slack_cube_without_red_cables_is_weakly_tight():
    R = get_fixture("slack_cube", red_cables=False).realization
    assert tightness(R).grade is Tightness.WEAKLY_TIGHT
    R = get_fixture("slack_cube").realization
    assert tightness(R).grade is Tightness.TIGHT


def test_realization_dict_round_trip():
    R = get_fixture("icosahedron").realization
    Q = SphericalRealization.from_dict(R.to_dict())
    assert np.array_equal(R.positions, Q.positions)
    assert R.edges == Q.edges and R.faces == Q.faces


@settings(max_examples=25)
@given(st.integers(5, 16), st.integers(0, 10**6))
def test_random_projection_is_tight_and_covers_the_sphere(n, seed):
    P = random_inscribed(n, seed)
    R = central_projection(P, inscribed_check(P).center)
    assert tightness(R).grade is Tightness.TIGHT
    total = sum(signed_area(SphericalPolygon(R.face_polygon(k))) for k in range(len(R.faces)))
    assert total == pytest.approx(4 * np.pi, abs=1e-10)


# --- face circumcenter hypotheses ---------------------------------------------------

@pytest.mark.parametrize("name", ["cube", "tetrahedron", "octahedron", "icosahedron"])
def test_platonic_certified(name):
    r = check_tensegrity_hypotheses(get_fixture(name).polytope)
    assert r.certified and r.inscribed
    assert all(f.location == "Inside" and f.agree for f in r.per_face)
    assert min(f.margin for f in r.per_face) > 0


def test_triakis_faces_are_boundary():
    r = check_tensegrity_hypotheses(get_fixture("triakis_cube_vertices").polytope)
    assert r.certified
    assert {f.location for f in r.per_face} == {"Boundary"}


def test_obtuse_faces_not_certified():
    r = check_tensegrity_hypotheses(obtuse_face_polytope())
    assert r.inscribed and not r.certified
    outside = [f for f in r.per_face if f.location == "Outside"]
    assert outside and all(f.margin < 0 for f in outside)
    assert all(f.agree for f in r.per_face)


def test_hypotheses_not_inscribed():
    P = get_fixture("octahedron").polytope
    v = P.vertices.copy()
    v[0] *= 1.1
    r = check_tensegrity_hypotheses(Polytope(v, P.faces))
    assert not r.inscribed and not r.certified
    assert r.reason.startswith("NotInscribed")


# --- reciprocal diagram -------------------------------------------------------------

@pytest.mark.parametrize("name", ["cube", "tetrahedron", "octahedron", "icosahedron"])
def test_reciprocal_edges_cross_at_right_angles(name):
    D = reciprocal_diagram(get_fixture(name).polytope)
    assert D.max_residual < 1e-12 and not D.degenerate
    assert len(D.dual.edges) == len(D.primal_edges)


def test_cube_reciprocal_is_octahedron():
    D = reciprocal_diagram(cube())
    assert len(D.dual.positions) == 6 and len(D.dual.faces) == 8
    assert all(len(f) == 3 for f in D.dual.faces)


def test_triakis_reciprocal_flags_collapsed_edges():
    D = reciprocal_diagram(get_fixture("triakis_cube_vertices").polytope)
    assert D.degenerate
    assert D.max_residual < 1e-12


@settings(max_examples=20)
@given(st.integers(5, 14), st.integers(0, 10**6))
def test_random_reciprocal(n, seed):
    D = reciprocal_diagram(random_inscribed(n, seed))
    assert D.max_residual < 1e-9
