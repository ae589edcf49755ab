"""Canonical polytopes and spherical realizations used by tests and the CLI."""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull

from .polytope import (Polytope, SphericalRealization, central_projection,
                       inscribed_check, orient_consistently)
from .sphere_core import TWO_PI, normalize_rows

RNG_ALGORITHM = "numpy.random.PCG64"
RNG_VERSION = 1
GOLDEN = (1 + np.sqrt(5)) / 2


@dataclass(frozen=True, eq=False)
class Fixture:
    name: str
    polytope: Optional[Polytope] = None
    realization_: Optional[SphericalRealization] = None
    cap: Optional[float] = None
    params: dict = field(default_factory=dict)

    @property
    def realization(self):
        if self.realization_ is not None:
            return self.realization_
        center = inscribed_check(self.polytope).center
        R = central_projection(self.polytope, center)
        return SphericalRealization(R.positions, R.edges, R.faces, self.name)

    def metadata(self):
        meta = {"fixture": self.name, "params": self.params}
        if "seed" in self.params:
            meta["rng"] = {"algorithm": RNG_ALGORITHM, "version": RNG_VERSION}
        return meta


def cube():
    v = np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)], float) / np.sqrt(3)
    faces = [(0, 1, 3, 2), (4, 5, 7, 6), (0, 1, 5, 4), (2, 3, 7, 6), (0, 2, 6, 4), (1, 3, 7, 5)]
    return Polytope.from_faces(v, faces)


def tetrahedron():
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float) / np.sqrt(3)
    return Polytope.from_faces(v, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def octahedron():
    v = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], float)
    faces = [(x, y, z) for x in (0, 1) for y in (2, 3) for z in (4, 5)]
    return Polytope.from_faces(v, faces)


def hull_polytope(points):
    """Convex hull of points in general position; faces are the hull triangles."""
    pts = np.asarray(points, float)
    hull = ConvexHull(pts)
    return Polytope.from_faces(pts, [tuple(s) for s in hull.simplices])


def icosahedron():
    v = []
    for a in (-1, 1):
        for b in (-GOLDEN, GOLDEN):
            v += [[0, a, b], [a, b, 0], [b, 0, a]]
    return hull_polytope(normalize_rows(v))


def triakis_cube_vertices():
    """Triakis tetrahedron whose eight vertices are the cube's vertices.

    Each square face is cut along the diagonal belonging to the inscribed
    tetrahedron, giving twelve right triangles.
    """
    P = cube()
    tet = {i for i, v in enumerate(P.vertices) if np.prod(np.sign(v)) > 0}
    faces = []
    for a, b, c, d in P.faces:
        if a in tet:
            faces += [(a, b, c), (a, c, d)]
        else:
            faces += [(b, c, d), (b, d, a)]
    return Polytope.from_faces(P.vertices, faces)


def pentagram_prism(colatitude=0.5):
    """Two star pentagons joined by five quadrilaterals; a degree-two realization."""
    az = TWO_PI * np.arange(5) / 5
    top = np.column_stack([np.sin(colatitude) * np.cos(az), np.sin(colatitude) * np.sin(az),
                           np.full(5, np.cos(colatitude))])
    bottom = top * np.array([1.0, 1.0, -1.0])
    pos = np.vstack([top, bottom])
    faces = [(0, 2, 4, 1, 3), (5, 8, 6, 9, 7)]
    faces += [((k + 2) % 5, k, 5 + k, 5 + (k + 2) % 5) for k in range(5)]
    return SphericalRealization.from_faces(pos, faces, "pentagram_prism")


SLACK_RED = ((1, 6), (2, 4), (3, 5))


def slack_cube(colatitude=np.pi / 4, red_cables=True):
    """Cube graph laid on three meridians from N to S, 120 degrees apart.

    Vertices: 0 = N, 1..3 = upper path vertices, 4..6 = lower path vertices,
    7 = S.  Path ``i`` is N -> i -> 4 + i % 3 -> S on longitude ``2 pi (i-1)/3``.
    The red cables join each upper vertex to the lower vertex of the
    previous meridian.  Without them the faces are the three lunes.
    """
    pos = np.zeros((8, 3))
    pos[0], pos[7] = (0, 0, 1), (0, 0, -1)
    for i in (1, 2, 3):
        lon = TWO_PI * (i - 1) / 3
        up = (np.sin(colatitude) * np.cos(lon), np.sin(colatitude) * np.sin(lon), np.cos(colatitude))
        pos[i] = up
        pos[4 + i % 3] = (up[0], up[1], -up[2])
    if red_cables:
        faces = [(0, 1, 6, 2), (0, 2, 4, 3), (0, 3, 5, 1),
                 (7, 4, 3, 5), (7, 5, 1, 6), (7, 6, 2, 4)]
    else:
        faces = [(0, 1, 5, 7, 6, 2), (0, 2, 6, 7, 4, 3), (0, 3, 4, 7, 5, 1)]
    faces = orient_consistently(faces)
    R = SphericalRealization.from_faces(pos, faces, "slack_cube")
    from .rigidity_lab import fan_area
    from .sphere_core import containing_hemisphere
    total = sum(fan_area(R.face_polygon(k), containing_hemisphere(R.face_polygon(k))[0])
                for k in range(len(faces)))
    if total < 0:
        R = SphericalRealization.from_faces(pos, [f[::-1] for f in faces], "slack_cube")
    return R


def random_inscribed(n, seed, margin=1e-3, max_tries=1000):
    """Convex hull of ``n`` uniform unit vectors, retried until usable.

    Rejects draws whose hull does not contain the origin with some room or
    whose projected faces come within ``margin`` of the 2 pi perimeter bound.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(max_tries):
        pts = normalize_rows(rng.normal(size=(n, 3)))
        hull = ConvexHull(pts)
        if len(hull.vertices) != n or np.max(hull.equations[:, 3]) > -0.05:
            continue
        P = hull_polytope(pts)
        R = central_projection(P, np.zeros(3))
        if np.min(TWO_PI - R.face_perimeters) < margin:
            continue
        return P
    raise RuntimeError(f"no usable hull after {max_tries} draws")


def prism(height=1.0, twist=0.0):
    """Triangular prism realization on the sphere, top face twisted by ``twist``."""
    az = TWO_PI * np.arange(3) / 3
    top = np.column_stack([np.cos(az + twist), np.sin(az + twist), np.full(3, height)])
    bot = np.column_stack([np.cos(az), np.sin(az), np.full(3, -height)])
    faces = [(0, 1, 2), (3, 5, 4)] + [(k, 3 + k, 3 + (k + 1) % 3, (k + 1) % 3) for k in range(3)]
    faces = orient_consistently(faces)
    pos = normalize_rows(np.vstack([top, bot]))
    R = SphericalRealization.from_faces(pos, faces, "prism")
    from .rigidity_lab import degree
    if degree(R).degree < 0:
        R = SphericalRealization.from_faces(pos, [f[::-1] for f in faces], "prism")
    return R


NAMES = ("cube", "tetrahedron", "octahedron", "icosahedron", "triakis_cube_vertices",
         "pentagram_prism", "slack_cube", "random_inscribed")


def get_fixture(name, **params):
    if name == "cube":
        return Fixture(name, cube(), cap=np.pi / 4)
    if name == "tetrahedron":
        return Fixture(name, tetrahedron())
    if name == "octahedron":
        return Fixture(name, octahedron())
    if name == "icosahedron":
        return Fixture(name, icosahedron())
    if name == "triakis_cube_vertices":
        return Fixture(name, triakis_cube_vertices())
    if name == "pentagram_prism":
        colat = float(params.get("colatitude", 0.5))
        return Fixture(name, None, pentagram_prism(colat), params={"colatitude": colat})
    if name == "slack_cube":
        red = bool(params.get("red_cables", True))
        colat = float(params.get("colatitude", np.pi / 4))
        return Fixture(name, None, slack_cube(colat, red), cap=np.pi / 4,
                       params={"colatitude": colat, "red_cables": red})
    if name == "random_inscribed":
        n, seed = int(params.get("n", 10)), int(params.get("seed", 0))
        return Fixture(name, random_inscribed(n, seed), params={"n": n, "seed": seed})
    raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
