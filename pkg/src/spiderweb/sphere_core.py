"""
Floating-point primitives on the unit sphere.

Points are plain ``numpy`` arrays of shape ``(3,)``; :func:`point` builds one
and renormalizes it.  Orientation convention: a polygon traversed
counterclockwise as seen from outside the sphere has positive area.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (AntipodalInput, CollinearPoints, DegeneratePolygon,
                     DegenerateVertex, HalfwayAntipodal, OutsideHemisphere)

TWO_PI = 2.0 * np.pi
FOUR_PI = 4.0 * np.pi

ANTIPODAL_TOL = 1e-9
BOUNDARY_TOL = 1e-9


def point(*coords):
    """Unit vector from ``point(x, y, z)`` or ``point([x, y, z])``."""
    v = np.asarray(coords[0] if len(coords) == 1 else coords, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    return v / n


def normalize_rows(a):
    a = np.asarray(a, dtype=float)
    return a / np.linalg.norm(a, axis=-1, keepdims=True)


def is_antipodal(a, b):
    return float(np.dot(a, b)) <= -1.0 + ANTIPODAL_TOL


def geodesic_distance(a, b):
    """Arc length between unit vectors, in ``[0, pi]``."""
    # atan2 form keeps full precision for nearly equal and nearly antipodal points
    return float(np.arctan2(np.linalg.norm(np.cross(a, b)), np.dot(a, b)))


def arc_midpoint(a, b):
    if is_antipodal(a, b):
        raise AntipodalInput("midpoint of antipodal points is not unique")
    return point(np.asarray(a, float) + np.asarray(b, float))


def slerp(a, b, t):
    """Point a fraction ``t`` of the way along the shortest arc from a to b."""
    theta = geodesic_distance(a, b)
    if theta < 1e-15:
        return np.asarray(a, float).copy()
    s = np.sin(theta)
    return point(np.sin((1 - t) * theta) / s * np.asarray(a) + np.sin(t * theta) / s * np.asarray(b))


def sample_arc(a, b, spacing=0.01):
    """Points on the shortest arc from a to b (a included, b excluded)."""
    theta = geodesic_distance(a, b)
    k = max(1, int(np.ceil(theta / spacing)))
    return np.array([slerp(a, b, i / k) for i in range(k)])


def tangent_toward(v, w):
    """Unit tangent at ``v`` pointing along the shortest arc to ``w``."""
    t = np.asarray(w, float) - np.dot(v, w) * np.asarray(v, float)
    n = np.linalg.norm(t)
    if n < 1e-15:
        raise DegenerateVertex("direction undefined for coincident or antipodal points")
    return t / n


@dataclass(frozen=True)
class GeodesicArc:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", point(self.a))
        object.__setattr__(self, "b", point(self.b))
        if is_antipodal(self.a, self.b):
            raise AntipodalInput("arc endpoints are antipodal")

    @property
    def length(self):
        return geodesic_distance(self.a, self.b)

    @property
    def midpoint(self):
        return arc_midpoint(self.a, self.b)


@dataclass(frozen=True, eq=False)
class SphericalPolygon:
    """Closed geodesic polygon; edge ``i`` joins vertex ``i`` to ``i + 1``."""

    vertices: np.ndarray

    def __post_init__(self):
        v = normalize_rows(np.array(self.vertices, dtype=float))
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 3:
            raise DegeneratePolygon("a polygon needs at least three 3-vectors")
        for i in range(len(v)):
            j = (i + 1) % len(v)
            if is_antipodal(v[i], v[j]):
                raise DegeneratePolygon(f"edge {i} joins antipodal points")
        for i in range(len(v)):
            for j in range(i + 1, len(v)):
                if geodesic_distance(v[i], v[j]) < 1e-12:
                    raise DegeneratePolygon(f"vertices {i} and {j} coincide")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    def edge(self, i):
        n = len(self.vertices)
        return self.vertices[i % n], self.vertices[(i + 1) % n]

    @property
    def edge_lengths(self):
        return np.array([geodesic_distance(*self.edge(i)) for i in range(len(self))])

    @property
    def perimeter(self):
        return float(self.edge_lengths.sum())

    def reversed(self):
        return SphericalPolygon(self.vertices[::-1])

    def rotated(self, R):
        return SphericalPolygon(self.vertices @ np.asarray(R).T)


def interior_angle(prev, vertex, next):
    """Angle at ``vertex`` on the left of the path prev -> vertex -> next.

    Measured counterclockwise (seen from outside) from the direction toward
    ``next`` to the direction toward ``prev``, so it lies in ``(0, 2*pi)``.
    """
    if geodesic_distance(prev, vertex) < 1e-15 or geodesic_distance(next, vertex) < 1e-15:
        raise DegenerateVertex("neighbor coincides with vertex")
    t_next = tangent_toward(vertex, next)
    t_prev = tangent_toward(vertex, prev)
    ang = np.arctan2(np.dot(vertex, np.cross(t_next, t_prev)), np.dot(t_next, t_prev))
    return float(ang % TWO_PI)


def spherical_excess(P):
    """Sum of interior angles minus ``(n - 2) pi``: area of the region on the left."""
    v = P.vertices
    n = len(v)
    total = sum(interior_angle(v[i - 1], v[i], v[(i + 1) % n]) for i in range(n))
    return float(total - (n - 2) * np.pi)


def triangle_signed_area(a, b, c):
    """Signed area of the geodesic triangle abc, in ``(-2 pi, 2 pi)``."""
    num = np.dot(a, np.cross(b, c))
    den = 1.0 + np.dot(a, b) + np.dot(b, c) + np.dot(c, a)
    return float(2.0 * np.arctan2(num, den))


def signed_area(P, reference=None):
    """Winding-weighted signed area of a closed geodesic polygon.

    Summed as a fan of triangles from ``reference``; by default the center of
    the hemisphere that contains the polygon, falling back to the first
    vertex when no hemisphere is guaranteed.  For simple polygons this equals
    the spherical excess of the left-hand region, mapped into ``(-2 pi, 2 pi]``.
    """
    if not isinstance(P, SphericalPolygon):
        P = SphericalPolygon(P)
    v = P.vertices
    if reference is None:
        hemi = containing_hemisphere(v)
        reference = hemi[0] if hemi is not None else v[0]
    n = len(v)
    return float(sum(triangle_signed_area(reference, v[i], v[(i + 1) % n]) for i in range(n)))


@dataclass(frozen=True, eq=False)
class Circumcircle:
    center: np.ndarray
    radius: float

    def deviation(self, points):
        """Largest ``|distance(center, p) - radius|`` over ``points``."""
        return max(abs(geodesic_distance(self.center, p) - self.radius) for p in points)


def circumcircle3(a, b, c):
    """Circle through three points with spherical radius below pi/2."""
    a, b, c = (np.asarray(x, float) for x in (a, b, c))
    nrm = np.cross(b - a, c - a)
    size = np.linalg.norm(nrm)
    if size < 1e-15:
        raise CollinearPoints("points coincide or are degenerate")
    nrm /= size
    offset = np.dot(nrm, a)
    if abs(offset) < 1e-12:
        raise CollinearPoints("points lie on one great circle")
    center = nrm if offset > 0 else -nrm
    return Circumcircle(center, geodesic_distance(center, a))


def curve_arcs(vertices, closed=True):
    v = np.asarray(vertices, float)
    idx = range(len(v)) if closed else range(len(v) - 1)
    return [(v[i], v[(i + 1) % len(v)]) for i in idx]


def point_at_length(vertices, s, closed=True):
    """Point at arc length ``s`` from the first vertex along the curve."""
    for a, b in curve_arcs(vertices, closed):
        ell = geodesic_distance(a, b)
        if s <= ell:
            return slerp(a, b, s / ell) if ell > 0 else np.asarray(a, float)
        s -= ell
    return np.asarray(vertices[0] if closed else vertices[-1], float)


def enclosing_hemisphere(vertices):
    """Center of an open hemisphere strictly containing a closed geodesic curve.

    Splits the curve into two halves of equal length and takes the midpoint of
    the arc joining the split points.  Returns ``None`` when the curve is at
    least ``2 pi`` long (containment not guaranteed) or when the constructed
    center fails the containment check.
    """
    v = normalize_rows(vertices)
    lengths = [geodesic_distance(a, b) for a, b in curve_arcs(v)]
    total = float(sum(lengths))
    if total >= TWO_PI:
        return None
    f1 = v[0]
    f2 = point_at_length(v, total / 2.0)
    if is_antipodal(f1, f2):
        raise HalfwayAntipodal("halfway points are antipodal")
    center = f1.copy() if geodesic_distance(f1, f2) < 1e-15 else arc_midpoint(f1, f2)
    # arcs shorter than pi between points of an open hemisphere stay inside it
    if np.min(v @ center) <= 0.0:
        return None
    return center


def closed_hemisphere_center(curve):
    """Center of the closed hemisphere holding an open curve of length <= pi."""
    c = np.asarray(curve, float)
    return arc_midpoint(c[0], c[-1])


def containing_hemisphere(vertices):
    """``(center, strict)`` for a hemisphere containing a closed curve, or None.

    Tries the strict construction first; otherwise uses the length-weighted
    centroid of the curve and accepts it if the curve lies in the closed
    hemisphere about it.
    """
    v = normalize_rows(vertices)
    try:
        c = enclosing_hemisphere(v)
    except HalfwayAntipodal:
        c = None
    if c is not None:
        return c, True
    acc = np.zeros(3)
    for a, b in curve_arcs(v):
        ell = geodesic_distance(a, b)
        if ell > 0:
            # integral of the arc parametrization over its length
            acc += (a + b) * np.tan(ell / 2.0)
    if np.linalg.norm(acc) < 1e-12:
        return None
    c = point(acc)
    pts = np.vstack([sample_arc(a, b) for a, b in curve_arcs(v)])
    if np.min(pts @ c) < -1e-12:
        return None
    return c, bool(np.min(pts @ c) > 0)


class Location(Enum):
    INSIDE = "Inside"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


def _tangent_basis(c):
    c = point(c)
    helper = np.array([1.0, 0.0, 0.0]) if abs(c[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = point(np.cross(c, helper))
    e2 = np.cross(c, e1)
    return c, e1, e2


def gnomonic(points, center):
    """Central projection onto the tangent plane at ``center`` (2-D coords)."""
    c, e1, e2 = _tangent_basis(center)
    p = np.atleast_2d(points)
    h = p @ c
    return np.column_stack([(p @ e1) / h, (p @ e2) / h])


def _segment_distance(q, a, b):
    ab = b - a
    denom = float(np.dot(ab, ab))
    t = 0.0 if denom == 0 else min(1.0, max(0.0, float(np.dot(q - a, ab)) / denom))
    return float(np.linalg.norm(q - (a + t * ab)))


def winding_number_2d(q, poly):
    w = 0
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        cross = (b[0] - a[0]) * (q[1] - a[1]) - (q[0] - a[0]) * (b[1] - a[1])
        if a[1] <= q[1]:
            if b[1] > q[1] and cross > 0:
                w += 1
        elif b[1] <= q[1] and cross < 0:
            w -= 1
    return w


def point_in_polygon(p, P, hemisphere_center):
    """Locate ``p`` relative to ``P`` via a winding number in gnomonic coordinates."""
    if not isinstance(P, SphericalPolygon):
        P = SphericalPolygon(P)
    c = point(hemisphere_center)
    if np.min(P.vertices @ c) <= 0.0:
        raise OutsideHemisphere("polygon is not inside the open hemisphere")
    hp = float(np.dot(p, c))
    if hp < 0.0:
        raise OutsideHemisphere("point lies in the opposite hemisphere")
    if hp == 0.0:
        return Location.OUTSIDE
    poly = gnomonic(P.vertices, c)
    q = gnomonic(p, c)[0]
    n = len(poly)
    if min(_segment_distance(q, poly[i], poly[(i + 1) % n]) for i in range(n)) < BOUNDARY_TOL:
        return Location.BOUNDARY
    return Location.INSIDE if winding_number_2d(q, poly) != 0 else Location.OUTSIDE


def distance_to_arc(p, a, b):
    """Geodesic distance from ``p`` to the shortest arc ab."""
    nrm = np.cross(a, b)
    size = np.linalg.norm(nrm)
    ends = min(geodesic_distance(p, a), geodesic_distance(p, b))
    if size < 1e-15:
        return ends
    nrm = nrm / size
    foot = np.asarray(p, float) - np.dot(p, nrm) * nrm
    if np.linalg.norm(foot) < 1e-15:
        return ends
    foot = foot / np.linalg.norm(foot)
    # foot lies on the arc iff it sits between a and b on their great circle
    if np.dot(np.cross(a, foot), nrm) >= 0 and np.dot(np.cross(foot, b), nrm) >= 0:
        return float(abs(np.arcsin(np.clip(np.dot(p, nrm), -1.0, 1.0))))
    return ends


def nearest_edge(p, P):
    d = [distance_to_arc(p, *P.edge(i)) for i in range(len(P))]
    i = int(np.argmin(d))
    return i, d[i]


def best_rotation(p, q):
    """Proper rotation R minimizing ``sum |R p_i - q_i|^2`` (Kabsch, det +1)."""
    H = np.asarray(p, float).T @ np.asarray(q, float)
    U, _, Vt = np.linalg.svd(H)
    d = np.sign(np.linalg.det(Vt.T @ U.T))
    D = np.diag([1.0, 1.0, d if d != 0 else 1.0])
    return Vt.T @ D @ U.T


def rotation_about(axis, angle):
    k = point(axis)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * K @ K
