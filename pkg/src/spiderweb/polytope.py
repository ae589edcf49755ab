"""
Convex polytopes, their projection to the sphere, and the inscribed-face test.

A :class:`Polytope` carries vertex coordinates and oriented face cycles; a
:class:`SphericalRealization` is the same combinatorics with unit-vector
positions and geodesic edges.
"""
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (AntipodalEdge, CenterOutside, EulerViolation, NonManifold,
                     NonPlanarFace, NotConvex, NotInscribed, P0NotInterior,
                     ParseError, TightnessViolation)
from .polygon_iso import classify
from .sphere_core import (TWO_PI, SphericalPolygon, Location, distance_to_arc,
                          geodesic_distance, is_antipodal, normalize_rows,
                          winding_number_2d)

TIGHT_TOL = 1e-9


def edges_of(faces):
    seen = set()
    for f in faces:
        for i in range(len(f)):
            a, b = f[i], f[(i + 1) % len(f)]
            seen.add((min(a, b), max(a, b)))
    return sorted(seen)


def _directed(faces):
    out = {}
    for k, f in enumerate(faces):
        for i in range(len(f)):
            out.setdefault((f[i], f[(i + 1) % len(f)]), []).append(k)
    return out


def orient_consistently(faces):
    """Flip faces so every edge is traversed once in each direction."""
    faces = [list(f) for f in faces]
    incident = {}
    for k, f in enumerate(faces):
        for i in range(len(f)):
            a, b = f[i], f[(i + 1) % len(f)]
            incident.setdefault((min(a, b), max(a, b)), []).append(k)
    for e, ks in incident.items():
        if len(ks) != 2:
            raise NonManifold(f"edge {e} lies on {len(ks)} faces")
    done = [False] * len(faces)
    for root in range(len(faces)):
        if done[root]:
            continue
        done[root] = True
        queue = deque([root])
        while queue:
            k = queue.popleft()
            f = faces[k]
            for i in range(len(f)):
                a, b = f[i], f[(i + 1) % len(f)]
                other = [j for j in incident[(min(a, b), max(a, b))] if j != k][0]
                g = faces[other]
                same = any(g[t] == a and g[(t + 1) % len(g)] == b for t in range(len(g)))
                if not done[other]:
                    if same:
                        faces[other] = g[::-1]
                    done[other] = True
                    queue.append(other)
                elif same:
                    raise NonManifold("surface is not orientable")
    return [tuple(f) for f in faces]


def validate_combinatorics(n_vertices, faces):
    for f in faces:
        if len(f) < 3 or len(set(f)) != len(f):
            raise NonManifold(f"face {f} is not a simple cycle")
        if min(f) < 0 or max(f) >= n_vertices:
            raise NonManifold(f"face {f} references a missing vertex")
    directed = _directed(faces)
    for (a, b), ks in directed.items():
        if len(ks) != 1 or len(directed.get((b, a), [])) != 1:
            raise NonManifold(f"edge ({a}, {b}) is not shared by exactly two oppositely oriented faces")
    used = {i for f in faces for i in f}
    E = len(edges_of(faces))
    if len(used) - E + len(faces) != 2:
        raise EulerViolation(f"V - E + F = {len(used)} - {E} + {len(faces)} != 2")


def signed_volume(vertices, faces):
    v = np.asarray(vertices, float)
    vol = 0.0
    for f in faces:
        for i in range(1, len(f) - 1):
            vol += np.dot(v[f[0]], np.cross(v[f[i]], v[f[i + 1]]))
    return vol / 6.0


@dataclass(frozen=True, eq=False)
class Polytope:
    vertices: np.ndarray
    faces: tuple

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError("vertices must be an (n, 3) array")
        faces = tuple(tuple(int(i) for i in f) for f in self.faces)
        validate_combinatorics(len(v), faces)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", faces)

    @classmethod
    def from_faces(cls, vertices, faces):
        """Build with faces reoriented consistently and outward."""
        faces = orient_consistently(faces)
        if signed_volume(vertices, faces) < 0:
            faces = [f[::-1] for f in faces]
        return cls(vertices, faces)

    @property
    def edges(self):
        return edges_of(self.faces)

    @property
    def scale(self):
        c = self.vertices.mean(axis=0)
        return float(max(1.0, np.max(np.linalg.norm(self.vertices - c, axis=1))))


# --- OFF ---------------------------------------------------------------------

def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_off(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = list(_content_lines(text))
    if not lines or not lines[0][1][0].upper().endswith("OFF"):
        raise ParseError("missing OFF header", 1 if not lines else lines[0][0])
    pos = 0
    head = lines[0][1][1:]
    if not head:
        pos = 1
        if pos >= len(lines):
            raise ParseError("missing counts line", lines[0][0])
        head = lines[pos][1]
    lineno = lines[pos][0]
    try:
        nv, nf = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise ParseError("counts line must read 'V F E'", lineno) from None
    pos += 1
    if len(lines) < pos + nv + nf:
        raise ParseError("file ends before all vertices and faces are listed", lines[-1][0])
    verts = []
    for lineno, tok in lines[pos:pos + nv]:
        try:
            verts.append([float(t) for t in tok[:3]])
        except ValueError:
            raise ParseError("bad vertex coordinate", lineno) from None
        if len(tok) < 3:
            raise ParseError("vertex needs three coordinates", lineno)
    faces = []
    for lineno, tok in lines[pos + nv:pos + nv + nf]:
        try:
            k = int(tok[0])
            idx = [int(t) for t in tok[1:1 + k]]
        except ValueError:
            raise ParseError("bad face entry", lineno) from None
        if len(idx) != k or k < 3:
            raise ParseError("face needs at least three indices", lineno)
        if min(idx) < 0 or max(idx) >= nv:
            raise ParseError("face index out of range", lineno)
        if len(set(idx)) != k:
            raise ParseError("face repeats a vertex", lineno)
        faces.append(idx)
    return Polytope.from_faces(np.array(verts), faces)


def emit_off(P):
    out = ["OFF", f"{len(P.vertices)} {len(P.faces)} {len(P.edges)}"]
    out += [" ".join(format(float(x), ".17g") for x in v) for v in P.vertices]
    out += [" ".join(str(i) for i in (len(f),) + tuple(f)) for f in P.faces]
    return "\n".join(out) + "\n"


# --- planes, convexity, inscribed sphere --------------------------------------

def face_plane(P, f):
    """Outward unit normal (Newell) and offset of face ``f``; checks planarity."""
    pts = P.vertices[list(f)]
    nrm = np.zeros(3)
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        nrm += np.cross(a, b)
    nrm /= np.linalg.norm(nrm)
    d = float(np.mean(pts @ nrm))
    dev = np.max(np.abs(pts @ nrm - d))
    if dev > 1e-8 * P.scale:
        raise NonPlanarFace(f"face {f} deviates {dev:.3e} from its plane")
    return nrm, d


def face_planes(P):
    return [face_plane(P, f) for f in P.faces]


def check_convex(P, tol=1e-9):
    for f, (nrm, d) in zip(P.faces, face_planes(P)):
        if np.max(P.vertices @ nrm - d) > tol * P.scale:
            raise NotConvex(f"a vertex lies beyond the plane of face {f}")


def is_interior(P, p, tol=1e-9):
    return all(np.dot(nrm, p) < d - tol * P.scale for nrm, d in face_planes(P))


@dataclass(frozen=True, eq=False)
class InscribedSphere:
    center: np.ndarray
    radius: float
    max_residual: float


def fit_sphere(points):
    """Least-squares sphere through ``points``: |x|^2 = 2 c.x + (R^2 - |c|^2)."""
    x = np.asarray(points, float)
    A = np.column_stack([2.0 * x, np.ones(len(x))])
    sol = np.linalg.lstsq(A, np.einsum("ij,ij->i", x, x), rcond=None)[0]
    c = sol[:3]
    R = float(np.sqrt(sol[3] + c @ c))
    return c, R


def inscribed_check(P, tol=1e-8):
    """Fitted sphere through all vertices, within ``tol`` relative to the radius."""
    c, R = fit_sphere(P.vertices)
    resid = float(np.max(np.abs(np.linalg.norm(P.vertices - c, axis=1) - R)))
    if resid >= tol * R:
        raise NotInscribed(resid)
    if not is_interior(P, c):
        raise CenterOutside("fitted sphere center is not interior to the polytope")
    return InscribedSphere(c, R, resid)


# --- spherical realizations ---------------------------------------------------

class Tightness(Enum):
    TIGHT = "Tight"
    WEAKLY_TIGHT = "WeaklyTight"
    NOT_TIGHT = "NotTight"


@dataclass(frozen=True, eq=False)
class TightnessReport:
    grade: Tightness
    edge_margins: np.ndarray
    face_margins: np.ndarray

    def to_dict(self):
        return {"grade": self.grade.value,
                "edge_margins": [float(x) for x in self.edge_margins],
                "face_margins": [float(x) for x in self.face_margins]}


@dataclass(frozen=True, eq=False)
class SphericalRealization:
    positions: np.ndarray
    edges: tuple
    faces: tuple
    name: str = field(default="")

    def __post_init__(self):
        p = normalize_rows(np.array(self.positions, dtype=float))
        p.setflags(write=False)
        object.__setattr__(self, "positions", p)
        object.__setattr__(self, "edges", tuple(tuple(sorted(map(int, e))) for e in self.edges))
        object.__setattr__(self, "faces", tuple(tuple(map(int, f)) for f in self.faces))

    @classmethod
    def from_faces(cls, positions, faces, name=""):
        return cls(positions, edges_of(faces), faces, name)

    def with_positions(self, positions):
        return SphericalRealization(positions, self.edges, self.faces, self.name)

    @property
    def edge_lengths(self):
        p = self.positions
        return np.array([geodesic_distance(p[i], p[j]) for i, j in self.edges])

    def face_polygon(self, k):
        return self.positions[list(self.faces[k])]

    @property
    def face_perimeters(self):
        out = []
        for f in self.faces:
            q = self.positions[list(f)]
            out.append(sum(geodesic_distance(q[i], q[(i + 1) % len(q)]) for i in range(len(q))))
        return np.array(out)

    def neighbors(self):
        nb = {i: [] for i in range(len(self.positions))}
        for k, (i, j) in enumerate(self.edges):
            nb[i].append((j, k))
            nb[j].append((i, k))
        return nb

    def to_dict(self):
        return {"vertices": [[float(x) for x in v] for v in self.positions],
                "edges": [list(e) for e in self.edges],
                "faces": [list(f) for f in self.faces]}

    @classmethod
    def from_dict(cls, d, name=""):
        edges = d.get("edges") or edges_of(d["faces"])
        return cls(np.array(d["vertices"], float), edges, d.get("faces", []), name)


def tightness(R):
    em = np.pi - R.edge_lengths
    fm = TWO_PI - R.face_perimeters
    margins = np.concatenate([em, fm])
    if np.all(margins > TIGHT_TOL):
        grade = Tightness.TIGHT
    elif np.all(margins >= -TIGHT_TOL):
        grade = Tightness.WEAKLY_TIGHT
    else:
        grade = Tightness.NOT_TIGHT
    return TightnessReport(grade, em, fm)


def central_projection(P, p0):
    p0 = np.asarray(p0, float)
    if not is_interior(P, p0):
        raise P0NotInterior("cone point is not strictly inside the polytope")
    q = normalize_rows(P.vertices - p0)
    for i, j in P.edges:
        if is_antipodal(q[i], q[j]):
            raise AntipodalEdge(f"edge ({i}, {j}) projects to antipodal points")
    R = SphericalRealization(q, P.edges, P.faces)
    report = tightness(R)
    if report.grade is not Tightness.TIGHT:
        raise TightnessViolation(f"projection of a convex polytope graded {report.grade.value}")
    return R


# --- face-circumcenter hypothesis check ---------------------------------------

def planar_circumcenter(a, b, c):
    u, v = b - a, c - a
    w = np.cross(u, v)
    return a + (np.dot(u, u) * np.cross(v, w) + np.dot(v, v) * np.cross(w, u)) / (2.0 * np.dot(w, w))


def _plane_basis(nrm):
    helper = np.array([1.0, 0.0, 0.0]) if abs(nrm[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(nrm, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(nrm, e1)


def locate_in_face(x, pts, nrm, tol):
    e1, e2 = _plane_basis(nrm)
    poly = np.column_stack([pts @ e1, pts @ e2])
    q = np.array([x @ e1, x @ e2])
    n = len(poly)
    dists = []
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        ab = b - a
        t = min(1.0, max(0.0, float(np.dot(q - a, ab) / np.dot(ab, ab))))
        dists.append(float(np.linalg.norm(q - a - t * ab)))
    if min(dists) < tol:
        return Location.BOUNDARY
    return Location.INSIDE if winding_number_2d(q, poly) != 0 else Location.OUTSIDE


@dataclass(frozen=True)
class FaceReport:
    face: int
    location: str
    margin: float
    spherical_location: str
    agree: bool

    def to_dict(self):
        return {"face": self.face, "location": self.location, "margin": self.margin,
                "spherical_location": self.spherical_location, "agree": self.agree}


@dataclass(frozen=True, eq=False)
class TensegrityHypothesisReport:
    inscribed: bool
    center: Optional[np.ndarray]
    radius: Optional[float]
    per_face: list
    certified: bool
    reason: str = ""

    def to_dict(self):
        return {
            "inscribed": self.inscribed,
            "center": None if self.center is None else [float(x) for x in self.center],
            "radius": self.radius,
            "per_face": [f.to_dict() for f in self.per_face],
            "certified": self.certified,
            "reason": self.reason,
        }


def face_circumcenters(P):
    return [planar_circumcenter(*P.vertices[list(f[:3])]) for f in P.faces]


def check_tensegrity_hypotheses(P, tol=1e-8):
    """Inscribed sphere plus every face circumcenter in its closed face.

    The planar location decides certification; the location of the projected
    circumcenter in the projected spherical face is reported alongside.
    """
    check_convex(P)
    planes = face_planes(P)
    try:
        sphere = inscribed_check(P, tol)
    except NotInscribed as exc:
        return TensegrityHypothesisReport(False, None, None, [], False,
                                          f"NotInscribed: max residual {exc.max_residual:.3e}")
    except CenterOutside as exc:
        c, R = fit_sphere(P.vertices)
        return TensegrityHypothesisReport(True, c, R, [], False, f"CenterOutside: {exc}")
    c, R = sphere.center, sphere.radius
    per_face = []
    for k, (f, (nrm, _)) in enumerate(zip(P.faces, planes)):
        pts = P.vertices[list(f)]
        cc = planar_circumcenter(*pts[:3])
        where = locate_in_face(cc, pts, nrm, 1e-9 * R)
        sph = normalize_rows(pts - c)
        dual = (cc - c) / np.linalg.norm(cc - c)
        margin = min(distance_to_arc(dual, sph[i], sph[(i + 1) % len(sph)]) for i in range(len(sph)))
        if where is Location.OUTSIDE:
            margin = -margin
        elif where is Location.BOUNDARY:
            margin = 0.0
        sph_kind = classify(SphericalPolygon(sph)).center_location.kind
        per_face.append(FaceReport(k, where.value, float(margin), sph_kind, sph_kind == where.value))
    certified = all(r.location in ("Inside", "Boundary") for r in per_face)
    return TensegrityHypothesisReport(True, c, R, per_face, certified,
                                      "" if certified else "a face circumcenter lies outside its face")


# --- reciprocal diagram -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReciprocalDiagram:
    dual: SphericalRealization
    primal_edges: list
    residuals: np.ndarray
    degenerate: list = field(default_factory=list)

    @property
    def max_residual(self):
        return float(np.max(self.residuals)) if len(self.residuals) else 0.0


def faces_around_vertices(faces):
    """For each vertex, the incident faces in rotational order."""
    into = {}
    for k, f in enumerate(faces):
        for i in range(len(f)):
            into[(f[i], f[(i + 1) % len(f)])] = k
    around = {}
    for v in sorted({i for f in faces for i in f}):
        start = next(k for (a, b), k in into.items() if b == v)
        cycle, k = [], start
        while True:
            cycle.append(k)
            f = faces[k]
            i = f.index(v)
            u = f[i - 1]
            k = into[(v, u)]
            if k == start:
                break
        around[v] = cycle
    return around


def reciprocal_diagram(P, sphere=None):
    """Dual realization from projected face circumcenters and crossing angles.

    For each primal edge the residual is ``|angle - pi/2|`` between the great
    circle of the primal edge and that of its dual edge.
    """
    if sphere is None:
        sphere = inscribed_check(P)
    c = sphere.center
    duals = normalize_rows(np.array(face_circumcenters(P)) - c)
    prim = normalize_rows(P.vertices - c)
    into = {}
    for k, f in enumerate(P.faces):
        for i in range(len(f)):
            into[(f[i], f[(i + 1) % len(f)])] = k
    dual_edges, residuals, degenerate = [], [], []
    for i, j in P.edges:
        f, g = into[(i, j)], into[(j, i)]
        dual_edges.append((f, g))
        n1 = np.cross(prim[i], prim[j])
        n2 = np.cross(duals[f], duals[g])
        if np.linalg.norm(n2) < 1e-12:
            # coplanar neighbours share a circumcenter: the dual edge collapses
            degenerate.append((i, j))
            continue
        n1 /= np.linalg.norm(n1)
        n2 /= np.linalg.norm(n2)
        angle = np.arctan2(np.linalg.norm(np.cross(n1, n2)), np.dot(n1, n2))
        residuals.append(abs(angle - np.pi / 2.0))
    around = faces_around_vertices(P.faces)
    dual_faces = [tuple(around[v]) for v in sorted(around)]
    dual = SphericalRealization(duals, dual_edges, dual_faces, "reciprocal")
    return ReciprocalDiagram(dual, list(P.edges), np.array(residuals), degenerate)
