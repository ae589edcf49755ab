"""
Isoperimetric machinery for spherical polygons with prescribed edge lengths.

The circumscribed realization of a length vector is built by root finding on
the circumradius; :func:`maximize_area` reaches the same optimum by direct
constrained optimization, so the two serve as independent checks of each
other.
"""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import (CollinearPoints, ConvergenceFailure, Infeasible,
                     ModeUnavailable, PreconditionViolated)
from .sphere_core import (TWO_PI, Circumcircle, GeodesicArc, SphericalPolygon,
                          arc_midpoint, best_rotation, circumcircle3,
                          containing_hemisphere, geodesic_distance,
                          nearest_edge, point_in_polygon, signed_area,
                          triangle_signed_area, Location)

COCIRCULAR_TOL = 1e-8
DIDO_TOL = 1e-8


@dataclass(frozen=True)
class EdgeLengthSpec:
    lengths: tuple

    def __post_init__(self):
        ls = tuple(float(x) for x in self.lengths)
        object.__setattr__(self, "lengths", ls)
        if len(ls) < 3:
            raise Infeasible("need at least three edges")
        if any(not (0.0 < x < np.pi) for x in ls):
            raise Infeasible("every edge length must lie in (0, pi)")
        total = sum(ls)
        if total >= TWO_PI:
            raise Infeasible(f"perimeter {total:.6g} is not below 2*pi")
        if max(ls) >= total - max(ls):
            raise Infeasible("longest edge is not shorter than the sum of the others")

    def __len__(self):
        return len(self.lengths)

    @property
    def longest(self):
        return int(np.argmax(self.lengths))


@dataclass(frozen=True)
class CenterLocation:
    kind: str  # Inside | Boundary | Outside | NotApplicable
    edge: Optional[int] = None

    def to_dict(self):
        return {"kind": self.kind, "edge": self.edge}


@dataclass(frozen=True, eq=False)
class PolygonClassification:
    is_proper: bool
    edge_lengths: list
    perimeter: float
    cocircular: bool
    circumcircle: Optional[Circumcircle]
    center_location: CenterLocation
    is_dido: bool
    dido_edge: Optional[int]
    cocircular_residual: float = field(default=float("nan"))

    def to_dict(self):
        cc = None
        if self.circumcircle is not None:
            cc = {"center": [float(x) for x in self.circumcircle.center],
                  "radius": float(self.circumcircle.radius)}
        return {
            "is_proper": self.is_proper,
            "edge_lengths": [float(x) for x in self.edge_lengths],
            "perimeter": float(self.perimeter),
            "cocircular": self.cocircular,
            "circumcircle": cc,
            "center_location": self.center_location.to_dict(),
            "is_dido": self.is_dido,
            "dido_edge": self.dido_edge,
        }


def _on_great_circle(v):
    return np.linalg.svd(np.asarray(v))[1][-1] < 1e-12


def fit_circumcircle(P):
    """Circle through the first non-collinear vertex triple, or None."""
    v = P.vertices
    for i, j, k in combinations(range(len(v)), 3):
        try:
            return circumcircle3(v[i], v[j], v[k])
        except CollinearPoints:
            continue
    return None


def classify(P):
    if not isinstance(P, SphericalPolygon):
        P = SphericalPolygon(P)
    lengths = P.edge_lengths
    perimeter = float(lengths.sum())
    proper = bool(np.all(lengths < np.pi) and not _on_great_circle(P.vertices)
                  and perimeter < TWO_PI)
    circle = fit_circumcircle(P)
    resid = float("nan") if circle is None else circle.deviation(P.vertices)
    cocircular = circle is not None and resid <= COCIRCULAR_TOL
    if not cocircular:
        return PolygonClassification(proper, list(lengths), perimeter, False, None,
                                     CenterLocation("NotApplicable"), False, None, resid)

    c = circle.center
    # radius < pi/2 puts every vertex in the open hemisphere about the center
    where = point_in_polygon(c, P, c)
    edge, _ = nearest_edge(c, P)
    location = CenterLocation(where.value, None if where is Location.INSIDE else edge)

    longest = int(np.argmax(lengths))
    strictly_longest = np.sum(lengths >= lengths[longest] - 1e-12) == 1
    mid = arc_midpoint(*P.edge(longest))
    is_dido = bool(proper and strictly_longest and geodesic_distance(c, mid) < DIDO_TOL)
    if is_dido:
        location = CenterLocation("Boundary", longest)
    return PolygonClassification(proper, list(lengths), perimeter, True, circle, location,
                                 is_dido, longest if is_dido else None, resid)


def chord_angle(length, r):
    """Angle at the center of a radius-``r`` circle subtended by a chord of given length."""
    s2 = np.sin(r) ** 2
    return float(np.arccos(np.clip((np.cos(length) - np.cos(r) ** 2) / s2, -1.0, 1.0)))


@dataclass(frozen=True, eq=False)
class Circumscribed:
    polygon: SphericalPolygon
    center: np.ndarray
    radius: float
    side: str  # inside | boundary | outside

    @property
    def area(self):
        return signed_area(self.polygon)


def _circle_point(r, azimuth):
    return np.array([np.sin(r) * np.cos(azimuth), np.sin(r) * np.sin(azimuth), np.cos(r)])


def solve_circumscribed(spec, center_inside=None):
    """Polygon with the given edge lengths whose vertices lie on one circle.

    ``center_inside=None`` picks whichever side the lengths admit; ``True`` or
    ``False`` demand that side and raise :class:`ModeUnavailable` otherwise.
    The Dido case (center at the midpoint of the longest edge) is reported as
    side ``"boundary"`` and is only returned in automatic mode.
    """
    if not isinstance(spec, EdgeLengthSpec):
        spec = EdgeLengthSpec(tuple(spec))
    ls = np.array(spec.lengths)
    m = spec.longest
    others = [i for i in range(len(ls)) if i != m]
    lo, hi = ls[m] / 2.0, np.pi / 2.0 - 1e-12

    def inside_eq(r):
        return sum(chord_angle(x, r) for x in ls) - TWO_PI

    def outside_eq(r):
        return sum(chord_angle(ls[i], r) for i in others) - chord_angle(ls[m], r)

    gap = sum(chord_angle(ls[i], lo) for i in others) - np.pi
    if abs(gap) <= 1e-13:
        side, r = "boundary", lo
    elif gap > 0:
        side = "inside"
        r = brentq(inside_eq, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    else:
        side = "outside"
        if outside_eq(hi) <= 0:
            raise Infeasible("closure equation has no root in the radius bracket")
        r = brentq(outside_eq, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    if center_inside is True and side != "inside":
        raise ModeUnavailable(f"no circumscribed realization with center inside (side={side})")
    if center_inside is False and side != "outside":
        raise ModeUnavailable(f"no circumscribed realization with center outside (side={side})")

    # walk round the circle so the longest edge is the one that closes the loop
    n = len(ls)
    order = [(m + 1 + k) % n for k in range(n)]
    verts = np.zeros((n, 3))
    az = 0.0
    for idx in order:
        verts[idx] = _circle_point(r, az)
        if idx != m:
            az += chord_angle(ls[idx], r)
    return Circumscribed(SphericalPolygon(verts), np.array([0.0, 0.0, 1.0]), float(r), side)


# --- direct maximization -----------------------------------------------------

def _cross(a, b):
    # np.cross carries heavy axis bookkeeping; this sits in the inner loop
    a0, a1, a2 = a[..., 0], a[..., 1], a[..., 2]
    b0, b1, b2 = b[..., 0], b[..., 1], b[..., 2]
    return np.stack([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0], axis=-1)


def _fan_area_and_grad(v0, V):
    """Fan area from the fixed vertex ``v0`` over free vertices ``V`` and its gradient."""
    a, b = V[:-1], V[1:]
    y = _cross(a, b) @ v0
    x = 1.0 + a @ v0 + np.einsum("ij,ij->i", a, b) + b @ v0
    s = (2.0 / (x * x + y * y))[:, None]
    grad = np.zeros_like(V)
    grad[:-1] += s * (x[:, None] * _cross(b, v0) - y[:, None] * (v0 + b))
    grad[1:] += s * (x[:, None] * _cross(v0, a) - y[:, None] * (v0 + a))
    return float(2.0 * np.arctan2(y, x).sum()), grad


def _random_start(rng, ls, v0):
    """Noisy points around a circle through ``v0`` sized from the perimeter alone."""
    n = len(ls)
    R = float(np.arcsin(min(0.99, sum(ls) / TWO_PI)))
    c = np.array([np.sin(R), 0.0, np.cos(R)])
    e1 = np.array([np.cos(R), 0.0, -np.sin(R)])
    e2 = np.cross(c, e1)
    az = rng.uniform(0, TWO_PI, n - 1)
    rad = R * rng.uniform(0.7, 1.3, n - 1)
    pts = np.array([np.cos(r) * c + np.sin(r) * (np.cos(t) * e1 + np.sin(t) * e2)
                    for t, r in zip(az, rad)])
    # counterclockwise order starting just after v0 (which sits at azimuth pi)
    return pts[np.argsort((az - np.pi) % TWO_PI)]


class _LengthProblem:
    """Maximize fan area over vertices 1..n-1 with vertex 0 pinned.

    Constraints: unit norm for each free vertex, ``v_i . v_{i+1} = cos l_i``
    for every edge.
    """

    def __init__(self, lengths, v0):
        self.ls = np.asarray(lengths, float)
        self.v0 = v0
        self.n = len(self.ls)
        self.m = self.n - 1
        self.cosl = np.cos(self.ls)
        self.ea = np.arange(self.n)
        self.eb = (self.ea + 1) % self.n

    def full(self, x):
        return np.vstack([self.v0, x.reshape(self.m, 3)])

    def objective(self, x):
        a, g = _fan_area_and_grad(self.v0, x.reshape(self.m, 3))
        return -a, -g.ravel()

    def constraints(self, x):
        V = x.reshape(self.m, 3)
        F = self.full(x)
        return np.concatenate([np.einsum("ij,ij->i", V, V) - 1.0,
                               np.einsum("ij,ij->i", F[self.ea], F[self.eb]) - self.cosl])

    def jacobian(self, x):
        m, n = self.m, self.n
        V = x.reshape(m, 3)
        F = self.full(x)
        J = np.zeros((m + n, m, 3))
        J[np.arange(m), np.arange(m)] = 2.0 * V
        # the pinned vertex 0 has no column
        ma, mb = self.ea > 0, self.eb > 0
        J[m + self.ea[ma], self.ea[ma] - 1] = F[self.eb[ma]]
        J[m + self.ea[mb], self.eb[mb] - 1] = F[self.ea[mb]]
        return J.reshape(m + n, 3 * m)

    def constraint_hessian(self, lam):
        m = self.m
        H = np.zeros((m, 3, m, 3))
        eye = np.eye(3)
        for i in range(m):
            H[i, :, i, :] += 2.0 * lam[i] * eye
        for e in range(self.n):
            a, b = self.ea[e], self.eb[e]
            if a > 0 and b > 0:
                H[a - 1, :, b - 1, :] += lam[m + e] * eye
                H[b - 1, :, a - 1, :] += lam[m + e] * eye
        return H.reshape(3 * m, 3 * m)

    def objective_hessian(self, x, step=1e-6):
        k = len(x)
        H = np.zeros((k, k))
        for j in range(k):
            d = np.zeros(k)
            d[j] = step
            H[:, j] = (self.objective(x + d)[1] - self.objective(x - d)[1]) / (2 * step)
        return 0.5 * (H + H.T)

    def slsqp(self, x0):
        res = minimize(self.objective, x0.ravel(), jac=True, method="SLSQP",
                       constraints=[{"type": "eq", "fun": self.constraints, "jac": self.jacobian}],
                       options={"maxiter": 60, "ftol": 1e-8})
        return res.x

    def polish(self, x, iterations=12):
        """Newton steps on the KKT system; lstsq absorbs the residual rotation gauge."""
        k = len(x)
        for _ in range(iterations):
            g = self.objective(x)[1]
            J = self.jacobian(x)
            lam = np.linalg.lstsq(J.T, -g, rcond=None)[0]
            r = np.concatenate([g + J.T @ lam, self.constraints(x)])
            if np.max(np.abs(r)) < 1e-14:
                break
            H = self.objective_hessian(x) + self.constraint_hessian(lam)
            K = np.block([[H, J.T], [J, np.zeros((len(J), len(J)))]])
            step = np.linalg.lstsq(K, -r, rcond=None)[0]
            x = x + step[:k]
        return x

    def length_error(self, x):
        F = self.full(x)
        F = F / np.linalg.norm(F, axis=1, keepdims=True)
        got = np.array([geodesic_distance(F[i], F[(i + 1) % self.n]) for i in range(self.n)])
        return float(np.max(np.abs(got - self.ls)))


def maximize_area(spec, seed=0, starts=32):
    """Largest-area polygon with the given edge lengths, by multi-start SLSQP.

    One vertex is pinned at the north pole to remove most of the rotational
    gauge; the area is a triangle fan from that vertex, which stays continuous
    because no point of a curve shorter than ``2 pi`` reaches its antipode.
    The best start is refined with Newton steps on the optimality conditions.
    """
    if not isinstance(spec, EdgeLengthSpec):
        spec = EdgeLengthSpec(tuple(spec))
    prob = _LengthProblem(spec.lengths, np.array([0.0, 0.0, 1.0]))
    candidates = []
    for k in range(starts):
        rng = np.random.default_rng([seed, k])
        x = prob.slsqp(_random_start(rng, prob.ls, prob.v0))
        if prob.length_error(x) < 1e-5:
            candidates.append((-prob.objective(x)[0], k, x))
    # best area first, ties broken by start index
    candidates.sort(key=lambda c: (-c[0], c[1]))
    for _, _, x in candidates:
        x = prob.polish(x)
        if prob.length_error(x) > 1e-8:
            continue
        try:
            return SphericalPolygon(prob.full(x))
        except ValueError:
            continue
    raise ConvergenceFailure(f"no start met the length constraints in {starts} attempts")


# --- criticality -------------------------------------------------------------

def max_area_for_lengths(lengths):
    return solve_circumscribed(EdgeLengthSpec(tuple(lengths))).area


def area_derivative(P, edge, h=1e-4):
    """d(max area)/d(length of ``edge``), others fixed; Richardson-extrapolated."""
    ls = np.array(P.edge_lengths if isinstance(P, SphericalPolygon) else P, dtype=float)

    def central(step):
        up, dn = ls.copy(), ls.copy()
        up[edge] += step
        dn[edge] -= step
        return (max_area_for_lengths(up) - max_area_for_lengths(dn)) / (2.0 * step)

    d1, d2 = central(h), central(h / 2.0)
    return float((4.0 * d2 - d1) / 3.0)


@dataclass(frozen=True)
class DominationVerdict:
    q_area_leq: bool
    congruent: bool
    area_p: float
    area_q: float
    rotation_residual: float


def rotation_residual(p, q):
    R = best_rotation(p, q)
    return max(geodesic_distance(R @ a, b) for a, b in zip(p, q))


def dominated_area_check(P, Q):
    """Compare ``Q`` against a circumscribed ``P`` whose edges bound Q's edges."""
    cls = classify(P)
    if not (cls.is_proper and cls.cocircular and cls.center_location.kind in ("Inside", "Boundary")):
        raise PreconditionViolated("P must be proper, cocircular, with center inside or on the boundary")
    lp, lq = P.edge_lengths, Q.edge_lengths
    if len(lp) != len(lq):
        raise PreconditionViolated("P and Q have different vertex counts")
    if np.any(lq > lp + 1e-10):
        raise PreconditionViolated("an edge of Q is longer than the matching edge of P")
    ap, aq = abs(signed_area(P)), abs(signed_area(Q))
    resid = rotation_residual(P.vertices, Q.vertices)
    congruent = bool(np.all(np.abs(lp - lq) < 1e-8) and abs(ap - aq) < 1e-8 and resid < 1e-6)
    return DominationVerdict(bool(aq <= ap + 1e-9), congruent, ap, aq, resid)


@dataclass(frozen=True)
class LexellReport:
    ok: bool
    residual: float
    areas_equal: bool
    message: str = ""

    def __bool__(self):
        return self.ok


def lexell_locus_check(base, samples):
    """Do equal-area apexes over ``base`` lie on a circle through the base antipodes?"""
    if not isinstance(base, GeodesicArc):
        base = GeodesicArc(*base)
    a, b = base.a, base.b
    apexes = [np.asarray(s, float) / np.linalg.norm(s) for s in samples]
    if not apexes:
        return LexellReport(True, 0.0, True, "no apexes")
    areas = [triangle_signed_area(a, b, c) for c in apexes]
    if max(areas) - min(areas) > 1e-8:
        return LexellReport(False, float(max(areas) - min(areas)), False,
                            "apexes do not share a common triangle area")
    pts = [-a, -b] + apexes
    if len(pts) <= 3:
        return LexellReport(True, 0.0, True, "three or fewer points are always cocircular")
    # points on the sphere are cocircular iff they are coplanar
    nrm = np.cross(pts[1] - pts[0], pts[2] - pts[0])
    nrm /= np.linalg.norm(nrm)
    resid = max(abs(np.dot(nrm, p - pts[0])) for p in pts)
    return LexellReport(bool(resid < 1e-6), float(resid), True)
