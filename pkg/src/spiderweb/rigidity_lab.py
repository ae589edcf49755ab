"""
Degree, stresses and perturbation experiments for cable frameworks on the sphere.

Every experiment is seeded; restart ``k`` of a run with seed ``s`` draws from
``numpy.random.default_rng([s, k])`` so results do not depend on execution
order.  A ``Rigid`` verdict means no counterexample was found at the given
budget, nothing more.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import networkx as nx
import numpy as np
from scipy.optimize import linprog, nnls

from .errors import (AmbiguousOrientation, GraphMismatch, GuardViolated,
                     NotThreeConnected, NotTight, PreconditionViolated,
                     StressInfeasible)
from .polytope import SphericalRealization, Tightness, tightness
from .sphere_core import (FOUR_PI, best_rotation, containing_hemisphere,
                          geodesic_distance, normalize_rows,
                          triangle_signed_area)

CONGRUENT_TOL = 1e-6
WITNESS_TOL = 1e-4
CABLE_TOL = 1e-9
STRESS_FLOOR = 1e-6


# --- degree ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DegreeCertificate:
    degree: int
    total_signed_area: float
    per_face_hemisphere_centers: list
    per_face_area: list = field(default_factory=list)
    strict: list = field(default_factory=list)

    def to_dict(self):
        return {"degree": self.degree,
                "total_signed_area": self.total_signed_area,
                "per_face_area": [float(a) for a in self.per_face_area],
                "per_face_hemisphere_centers": [[float(x) for x in c]
                                                for c in self.per_face_hemisphere_centers],
                "strict": list(self.strict)}


def fan_area(pts, reference):
    n = len(pts)
    return float(sum(triangle_signed_area(reference, pts[i], pts[(i + 1) % n]) for i in range(n)))


def check_orientation(faces):
    directed = {}
    for f in faces:
        for i in range(len(f)):
            e = (f[i], f[(i + 1) % len(f)])
            directed[e] = directed.get(e, 0) + 1
    for (a, b), k in directed.items():
        if k != 1 or directed.get((b, a), 0) != 1:
            raise AmbiguousOrientation(f"edge ({a}, {b}) is not used once in each direction")


def degree(R):
    """Total signed face area over 4 pi, with one containing hemisphere per face."""
    check_orientation(R.faces)
    if tightness(R).grade is Tightness.NOT_TIGHT:
        raise NotTight("realization violates an edge or perimeter bound")
    centers, areas, strict = [], [], []
    for k in range(len(R.faces)):
        pts = R.face_polygon(k)
        hemi = containing_hemisphere(pts)
        if hemi is None:
            raise NotTight(f"face {k} lies in no closed hemisphere")
        c, is_strict = hemi
        centers.append(c)
        strict.append(is_strict)
        areas.append(fan_area(pts, c))
    total = float(sum(areas))
    return DegreeCertificate(int(round(total / FOUR_PI)), total, centers, areas, strict)


# --- congruence and partial order ---------------------------------------------

@dataclass(frozen=True, eq=False)
class CongruenceResult:
    congruent: bool
    residual: float
    rotation: np.ndarray

    def __bool__(self):
        return self.congruent


def is_congruent_by_rotation(p, q, tol=CONGRUENT_TOL):
    """Best proper rotation taking ``p`` to ``q``; residual is the worst geodesic miss."""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    if p.shape != q.shape:
        return CongruenceResult(False, float("inf"), np.eye(3))
    R = best_rotation(p, q)
    moved = p @ R.T
    resid = max(geodesic_distance(a, b) for a, b in zip(moved, q))
    return CongruenceResult(bool(resid < tol), float(resid), R)


class Order(Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    INCOMPARABLE = "Incomparable"


def partial_order_compare(p, q, tol=1e-10):
    """Edgewise comparison: ``LESS`` means every edge of p is no longer than in q."""
    if p.edges != q.edges or len(p.positions) != len(q.positions):
        raise GraphMismatch("realizations have different graphs")
    for R in (p, q):
        if tightness(R).grade is not Tightness.TIGHT:
            raise PreconditionViolated("both realizations must be tight")
        if degree(R).degree != 1:
            raise PreconditionViolated("both realizations must have degree one")
    d = q.edge_lengths - p.edge_lengths
    if np.all(np.abs(d) <= tol):
        return Order.EQUAL
    if np.all(d >= -tol):
        return Order.LESS
    if np.all(d <= tol):
        return Order.GREATER
    return Order.INCOMPARABLE


# --- equilibrium stress -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StressVector:
    omega: np.ndarray
    edges: tuple
    residual: float

    def to_dict(self):
        return {"edges": [list(e) for e in self.edges],
                "omega": [float(w) for w in self.omega],
                "residual": self.residual}


def tangent_matrix(positions, edges):
    """Columns are edges; rows stack each vertex's force components."""
    p = np.asarray(positions, float)
    A = np.zeros((3 * len(p), len(edges)))
    for k, (i, j) in enumerate(edges):
        for a, b in ((i, j), (j, i)):
            t = p[b] - np.dot(p[a], p[b]) * p[a]
            A[3 * a:3 * a + 3, k] = t / np.linalg.norm(t)
    return A


def vertex_residual(A, omega):
    f = (A @ omega).reshape(-1, 3)
    return float(np.max(np.linalg.norm(f, axis=1)))


def _polish(A, omega):
    # remove the force imbalance by a least-norm correction
    return omega - np.linalg.lstsq(A, A @ omega, rcond=None)[0]


def equilibrium_stress(R, floor=STRESS_FLOOR):
    """Strictly positive tangent-plane equilibrium stress, max-normalized to 1.

    Prefers the projection of the all-ones vector onto the stress space (which
    respects every symmetry of the configuration); falls back to the stress
    maximizing the smallest weight.  Raises :class:`StressInfeasible` carrying
    the least-residual nonnegative stress when no stress clears ``floor``.
    """
    if tightness(R).grade is not Tightness.TIGHT:
        raise NotTight("equilibrium_stress needs a tight realization")
    G = nx.Graph()
    G.add_nodes_from(range(len(R.positions)))
    G.add_edges_from(R.edges)
    if nx.node_connectivity(G) < 3:
        raise NotThreeConnected("graph is not 3-connected")

    A = tangent_matrix(R.positions, R.edges)
    E = A.shape[1]
    _, s, Vt = np.linalg.svd(A)
    rank = int(np.sum(s > 1e-10 * s[0]))
    N = Vt[rank:].T
    if N.shape[1]:
        w = N @ (N.T @ np.ones(E))
        if w.min() > 0 and w.min() / w.max() >= floor:
            w = _polish(A, w / w.max())
            w = w / w.max()
            return StressVector(w, R.edges, vertex_residual(A, w))
        k = N.shape[1]
        # maximize t subject to N y >= t, N y <= 1
        c = np.zeros(k + 1)
        c[-1] = -1.0
        A_ub = np.vstack([np.hstack([-N, np.ones((E, 1))]), np.hstack([N, np.zeros((E, 1))])])
        b_ub = np.concatenate([np.zeros(E), np.ones(E)])
        lp = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * k + [(None, 1.0)],
                     method="highs")
        if lp.status == 0 and -lp.fun >= floor:
            w = _polish(A, N @ lp.x[:k])
            w = w / w.max()
            if w.min() >= floor:
                return StressVector(w, R.edges, vertex_residual(A, w))

    # least-residual nonnegative stress with weights summing to E
    M = np.vstack([A, np.ones((1, E))])
    rhs = np.concatenate([np.zeros(A.shape[0]), [float(E)]])
    w, _ = nnls(M, rhs, maxiter=50 * E)
    w = w / w.max()
    best = StressVector(w, R.edges, vertex_residual(A, w))
    raise StressInfeasible(best.residual, best)


# --- cable systems and perturbation search ------------------------------------

@dataclass(frozen=True, eq=False)
class CableStrutSystem:
    base: SphericalRealization
    cables: tuple  # indices into base.edges
    rest: np.ndarray
    cap: float

    @property
    def cable_pairs(self):
        return np.array([self.base.edges[k] for k in self.cables], dtype=int).reshape(-1, 2)


def default_cap(R):
    """Smallest distance from a face vertex to the rim of the face's hemisphere."""
    margins = []
    for k in range(len(R.faces)):
        pts = R.face_polygon(k)
        hemi = containing_hemisphere(pts)
        if hemi is None:
            return np.pi / 4
        margins.append(np.pi / 2 - max(geodesic_distance(hemi[0], p) for p in pts))
    cap = float(min(margins)) if margins else 0.0
    return cap if cap > 1e-6 else np.pi / 4


def cable_system(R, cables=None, cap=None):
    cables = tuple(range(len(R.edges))) if cables is None else tuple(cables)
    grade = tightness(R).grade
    if grade is Tightness.NOT_TIGHT:
        raise NotTight("base realization must be tight or weakly tight")
    rest = R.edge_lengths[list(cables)]
    if np.any(rest >= np.pi):
        raise NotTight("a cable rest length reaches pi")
    return CableStrutSystem(R, cables, rest, default_cap(R) if cap is None else float(cap))


def _lengths(q, pairs):
    a, b = q[pairs[:, 0]], q[pairs[:, 1]]
    return np.arctan2(np.linalg.norm(np.cross(a, b), axis=1), np.einsum("ij,ij->i", a, b))


def _length_jacobian(q, pairs):
    """d(geodesic length)/dq for each cable, as rows over the 3n coordinates."""
    a, b = q[pairs[:, 0]], q[pairs[:, 1]]
    cosd = np.einsum("ij,ij->i", a, b)[:, None]
    ta = b - cosd * a
    tb = a - cosd * b
    ta /= np.linalg.norm(ta, axis=1, keepdims=True)
    tb /= np.linalg.norm(tb, axis=1, keepdims=True)
    J = np.zeros((len(pairs), len(q), 3))
    rows = np.arange(len(pairs))
    J[rows, pairs[:, 0]] = -ta
    J[rows, pairs[:, 1]] = -tb
    return J.reshape(len(pairs), -1)


def project_to_cables(q, pairs, rest, iterations=60, tol=1e-15):
    """Gauss-Newton projection onto ``length <= rest`` for the violated cables.

    Near a degenerate (prestressed) solution the convergence is linear, so the
    default budget is generous.
    """
    q = normalize_rows(q)
    for _ in range(iterations):
        viol = _lengths(q, pairs) - rest
        act = viol > -tol
        if not np.any(viol > tol):
            break
        J = _length_jacobian(q, pairs[act])
        step = np.linalg.lstsq(J, -viol[act], rcond=None)[0].reshape(q.shape)
        q = normalize_rows(q + step)
    return q


class Outcome(Enum):
    RIGID = "Rigid"
    FLEXIBLE = "Flexible"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class RigidityVerdict:
    outcome: Outcome
    restarts: int
    discarded: int
    max_displacement_found: float
    congruence_residual: float
    terminal_residuals: list
    witness: Optional[np.ndarray] = None
    witness_restart: Optional[int] = None
    note: str = ""
    terminal_configurations: list = field(default_factory=list, repr=False)
    infeasible: int = 0

    def to_dict(self):
        out = {"outcome": self.outcome.value,
               "restarts": self.restarts,
               "discarded": self.discarded,
               "max_displacement_found": self.max_displacement_found,
               "congruence_residual": self.congruence_residual,
               "infeasible": self.infeasible,
               "note": self.note,
               "witness_restart": self.witness_restart,
               "witness": None}
        if self.witness is not None:
            out["witness"] = [[float(x) for x in v] for v in self.witness]
        return out


def _aligned_gap(base, q):
    R = best_rotation(base, q)
    target = base @ R.T
    gaps = _lengths_between(target, q)
    return target, gaps


def _lengths_between(a, b):
    return np.arctan2(np.linalg.norm(np.cross(a, b), axis=1), np.einsum("ij,ij->i", a, b))


def _tangent(q, g):
    return g - np.einsum("ij,ij->i", g, q)[:, None] * q


def _maxmin_center(pts):
    """Unit vector maximizing the smallest dot product with ``pts``.

    It is the direction of the nearest point of the convex hull of ``pts`` to
    the origin, which moves continuously with the points; ``None`` when the
    hull touches the origin (closed-hemisphere case).
    """
    n = len(pts)
    # min |pts^T w| over the simplex, with the sum constraint as a heavy row
    A = np.vstack([pts.T, np.full((1, n), 1e3)])
    b = np.concatenate([np.zeros(3), [1e3]])
    w, _ = nnls(A, b)
    w /= w.sum()
    p = w @ pts
    if np.linalg.norm(p) < 1e-9:
        return None
    return p / np.linalg.norm(p)


def _faces_contained(R, q, prev_centers):
    """Track one hemisphere per face; ``None`` once a face escapes its track."""
    centers = []
    for k, f in enumerate(R.faces):
        pts = q[list(f)]
        c = _maxmin_center(pts)
        if c is None or np.min(pts @ c) <= 0.0:
            # face only fits a closed hemisphere
            if prev_centers is not None and np.min(pts @ prev_centers[k]) >= -CABLE_TOL:
                centers.append(prev_centers[k])
                continue
            hemi = containing_hemisphere(pts)
            if hemi is None:
                return None
            c = hemi[0]
        if prev_centers is not None and np.dot(c, prev_centers[k]) <= 0.0:
            return None
        centers.append(c)
    return centers


def _guard(S, base, q, centers):
    """Next tracked hemisphere centers, or ``None`` if ``q`` leaves the guard."""
    _, gaps = _aligned_gap(base, q)
    if gaps.max() >= S.cap:
        return None
    return _faces_contained(S.base, q, centers)


def _guarded_degree(R, q):
    try:
        return degree(R.with_positions(q)).degree
    except (NotTight, AmbiguousOrientation):
        return None


def rigidity_search(S, restarts=200, seed=0, step_budget=40, step=0.05, slack_weight=0.1,
                    symmetry=None, axis=(0.0, 0.0, 1.0), congruent_tol=CONGRUENT_TOL):
    """Look for a cable-feasible, non-congruent configuration in the base's class.

    Each restart perturbs the base (every vertex moved less than half the
    guard cap), projects onto the cable constraints, then alternates ascent
    steps on the distance from the best-aligned copy of the base (plus a
    small reward for cable slack) with re-projection.  Steps that would leave
    the homotopy guard are halved.  The guard is the cap on aligned vertex
    displacement, face containment in hemispheres whose centers move
    continuously, and an unchanged degree at the end.

    With ``symmetry=k`` the starting perturbations commute with rotation by
    ``2 pi / k`` about ``axis``.
    """
    base = np.asarray(S.base.positions)
    pairs, rest = S.cable_pairs, np.asarray(S.rest)
    base_degree = degree(S.base).degree
    base_centers = _faces_contained(S.base, base, None)
    terminal, configs, discarded, infeasible, max_disp = [], [], 0, 0, 0.0
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        try:
            if symmetry:
                q = symmetric_perturbation(base, rng, 0.5 * S.cap, axis, symmetry)
            else:
                q = _perturb(base, rng, 0.5 * S.cap)
            q = project_to_cables(q, pairs, rest)
            centers = _guard(S, base, q, base_centers)
            if centers is None:
                raise GuardViolated("projected start left the guard")
            h = step
            for _ in range(step_budget):
                target, _ = _aligned_gap(base, q)
                g = _tangent(q, q - target)
                if slack_weight:
                    g = g - slack_weight * _tangent(q, _length_jacobian(q, pairs).sum(axis=0).reshape(q.shape))
                size = np.max(np.linalg.norm(g, axis=1))
                if size < 1e-14:
                    break
                # backtrack until the move stays inside the guard
                while h >= step / 64:
                    trial = project_to_cables(normalize_rows(q + h * S.cap * g / size), pairs, rest)
                    moved = _guard(S, base, trial, centers)
                    if moved is not None:
                        q, centers = trial, moved
                        break
                    h /= 2
                else:
                    break
            q_final = project_to_cables(q, pairs, rest, iterations=400)
            if _guard(S, base, q_final, centers) is not None:
                q = q_final
            _, gaps = _aligned_gap(base, q)
            if _guarded_degree(S.base, q) != base_degree:
                raise GuardViolated("degree changed")
        except GuardViolated:
            discarded += 1
            continue
        feasible = bool(np.all(_lengths(q, pairs) <= rest + CABLE_TOL))
        resid = is_congruent_by_rotation(base, q).residual
        max_disp = max(max_disp, float(gaps.max()))
        if feasible and resid > WITNESS_TOL:
            return RigidityVerdict(Outcome.FLEXIBLE, r + 1, discarded, max_disp, resid,
                                   terminal + [resid], q, r, "non-congruent witness found",
                                   configs + [q], infeasible)
        if not feasible:
            # projection stalled short of the cable set: no evidence either way
            infeasible += 1
            continue
        terminal.append(resid)
        configs.append(q)
    worst = float(max(terminal)) if terminal else float("nan")
    if terminal and worst < congruent_tol and len(terminal) >= infeasible:
        return RigidityVerdict(Outcome.RIGID, restarts, discarded, max_disp, worst, terminal,
                               note="no counterexample found at budget",
                               terminal_configurations=configs, infeasible=infeasible)
    if not terminal:
        note = "no feasible terminal configuration"
    elif worst < congruent_tol:
        note = "most restarts stalled before reaching the cable set"
    else:
        note = "terminal residual in the dead zone"
    return RigidityVerdict(Outcome.INCONCLUSIVE, restarts, discarded, max_disp, worst, terminal,
                           note=note, terminal_configurations=configs, infeasible=infeasible)


def _perturb(base, rng, radius):
    """Move every vertex by less than ``radius`` in a random tangent direction."""
    g = rng.normal(size=base.shape)
    g = _tangent(base, g)
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    ang = rng.uniform(0.0, radius, size=(len(base), 1))
    return np.cos(ang) * base + np.sin(ang) * g


def symmetric_perturbation(base, rng, radius, axis=(0.0, 0.0, 1.0), order=5):
    """Perturbation commuting with rotations by ``2 pi / order`` about ``axis``."""
    from .sphere_core import rotation_about
    q = base.copy()
    rot = rotation_about(axis, 2 * np.pi / order)
    orbits, seen = [], set()
    for i in range(len(base)):
        if i in seen:
            continue
        orbit, x = [i], base[i]
        for _ in range(order - 1):
            x = rot @ x
            j = int(np.argmin(np.linalg.norm(base - x, axis=1)))
            orbit.append(j)
        seen.update(orbit)
        orbits.append(orbit)
    for orbit in orbits:
        d = _perturb(base[orbit[:1]], rng, radius)[0]
        for k, j in enumerate(orbit):
            q[j] = np.linalg.matrix_power(rot, k) @ d
    return q


# --- conjecture harnesses -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class MinimalityReport:
    trials: int
    completed: int
    counterexample_candidates: int
    flagged_reductions: int
    max_residual: float
    max_length_reduction: float
    candidate: Optional[np.ndarray] = None
    reduced_edges: tuple = ()

    @property
    def consistent(self):
        return self.counterexample_candidates == 0

    def to_dict(self):
        return {"trials": self.trials, "completed": self.completed,
                "counterexample_candidates": self.counterexample_candidates,
                "flagged_reductions": self.flagged_reductions,
                "max_residual": self.max_residual,
                "max_length_reduction": self.max_length_reduction,
               "reduced_edges": [list(e) for e in self.reduced_edges],
                "consistent_with_conjecture": self.consistent}


def local_minimality_probe(R, trials=500, seed=0, steps=20, step=0.02, cap=None):
    """Try to shorten edges (never lengthen) without leaving the homotopy class.

    A trial whose end state is non-congruent yet has every edge at its
    original length is a counterexample candidate.  Trials that manage to
    shorten some edge are flagged for review: the base then is not locally
    minimal, so it says nothing about uniqueness.
    """
    S = cable_system(R, cap=cap)
    base = np.asarray(R.positions)
    pairs, rest = S.cable_pairs, S.rest
    base_degree = degree(R).degree
    cands, flagged, completed = 0, 0, 0
    max_res, max_red, first, reduced = 0.0, 0.0, None, set()
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        q = project_to_cables(_perturb(base, rng, 0.25 * S.cap), pairs, rest)
        for _ in range(steps):
            g = -_tangent(q, _length_jacobian(q, pairs).sum(axis=0).reshape(q.shape))
            size = np.max(np.linalg.norm(g, axis=1))
            if size < 1e-14:
                break
            q = project_to_cables(normalize_rows(q + step * S.cap * g / size), pairs, rest)
        q = project_to_cables(q, pairs, rest, iterations=400)
        if _guarded_degree(R, q) != base_degree:
            continue
        _, gaps = _aligned_gap(base, q)
        if gaps.max() >= S.cap:
            continue
        completed += 1
        lengths = _lengths(q, pairs)
        reduction = float(np.max(rest - lengths))
        resid = is_congruent_by_rotation(base, q).residual
        max_res, max_red = max(max_res, resid), max(max_red, reduction)
        if reduction > CABLE_TOL:
            flagged += 1
            reduced.update(tuple(int(i) for i in pairs[k]) for k in np.flatnonzero(rest - lengths > CABLE_TOL))
        elif resid > WITNESS_TOL and np.all(lengths <= rest + CABLE_TOL):
            cands += 1
            first = q if first is None else first
    return MinimalityReport(trials, completed, cands, flagged, max_res, max_red, first,
                            tuple(sorted(reduced)))
