"""Seeded random inputs shared by the experiment scripts and the test suite."""
import numpy as np

from .sphere_core import TWO_PI, SphericalPolygon, normalize_rows, rotation_about


def edge_spec(rng, n_min=3, n_max=7):
    """Edge lengths of a proper polygon, kept away from the feasibility boundary."""
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        ls = rng.uniform(0.05, 1.0, n)
        ls *= rng.uniform(0.5, TWO_PI - 0.3) / ls.sum()
        if ls.max() < np.pi - 0.05 and ls.max() < ls.sum() - ls.max() - 0.05:
            return ls


def _random_rotation(rng):
    axis = rng.normal(size=3)
    return rotation_about(axis, rng.uniform(0, TWO_PI))


def circle_polygon(r, azimuths, R=None):
    az = np.asarray(azimuths, float)
    v = np.column_stack([np.sin(r) * np.cos(az), np.sin(r) * np.sin(az), np.full(len(az), np.cos(r))])
    return SphericalPolygon(v if R is None else v @ R.T)


def dido_polygon(rng, n_min=3, n_max=7, min_gap=0.1):
    """Cocircular polygon with one edge a diameter of its circle."""
    n = int(rng.integers(n_min, n_max + 1))
    r = rng.uniform(0.2, 1.4)
    while True:
        inner = np.sort(rng.uniform(0, np.pi, n - 2))
        gaps = np.diff(np.concatenate([[0.0], inner, [np.pi]]))
        if gaps.min() > min_gap:
            break
    return circle_polygon(r, np.concatenate([[0.0], inner, [np.pi]]), _random_rotation(rng))


def outside_polygon(rng, n_min=3, n_max=7, min_gap=0.1):
    """Cocircular polygon whose vertices fit in an arc shorter than a semicircle."""
    n = int(rng.integers(n_min, n_max + 1))
    r = rng.uniform(0.2, 1.4)
    span = rng.uniform(0.4, np.pi - 0.2)
    while True:
        inner = np.sort(rng.uniform(0, span, n - 2))
        gaps = np.diff(np.concatenate([[0.0], inner, [span]]))
        if gaps.min() > min_gap * span / np.pi:
            break
    return circle_polygon(r, np.concatenate([[0.0], inner, [span]]), _random_rotation(rng))


def closed_curve(rng, n_min=3, n_max=12):
    """Vertices of a closed geodesic curve shorter than 2 pi.

    Points come from caps of random radius, some wider than a hemisphere, so
    the containment is not trivially visible from the sampling.
    """
    from .sphere_core import curve_arcs, geodesic_distance
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        rho = rng.uniform(0.1, np.pi / 2 + 0.6)
        z = rng.uniform(np.cos(rho), 1.0, n)
        phi = rng.uniform(0, TWO_PI, n)
        s = np.sqrt(1 - z ** 2)
        v = np.column_stack([s * np.cos(phi), s * np.sin(phi), z]) @ _random_rotation(rng).T
        length = sum(geodesic_distance(a, b) for a, b in curve_arcs(v))
        if length < TWO_PI:
            return v


def open_curve(rng, n_min=2, n_max=12):
    """Vertices of an open geodesic path of total length at most pi."""
    n = int(rng.integers(n_min, n_max + 1))
    steps = rng.dirichlet(np.ones(n - 1)) * rng.uniform(0.05, np.pi)
    v = [normalize_rows(rng.normal(size=(1, 3)))[0]]
    for ell in steps:
        d = rng.normal(size=3)
        d -= np.dot(d, v[-1]) * v[-1]
        d /= np.linalg.norm(d)
        v.append(np.cos(ell) * v[-1] + np.sin(ell) * d)
    return np.array(v)


def interior_point(P, rng):
    """Strict convex combination of the polytope's vertices."""
    w = rng.dirichlet(np.ones(len(P.vertices)))
    return w @ P.vertices
