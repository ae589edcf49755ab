"""Spherical polygons, inscribed polytopes and cable frameworks on the unit sphere.

Modules:

- ``sphere_core``: points, arcs, polygons, areas, hemispheres, point location.
- ``polygon_iso``: circumscribed polygons and area maximization for fixed edges.
- ``polytope``: OFF input, inscribed spheres, central projection, face tests.
- ``rigidity_lab``: degree, equilibrium stresses, perturbation searches.
- ``fixtures`` and ``generators``: named examples and seeded random inputs.
"""
from .errors import SpiderwebError
from .sphere_core import SphericalPolygon, signed_area, geodesic_distance
from .polygon_iso import EdgeLengthSpec, classify, maximize_area, solve_circumscribed
from .polytope import (Polytope, SphericalRealization, central_projection,
                       check_tensegrity_hypotheses, parse_off)
from .rigidity_lab import cable_system, degree, equilibrium_stress, rigidity_search

__all__ = [
    "SpiderwebError", "SphericalPolygon", "signed_area", "geodesic_distance",
    "EdgeLengthSpec", "classify", "maximize_area", "solve_circumscribed",
    "Polytope", "SphericalRealization", "central_projection",
    "check_tensegrity_hypotheses", "parse_off",
    "cable_system", "degree", "equilibrium_stress", "rigidity_search",
]
