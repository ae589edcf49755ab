"""Command-line front end.

Exit codes: 0 success or certified, 1 negative result, 2 input error,
3 counterexample found.
"""
import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import jsonio
from .errors import (EulerViolation, Infeasible, NonManifold, NonPlanarFace,
                     NotConvex, NotInscribed, ParseError, SpiderwebError,
                     StressInfeasible)
from .fixtures import NAMES, get_fixture
from .polygon_iso import EdgeLengthSpec, area_derivative, classify, maximize_area
from .polytope import (Polytope, SphericalRealization, central_projection,
                       check_tensegrity_hypotheses, emit_off, inscribed_check,
                       parse_off, tightness)
from .rigidity_lab import (Outcome, cable_system, degree, equilibrium_stress,
                           rigidity_search)
from .sphere_core import SphericalPolygon, signed_area

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_FLEX = 0, 1, 2, 3
INPUT_ERRORS = (ParseError, NonManifold, EulerViolation, NotConvex, NonPlanarFace)


class InputError(Exception):
    pass


def parse_angle(token):
    """Decimal radians, or ``pi/k`` read as the exact quotient."""
    t = token.strip().lower()
    m = re.fullmatch(r"pi/(\d+)", t)
    if m:
        return np.pi / int(m.group(1))
    if t == "pi":
        return np.pi
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {token!r}") from None


def parse_point(token):
    try:
        xyz = [float(x) for x in token.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a point: {token!r}") from None
    if len(xyz) != 3:
        raise argparse.ArgumentTypeError("a point needs three comma-separated coordinates")
    return np.array(xyz)


# --- input ---------------------------------------------------------------------

def _fixture(args):
    params = {}
    if args.fixture == "slack_cube":
        params["red_cables"] = not args.no_red_cables
    if args.fixture == "random_inscribed":
        params.update(n=args.n, seed=args.seed)
    return get_fixture(args.fixture, **params)


def _read(source):
    if source in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        try:
            d = json.loads(text)
            return SphericalRealization.from_dict(d)
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"bad realization JSON: {exc}") from None
    return parse_off(text)


def load_polytope(args):
    if args.fixture:
        F = _fixture(args)
        if F.polytope is None:
            raise InputError(f"fixture {args.fixture} is a spherical realization, not a polytope")
        return F.polytope
    obj = _read(args.source)
    if isinstance(obj, SphericalRealization):
        return Polytope.from_faces(obj.positions, obj.faces)
    return obj


def load_realization(args):
    """Realization and displacement cap from a fixture, JSON, or projected OFF."""
    if args.fixture:
        F = _fixture(args)
        return F.realization, F.cap
    obj = _read(args.source)
    if isinstance(obj, SphericalRealization):
        return obj, None
    return central_projection(obj, _cone_point(obj, getattr(args, "cone_point", None))), None


def _cone_point(P, given):
    if given is not None:
        return given
    try:
        return inscribed_check(P).center
    except SpiderwebError:
        # not inscribed: fall back to the vertex centroid
        return P.vertices.mean(axis=0)


def emit(args, payload, off_text=None):
    text = off_text if off_text is not None else jsonio.dumps(payload)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def realization_off(R):
    out = ["OFF", f"{len(R.positions)} {len(R.faces)} {len(R.edges)}"]
    out += [" ".join(format(float(x), ".17g") for x in v) for v in R.positions]
    out += [" ".join(str(i) for i in (len(f),) + tuple(f)) for f in R.faces]
    return "\n".join(out) + "\n"


# --- commands ------------------------------------------------------------------

def cmd_check(args):
    P = load_polytope(args)
    tol = args.tolerance if args.tolerance is not None else 1e-8
    report = check_tensegrity_hypotheses(P, tol)
    faces = []
    if report.inscribed and report.center is not None:
        pts = P.vertices - report.center
        for f in P.faces:
            faces.append(classify(SphericalPolygon(pts[list(f)])).to_dict())
    emit(args, {"command": "check", "certified": report.certified,
                "report": report.to_dict(), "face_classification": faces})
    return EXIT_OK if report.certified else EXIT_NEGATIVE


def cmd_project(args):
    if args.fixture:
        F = _fixture(args)
        R = F.realization
    else:
        obj = _read(args.source)
        if isinstance(obj, SphericalRealization):
            R = obj
        else:
            R = central_projection(obj, _cone_point(obj, args.cone_point))
    report = tightness(R)
    cert = degree(R)
    if args.format == "off":
        emit(args, None, realization_off(R))
    else:
        emit(args, {"command": "project", "realization": R.to_dict(),
                    "tightness": report.to_dict(), "degree": cert.to_dict()})
    return EXIT_OK


def cmd_maximize(args):
    spec = EdgeLengthSpec(tuple(args.lengths))
    P = maximize_area(spec, seed=args.seed)
    table = []
    for i, ell in enumerate(P.edge_lengths):
        try:
            d = area_derivative(P, i)
        except Infeasible:
            d = None
        table.append({"edge": i, "length": float(ell), "d_area_d_length": d})
    emit(args, {"command": "maximize", "seed": args.seed,
                "lengths": [float(x) for x in spec.lengths],
                "polygon": {"vertices": [[float(x) for x in v] for v in P.vertices]},
                "area": signed_area(P),
                "classification": classify(P).to_dict(),
                "derivatives": table})
    return EXIT_OK


def cmd_search(args):
    R, cap = load_realization(args)
    S = cable_system(R, cap=cap)
    kwargs = {}
    if args.tolerance is not None:
        kwargs["congruent_tol"] = args.tolerance
    verdict = rigidity_search(S, restarts=args.restarts, seed=args.seed,
                              step_budget=args.step_budget, symmetry=args.symmetric, **kwargs)
    payload = {"command": "search", "seed": args.seed, "restarts": args.restarts,
               "cap": S.cap, "verdict": verdict.to_dict()}
    emit(args, payload)
    if verdict.outcome is Outcome.FLEXIBLE:
        if args.witness:
            Path(args.witness).write_text(jsonio.dumps(R.with_positions(verdict.witness).to_dict()))
        return EXIT_FLEX
    return EXIT_OK if verdict.outcome is Outcome.RIGID else EXIT_NEGATIVE


def cmd_stress(args):
    R, _ = load_realization(args)
    floor = args.tolerance if args.tolerance is not None else 1e-6
    try:
        w = equilibrium_stress(R, floor=floor)
    except StressInfeasible as exc:
        emit(args, {"command": "stress", "strictly_positive": False,
                    "stress": exc.best.to_dict(), "message": str(exc)})
        return EXIT_NEGATIVE
    emit(args, {"command": "stress", "strictly_positive": True, "stress": w.to_dict()})
    return EXIT_OK


def cmd_fixtures(args):
    if not args.name:
        emit(args, {"fixtures": list(NAMES)})
        return EXIT_OK
    args.fixture = args.name
    F = _fixture(args)
    if args.format == "off":
        if F.polytope is None:
            raise InputError(f"fixture {args.name} has no polytope; use --format json")
        emit(args, None, emit_off(F.polytope))
    else:
        emit(args, {"metadata": F.metadata(), **F.realization.to_dict()})
    return EXIT_OK


# --- parser --------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="spiderweb",
                                description="Spherical polygons, inscribed polytopes and cable frameworks.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, source=True, fmt=False):
        if source:
            sp.add_argument("source", nargs="?", help="OFF or realization JSON file; '-' or omitted reads stdin")
            sp.add_argument("--fixture", choices=NAMES)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--n", type=int, default=10, help="vertex count for random_inscribed")
        sp.add_argument("--no-red-cables", action="store_true", help="slack_cube without its red cables")
        sp.add_argument("--tolerance", type=float)
        sp.add_argument("--output", help="write the report here instead of stdout")
        if fmt:
            sp.add_argument("--format", choices=("json", "off"), default="json")

    sp = sub.add_parser("check", help="test the inscribed-face hypotheses of a polytope")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("project", help="central projection with tightness and degree")
    common(sp, fmt=True)
    sp.add_argument("--cone-point", type=parse_point, help="x,y,z (default: fitted sphere center)")
    sp.set_defaults(func=cmd_project)

    sp = sub.add_parser("maximize", help="largest-area polygon for given edge lengths")
    sp.add_argument("lengths", nargs="+", type=parse_angle)
    common(sp, source=False)
    sp.set_defaults(func=cmd_maximize)

    sp = sub.add_parser("search", help="seeded search for a non-congruent cable-feasible realization")
    common(sp)
    sp.add_argument("--restarts", type=int, default=200)
    sp.add_argument("--step-budget", type=int, default=40)
    sp.add_argument("--symmetric", type=int, default=None, metavar="K",
                    help="perturb with K-fold rotational symmetry about the z axis")
    sp.add_argument("--cone-point", type=parse_point)
    sp.add_argument("--witness", help="write a flexible witness realization here")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("stress", help="strictly positive equilibrium stress")
    common(sp)
    sp.add_argument("--cone-point", type=parse_point)
    sp.set_defaults(func=cmd_stress)

    sp = sub.add_parser("fixtures", help="list fixtures or emit one")
    sp.add_argument("name", nargs="?", choices=NAMES)
    common(sp, source=False, fmt=True)
    sp.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("source", "fixture", "cone_point", "format"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        return args.func(args)
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotInscribed as exc:
        print(f"NotInscribed: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except SpiderwebError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
