"""Exception hierarchy shared by every module of the toolkit."""


class SpiderwebError(ValueError):
    """Base class; carries an optional machine-readable payload."""

    def __init__(self, message="", **info):
        super().__init__(message)
        self.info = info


# sphere_core
class AntipodalInput(SpiderwebError):
    pass


class DegenerateVertex(SpiderwebError):
    pass


class DegeneratePolygon(SpiderwebError):
    pass


class CollinearPoints(SpiderwebError):
    pass


class HalfwayAntipodal(SpiderwebError):
    pass


class OutsideHemisphere(SpiderwebError):
    pass


# polygon_iso
class Infeasible(SpiderwebError):
    pass


class ModeUnavailable(SpiderwebError):
    pass


class ConvergenceFailure(SpiderwebError):
    pass


class PreconditionViolated(SpiderwebError):
    pass


# polytope
class ParseError(SpiderwebError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, line=line)
        self.line = line


class NonManifold(SpiderwebError):
    pass


class EulerViolation(SpiderwebError):
    pass


class NotInscribed(SpiderwebError):
    def __init__(self, max_residual):
        super().__init__(f"vertices not on a common sphere (max residual {max_residual:.3e})",
                         max_residual=max_residual)
        self.max_residual = max_residual


class CenterOutside(SpiderwebError):
    pass


class P0NotInterior(SpiderwebError):
    pass


class AntipodalEdge(SpiderwebError):
    pass


class NotConvex(SpiderwebError):
    pass


class NonPlanarFace(SpiderwebError):
    pass


class TightnessViolation(SpiderwebError):
    pass


# rigidity_lab
class NotTight(SpiderwebError):
    pass


class AmbiguousOrientation(SpiderwebError):
    pass


class NotThreeConnected(SpiderwebError):
    pass


class StressInfeasible(Infeasible):
    """No strictly positive stress; ``best`` is the least-residual nonnegative one."""

    def __init__(self, residual, best):
        super().__init__(f"no strictly positive equilibrium stress (residual {residual:.3e})",
                         residual=residual)
        self.residual = residual
        self.best = best


class GraphMismatch(SpiderwebError):
    pass


class GuardViolated(SpiderwebError):
    pass
