"""Exception types shared across the package."""


class WLError(Exception):
    """Base class for all library errors."""


class ParseError(WLError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.message = message
        self.position = position


class PoleProximity(WLError, ArithmeticError):
    """Evaluation requested within the pole guard of a rational function."""


class NonzeroResidue(WLError):
    """A meromorphic 1-form has a residue where an exact primitive was required."""

    def __init__(self, point, value):
        super().__init__(f"nonzero residue {value} at {point}")
        self.point = point
        self.value = value


class AtInfinity(WLError):
    """The null vector represents the projection centre and has no image."""


class OriginSingular(WLError):
    """The involution sends the origin to the point at infinity."""


class DivergentEnd(WLError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateGaussMap(WLError):
    """The curve lies in a complex line, so its Gauss map is constant."""


class QuadratureNonConvergent(WLError):
    pass


class DegenerateMetric(WLError):
    pass


class JetOrderInsufficient(WLError):
    pass


class FlowStepUnstable(WLError):
    pass


class ZeroDual(WLError):
    """h = p = 0, so the dual vector vanishes."""


class RejectionExhausted(WLError):
    pass
