"""Exception types shared by the gl1harmonic modules."""


class GL1Error(Exception):
    """Base class for all library errors."""

    code = "error"

    def to_json(self):
        return {"error": self.code, "type": type(self).__name__, "message": str(self)}


class PoleAtZero(GL1Error):
    code = "pole-at-zero"


class DivisionByZero(GL1Error, ZeroDivisionError):
    code = "division-by-zero"


class InsufficientPrecision(GL1Error):
    code = "insufficient-precision"


class NotInSchwartzSpace(GL1Error):
    code = "not-in-schwartz-space"


class AbscissaViolation(GL1Error):
    code = "abscissa-violation"


class PoleOnContour(GL1Error):
    code = "pole-on-contour"


class RamifiedPlace(GL1Error):
    code = "ramified-place"


class AssumptionViolated(GL1Error):
    code = "assumption-violated"


class NoConvergence(GL1Error):
    code = "no-convergence"


class Divergent(GL1Error):
    code = "divergent"


class PhiMismatch(GL1Error):
    code = "phi-mismatch"


class NotInFamily(GL1Error):
    """Archimedean function outside the closed integrand family."""

    code = "not-in-family"
