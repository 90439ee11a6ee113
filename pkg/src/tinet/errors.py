"""Exception hierarchy shared by the solver modules."""


class TinetError(Exception):
    """Base class for all errors raised by :mod:`tinet`."""

    code = "error"

    def as_dict(self):
        return {"error": self.code, "message": str(self)}


class SpecFormatError(TinetError, ValueError):
    code = "SpecFormatError"


class SingularCcrMatrix(TinetError, ValueError):
    code = "SingularCcrMatrix"


class NotHurwitz(TinetError, ArithmeticError):
    """Raised when a Lyapunov solve is attempted with a non-Hurwitz matrix."""

    code = "NotHurwitz"

    def __init__(self, max_real, message=None):
        self.max_real = float(max_real)
        super().__init__(message or
                         "matrix is not Hurwitz: max real eigenvalue "
                         "%.3e" % self.max_real)

    def as_dict(self):
        d = super().as_dict()
        d["max_real_eigenvalue"] = self.max_real
        return d


class IllConditioned(TinetError, ArithmeticError):
    code = "IllConditioned"

    def __init__(self, residual, target):
        self.residual = float(residual)
        self.target = float(target)
        super().__init__("Lyapunov residual %.3e exceeds target %.3e"
                         % (self.residual, self.target))

    def as_dict(self):
        d = super().as_dict()
        d.update(residual=self.residual, target=self.target)
        return d


class NotStabilizing(TinetError):
    code = "NotStabilizing"

    def __init__(self, margin, message=None):
        self.margin = float(margin)
        super().__init__(message or
                         "controller is not stabilizing: margin %.6e"
                         % self.margin)

    def as_dict(self):
        d = super().as_dict()
        d["margin"] = self.margin
        return d


class Inconclusive(NotStabilizing):
    """Stability margin within tolerance of zero on the finest grid."""

    code = "Inconclusive"

    def __init__(self, margin):
        super().__init__(margin, "stability margin %.3e is within tolerance "
                                 "of the imaginary axis" % margin)


class NoConvergence(TinetError):
    code = "NoConvergence"


class UnsupportedCoupling(TinetError, NotImplementedError):
    code = "UnsupportedCoupling"


class Stalled(TinetError):
    code = "Stalled"


class StepLeavesStabilizingSet(TinetError):
    code = "StepLeavesStabilizingSet"
