"""Exception hierarchy.

Validation problems derive from :class:`ParameterError` (also a ``ValueError``),
numerical failures from :class:`SolverError`. The CLI maps these to exit codes.
"""


class HftKyleError(Exception):
    pass


class ParameterError(HftKyleError, ValueError):
    pass


class NonPositiveSigma(ParameterError):
    pass


class NegativeSigma(ParameterError):
    pass


class NonFinite(ParameterError):
    pass


class ThetaOutOfDomain(ParameterError):
    pass


class SolverError(HftKyleError, ArithmeticError):
    pass


class RootCountError(SolverError):
    """Raised when the unit interval does not hold exactly one root.

    ``roots`` holds every real root found in the closed interval and
    ``rejected`` the ones discarded as sitting on an endpoint.
    """

    def __init__(self, message, roots=(), rejected=(), coefficients=()):
        super().__init__(message)
        self.roots = list(roots)
        self.rejected = list(rejected)
        self.coefficients = list(coefficients)


class NoRootInUnitInterval(RootCountError):
    pass


class MultipleRootsInUnitInterval(RootCountError):
    pass


class SingularInformation(SolverError):
    pass


class NonConcaveObjective(SolverError):
    pass


class NoConvergence(SolverError):
    def __init__(self, message, trajectory_tail=()):
        super().__init__(message)
        self.trajectory_tail = list(trajectory_tail)


class WelfareMismatch(SolverError):
    pass


class DegenerateRegressor(HftKyleError):
    pass
