"""Exception hierarchy.

Every error carries a distinct ``exit_code`` so the command line front end can
map library failures one-to-one onto process exit statuses (0, 1 and 2 are
reserved for pass, check failure and usage error).
"""


class ProjCalcError(ValueError):
    exit_code = 3


class NotSelfAdjoint(ProjCalcError):
    exit_code = 4


class NotProjection(ProjCalcError):
    exit_code = 5


class NotPartialIsometry(ProjCalcError):
    exit_code = 6


class NotIdempotent(ProjCalcError):
    exit_code = 7


class InvalidAngle(ProjCalcError):
    exit_code = 8


class NumericallyDegenerate(ProjCalcError):
    exit_code = 9


class AmbiguousThreshold(ProjCalcError):
    exit_code = 10


class DomainError(ProjCalcError):
    exit_code = 11


class JoinUndefined(ProjCalcError):
    exit_code = 12


class PairTooFar(ProjCalcError):
    exit_code = 13


class CommutatorTooLarge(ProjCalcError):
    exit_code = 14


class Inadmissible(ProjCalcError):
    exit_code = 15


class NotOrthogonal(ProjCalcError):
    exit_code = 16


class NormTooLarge(ProjCalcError):
    exit_code = 17


class AlgebraMismatch(ProjCalcError):
    exit_code = 18


class BadInterval(ProjCalcError):
    exit_code = 19


class GapNotClean(ProjCalcError):
    exit_code = 20


class DegenerateSplit(ProjCalcError):
    exit_code = 21


class Stalled(ProjCalcError):
    """Raised only where a stalled spectrum lift cannot be returned as a flag.

    ``result`` holds the best lift found.
    """

    exit_code = 22

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NotPositiveCase(ProjCalcError):
    exit_code = 23


class NotExcising(ProjCalcError):
    exit_code = 24


class RankUnachievable(ProjCalcError):
    exit_code = 25


class DimensionTooSmall(ProjCalcError):
    exit_code = 26


class BasisNotOrthonormal(ProjCalcError):
    exit_code = 27


class UnknownSuite(ProjCalcError):
    exit_code = 2
