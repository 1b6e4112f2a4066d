"""Exception taxonomy.

Two bases matter for the CLI: InputError maps to exit code 2 (the request
itself is malformed), AnalysisError maps to exit code 1 (the request is
well-formed but the analysis refuses or cannot certify).
"""


class DofkitError(Exception):
    pass


class InputError(DofkitError):
    pass


class AnalysisError(DofkitError):
    pass


# -- input/validation -------------------------------------------------------

class NonSquare(InputError):
    pass


class DimMismatch(InputError):
    pass


class RankDeficientDirections(InputError):
    pass


class AlphaOutOfRange(InputError):
    pass


class RatioOutOfRange(InputError):
    pass


class UserCountMismatch(InputError):
    pass


class AmbientDimMismatch(InputError):
    pass


class EmptySet(InputError):
    pass


class TooFewPoints(InputError):
    pass


class OddM(InputError):
    pass


class TooFewUsers(InputError):
    pass


class SingularScaling(InputError):
    pass


# -- analysis refusals ------------------------------------------------------

class OpenSetUnverified(AnalysisError):
    pass


class SupportTooLarge(AnalysisError):
    pass


class SingularBlock(AnalysisError):
    pass


class NotParallel(AnalysisError):
    pass


class NotFullyConnected(AnalysisError):
    pass


class NotStandardForm(AnalysisError):
    pass


class BudgetExceeded(AnalysisError):
    pass


class ResolutionTooCoarse(AnalysisError):
    pass


class ConditionViolated(AnalysisError):
    pass
