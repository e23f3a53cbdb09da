"""Exception hierarchy.

Every validation failure is a ``ValueError`` subclass so callers that only
care about "bad input" can catch that; the CLI maps them to exit code 2.
"""


class SkiRentalError(ValueError):
    pass


class InvalidSpec(SkiRentalError):
    """A prior family specification has out-of-range parameters."""


class ZeroMass(SkiRentalError):
    """All prior weights are zero."""


class OutOfRange(SkiRentalError):
    """A day index lies outside the admissible range."""


class ZeroSurvival(SkiRentalError):
    """Conditioning on survival is impossible: no mass remains at or after t."""


class MismatchedHorizon(SkiRentalError):
    pass


class InvalidPerturbation(SkiRentalError):
    pass


class InvalidParams(SkiRentalError):
    pass


class InvalidLambda(InvalidParams):
    pass


class ZeroPosterior(SkiRentalError):
    """Every horizon received zero posterior weight."""


class DimensionMismatch(SkiRentalError):
    pass


class EmptyBatch(SkiRentalError):
    pass
