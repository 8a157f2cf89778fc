"""Exception hierarchy for abelprob."""


class AbelProbError(ValueError):
    """Base class for every error raised by the library."""


class InvalidGroup(AbelProbError):
    pass


class InvalidElement(AbelProbError):
    pass


class InvalidArgument(AbelProbError):
    pass


class InvalidHomomorphism(AbelProbError):
    pass


class NotInvariant(AbelProbError):
    """A homomorphism does not map a subgroup onto itself."""


class InvalidDistribution(AbelProbError):
    pass


class EnumerationTooLarge(AbelProbError):
    """An exhaustive enumeration would exceed its configured cap."""


class InvalidParameters(AbelProbError):
    pass


class NotApplicable(AbelProbError):
    """The hypotheses of a construction or check are not met."""


class InvalidInstance(AbelProbError):
    pass
