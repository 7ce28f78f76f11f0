"""Exception hierarchy. CLI exit codes are keyed off these classes."""


class CubeFormsError(Exception):
    pass


class InvalidInput(CubeFormsError, ValueError):
    pass


class ResourceLimit(CubeFormsError):
    """An exact computation would exceed its configured size limit."""


class EnumerationTooLarge(ResourceLimit):
    pass


class ExactEngineTooLarge(ResourceLimit):
    pass


class ConditioningOnNull(CubeFormsError, ZeroDivisionError):
    pass


class PetalTooSmall(CubeFormsError):
    pass


class DegenerateDistribution(CubeFormsError):
    pass


class RetryExhausted(CubeFormsError):
    pass


class NoNontrivialWitness(InvalidInput):
    pass
