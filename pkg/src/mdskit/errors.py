"""Exception hierarchy shared by every module."""


class MdsError(Exception):
    """Base class for domain errors (CLI maps these to exit code 1)."""


class ParamsError(MdsError, ValueError):
    pass


class KmerError(MdsError, ValueError):
    pass


class NotDecycling(MdsError):
    def __init__(self, message="a cycle survives", cycle=None):
        super().__init__(message)
        self.cycle = cycle


class InvalidMove(MdsError):
    pass


class InstanceTooLarge(MdsError):
    pass


class ConstructionInvalid(MdsError):
    pass


class SequenceTooShort(MdsError, ValueError):
    pass


class MaxTriesExceeded(ConstructionInvalid):
    """Rejection sampling gave up before finding a decycling set."""
