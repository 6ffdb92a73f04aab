"""Exception hierarchy shared by every layer of the package."""


class PinfiError(Exception):
    """Base class for all package errors."""


class InvalidParameter(PinfiError, ValueError):
    def __init__(self, name: str, reason: str):
        self.name = name
        self.reason = reason
        super().__init__(f"{name}: {reason}")


class NonPositiveSize(PinfiError, ValueError):
    pass


class SizeExceedsReserve(PinfiError, ValueError):
    pass


class InvalidPoolState(PinfiError, ValueError):
    pass


class NoArbitrage(PinfiError):
    """The speculator's entry condition does not hold, so no trajectory exists."""


class DomainError(PinfiError, ValueError):
    pass


class InfeasibleBand(PinfiError):
    """The price band between the seller and genuine-buyer thresholds is empty (C <= 1)."""


class InsufficientDepth(PinfiError):
    pass


class InvalidConfig(PinfiError, ValueError):
    pass


class NotTerminated(PinfiError):
    pass


class InvalidGridSpec(PinfiError, ValueError):
    pass
