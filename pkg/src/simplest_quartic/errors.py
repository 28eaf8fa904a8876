"""Exception hierarchy shared by every module of the package."""


class QuarticError(Exception):
    """Base class for all errors raised by simplest_quartic."""


class ZeroInput(QuarticError, ValueError):
    pass


class CapacityExceeded(QuarticError):
    """Input is beyond the configured trial-division capability."""


class ExcludedM(QuarticError, ValueError):
    """Parameter m is outside the family (m <= 0, or m^2 + 16 a perfect square)."""


class NotSquarefree(QuarticError, ValueError):
    """The odd part of m^2 + 16 is divisible by an odd prime square."""


class InternalInconsistency(QuarticError):
    """Two independent computations disagree; never rounded away."""


class MixedFields(QuarticError, ValueError):
    pass


class MixedOrders(QuarticError, ValueError):
    pass


class NonConvergence(QuarticError):
    pass


class NotInOrder(QuarticError, ValueError):
    pass


class NotAbovePrime(QuarticError, ValueError):
    pass


class BadShape(QuarticError, ValueError):
    pass


class UnsupportedIndex(QuarticError, ValueError):
    pass


class VerificationFailed(QuarticError):
    """A claimed prime-ideal factorization did not survive certification.

    ``certificate`` holds the full record, including normal forms, and
    ``reason`` names the first violated condition.
    """

    def __init__(self, reason, certificate=None):
        super().__init__(reason)
        self.reason = reason
        self.certificate = certificate
