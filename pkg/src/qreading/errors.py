"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NonPhysicalCM(ValueError):
    """A covariance matrix violates the uncertainty principle."""


class OptimizationError(RuntimeError):
    """A scalar search failed to bracket or converge."""


class NoAdvantage(Exception):
    """The information gain never becomes positive inside the search bracket.

    Attributes:
        r0, ns, nb: the parameter point that was searched.
        m_max: upper end of the bracket in the number of signals.
        samples: list of ``(m, log_ratio)`` pairs that were probed, where a
            positive ``log_ratio`` would have certified an advantage.
    """

    def __init__(self, message, *, r0=None, ns=None, nb=None, m_max=None, samples=()):
        super().__init__(message)
        self.r0 = r0
        self.ns = ns
        self.nb = nb
        self.m_max = m_max
        self.samples = list(samples)


class TruncationError(RuntimeError):
    """The truncated Fock space lost more weight than the configured tolerance."""

    def __init__(self, message, *, deficit=None, tol=None, dim=None):
        hint = ""
        if dim is not None:
            hint = f" (increase the cutoff above dim={dim})"
        super().__init__(message + hint)
        self.deficit = deficit
        self.tol = tol
        self.dim = dim


class NumericalError(ArithmeticError):
    """Linear algebra produced values outside their admissible range."""
