"""Exception types shared across the package.

Input problems derive from :class:`InputError` (a ``ValueError``), so callers
that do not care about the fine-grained category can catch either. The CLI
maps ``InputError`` to exit code 2 and ``ConvergenceError`` to exit code 3.
"""

from __future__ import annotations


class TTCError(Exception):
    """Base class for all package-specific errors."""


class InputError(TTCError, ValueError):
    """Invalid user-supplied data (files, profiles, configuration)."""


class EmptyInputError(InputError):
    """A preference profile or batch with no rows."""


class NonSquareError(InputError):
    """Row count and row length disagree: the market must be square."""


class NotPermutationError(InputError):
    """A ranking (or endowment) row is not a permutation of all objects."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


class OutOfRangeError(InputError):
    """An agent or object identifier outside 0..n-1."""


class NoActiveObjectsError(TTCError):
    """An agent was asked to choose from an empty set of objects."""


class ConvergenceError(TTCError):
    """Power iteration did not converge within the iteration budget."""

    def __init__(self, max_iter: int, last_delta: float):
        self.max_iter = max_iter
        self.last_delta = last_delta
        super().__init__(
            f"no convergence after {max_iter} iterations (last delta {last_delta:.3e}); "
            "retry with a larger --max-iter"
        )


class TooLargeError(TTCError):
    """Market too large for an exhaustive (factorial) check."""

    def __init__(self, n: int, max_n: int):
        self.n = n
        self.max_n = max_n
        super().__init__(f"n={n} exceeds the exhaustive-search bound n<={max_n}")
