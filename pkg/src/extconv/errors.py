"""Exceptions shared across the package."""


class DomainError(ValueError):
    """An operation was called outside its documented domain.

    Raised for dimension/degree/backend mismatches, out-of-range orders,
    duplicate indices and the like: caller errors, never numerical failures.
    """


class LPInternalError(RuntimeError):
    """The simplex reached a state its preconditions rule out."""
