"""Exceptions and sentinel results shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class CoarseEndsError(Exception):
    """Base class for errors raised by this package."""


class InvalidRadii(CoarseEndsError):
    """Raised when a radius schedule is empty, non-positive or not increasing."""


class PointOutsideWindow(CoarseEndsError):
    """Raised when an element is not present in the finite window in use."""


class NotUltrametric(CoarseEndsError):
    """Raised when a construction requires an ultrametric window and the
    exhaustive isosceles check finds a violating triple."""

    def __init__(self, triple, values):
        self.triple = triple
        self.values = values
        a, b, c = triple
        super().__init__(
            f"triple ({a!r}, {b!r}, {c!r}) violates the strong triangle "
            f"inequality: d={values}"
        )


class PreconditionViolated(CoarseEndsError):
    """Raised when a documented precondition of an operation fails
    (for example a non-nested scale chain, or weights out of order)."""


class CertificationFailed(CoarseEndsError):
    """Raised when a count is requested for a set family that did not pass
    its required certification step."""


class EmptyAlgebra(CoarseEndsError):
    """Raised when no candidate set survives filtering, so the generated
    algebra is trivial and has no unbounded atoms to count."""


@dataclass(frozen=True)
class Exceeds:
    """Sentinel verdict: the true value is larger than ``cap``.

    Returned (not raised) by norm and distance computations that were cut
    off by a search budget, so callers can treat "too far to measure" as a
    normal outcome.
    """

    cap: int

    def __bool__(self) -> bool:  # an exceeded measurement is never "small"
        return False


class BallTooLarge(CoarseEndsError):
    """Raised when enumerating a ball would exceed the element budget."""

    def __init__(self, radius_reached: int, cap: int):
        self.radius_reached = radius_reached
        self.cap = cap
        super().__init__(
            f"ball enumeration exceeded {cap} elements "
            f"(completed radius {radius_reached})"
        )
