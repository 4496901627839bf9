"""Exception taxonomy shared across the package.

Every error raised intentionally by quadmod derives from QuadmodError so
callers (and the CLI) can separate domain failures from genuine bugs.
"""

from __future__ import annotations


class QuadmodError(Exception):
    """Base class for all quadmod domain errors."""


class DegenerateFixedPoints(QuadmodError):
    """A multiplier equals 1, so the requested fixed point merges with another."""


class InvalidForm(QuadmodError):
    """Map coefficients do not define a degree-2 rational map (e.g. lambda1*lambda2 = 1)."""


class InconsistentTriple(QuadmodError):
    """An eigenvalue triple violates the product-sum identity sigma3 = sigma1 - 2."""


class PreconditionFailed(QuadmodError):
    """An escape certificate was refused; the caller should fall back to iteration."""


class ZeroMultiplier(QuadmodError):
    """A twist plan needs log(multiplier), but a multiplier is zero."""


class NotInB2(QuadmodError):
    """Inverse twist target must satisfy Re(lambda) > 1."""


class UnsupportedForm(QuadmodError):
    """The rasterizer supports two-attracting-basin forms and the parabolic normal form only."""


class DegenerateCorrespondence(QuadmodError):
    """Three-point Moebius construction received a repeated point."""


class AmbiguousNearBoundary(QuadmodError):
    """A region decision depended on a quantity within eps of its threshold.

    Carries the tentative label and the near-threshold quantities so the
    caller can report rather than guess.
    """

    def __init__(self, message: str, *, tag: str | None = None, near: tuple[str, ...] = ()):
        super().__init__(message)
        self.tag = tag
        self.near = near
