"""Orbit dynamics on the sphere: evaluation, critical points, escape certificates.

The parabolic normal form z -> z + offset + 1/z (eigenvalue 1 at infinity)
admits a cheap escape proof. Writing t(z) = Re(z/offset):

  general certificate:  if offset != 0 and t(z) > 2/|offset|^2, then
      |1/(offset*z)| <= 1/(|offset| |z|) < 1/2   (since |z| >= |offset| t(z) > 2/|offset|)
      and t(f(z)) = t(z) + 1 + Re(1/(offset*z)) > t(z) + 1/2,
  so the half-plane region is forward invariant, t increases by more than 1/2
  per step, |z_n| >= |offset| t(z_n) -> infinity, and the orbit converges to
  the parabolic point at infinity.

  radius-3 certificate: if |offset| > 3, |z| > 1 and t(z) > 0, then
      t(f(z)) - t(z) = 1 + Re(1/(offset*z)) > 1 - 1/3 = 2/3  and
      |f(z)| > 2|offset|/3 > 2,
  so the region {|z| > 1, t > 0} is forward invariant and one step already
  lands in the general certificate's half plane (2/|offset|^2 < 2/9 < 2/3).

Certificates are mathematical proofs up to float rounding slack; orbit_fate
uses them to promote an orbit to a certified escape. Attraction to a point or
short cycle is detected numerically and gated on the measured multiplier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import InvalidForm, PreconditionFailed
from .moduli import (
    MapForm,
    PerOneForm,
    _eval_quad,
    hom_pair,
    local_derivative,
    wronskian,
)
from .sphere import PointLike, SpherePoint, as_sphere

__all__ = [
    "AttractedToPoint",
    "AttractedToCycle",
    "EscapesParabolic",
    "HitFixedPointExactly",
    "Undetermined",
    "Fate",
    "CriticalData",
    "EscapeCertificate",
    "evaluate",
    "critical_points",
    "certified_escape_paper",
    "certified_escape_general",
    "orbit_fate",
    "SpherePoint",
    "chordal",
]

# Attraction is only declared when the measured cycle multiplier clears this
# gate; it keeps slow parabolic drift from masquerading as convergence.
MULTIPLIER_GATE = 1.0 - 1e-6
CYCLE_WINDOW = 16
DEFAULT_BUDGET = 100_000
DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class AttractedToPoint:
    point: SpherePoint
    multiplier: complex
    steps: int


@dataclass(frozen=True)
class AttractedToCycle:
    period: int
    multiplier: complex
    steps: int


@dataclass(frozen=True)
class EscapesParabolic:
    certified: bool
    steps: int


@dataclass(frozen=True)
class HitFixedPointExactly:
    point: SpherePoint
    steps: int


@dataclass(frozen=True)
class Undetermined:
    steps: int


Fate = Union[AttractedToPoint, AttractedToCycle, EscapesParabolic, HitFixedPointExactly, Undetermined]


@dataclass(frozen=True)
class CriticalData:
    points: tuple[SpherePoint, SpherePoint]
    values: tuple[SpherePoint, SpherePoint]


@dataclass(frozen=True)
class EscapeCertificate:
    """Record of a satisfied escape precondition for z -> z + offset + 1/z."""

    kind: str  # "halfplane" or "radius3"
    offset: complex
    start: complex
    re_over_offset: float  # Re(start/offset) at issue time
    threshold: float  # the bound re_over_offset had to exceed
    min_gain: float  # proven per-step increase of Re(z/offset) inside the region


def evaluate(form: MapForm, point: PointLike) -> SpherePoint:
    """Apply the map in homogeneous coordinates; total on the sphere."""
    p, q = hom_pair(form)
    s = as_sphere(point)
    u = _eval_quad(p, s.u, s.v)
    v = _eval_quad(q, s.u, s.v)
    if u == 0 and v == 0:
        raise InvalidForm("form is degenerate at the requested point")
    return SpherePoint(u, v)


def _point_key(p: SpherePoint) -> tuple[float, float, float, float]:
    return (p.u.real, p.u.imag, p.v.real, p.v.imag)


def critical_points(form: MapForm) -> CriticalData:
    """The two critical points (roots of the Wronskian) and their images."""
    a, b, c = wronskian(form)
    if a == 0 and b == 0 and c == 0:
        raise InvalidForm("Wronskian vanishes identically; not a degree-2 map")
    import cmath

    disc = b * b - 4.0 * a * c
    s = cmath.sqrt(disc)
    cand1 = -(b + s) / 2.0
    cand2 = -(b - s) / 2.0
    qq = cand1 if abs(cand1) >= abs(cand2) else cand2
    if qq == 0:
        # b = 0 and a*c = 0: roots are {0, infinity}
        if a == 0 and c == 0:
            raise InvalidForm("degenerate critical locus")
        pts = [SpherePoint.zero(), SpherePoint.infinity()]
    else:
        pts = [SpherePoint(qq, a), SpherePoint(c, qq)]
    pts.sort(key=_point_key)
    p1, p2 = pts
    return CriticalData((p1, p2), (evaluate(form, p1), evaluate(form, p2)))


def certified_escape_general(offset: complex, z: complex) -> EscapeCertificate:
    """Certificate that the orbit of z under w -> w + offset + 1/w escapes.

    Precondition: offset != 0 and Re(z/offset) > 2/|offset|^2. See the module
    docstring for the invariance proof. Raises PreconditionFailed otherwise.
    """
    c = complex(offset)
    if c == 0:
        raise PreconditionFailed("offset must be nonzero")
    zz = complex(z)
    if not (math.isfinite(zz.real) and math.isfinite(zz.imag)):
        raise PreconditionFailed("start point must be finite")
    threshold = 2.0 / (c.real * c.real + c.imag * c.imag)
    re_over = (zz / c).real
    if not re_over > threshold:
        raise PreconditionFailed(
            f"Re(z/offset) = {re_over:.6g} is not above the bound {threshold:.6g}"
        )
    return EscapeCertificate(
        kind="halfplane",
        offset=c,
        start=zz,
        re_over_offset=re_over,
        threshold=threshold,
        min_gain=0.5,
    )


def certified_escape_paper(offset: complex, z: complex) -> EscapeCertificate:
    """Escape certificate valid once |offset| > 3: region |z| > 1, Re(z/offset) > 0."""
    c = complex(offset)
    zz = complex(z)
    if not abs(c) > 3.0:
        raise PreconditionFailed(f"|offset| = {abs(c):.6g} must exceed 3")
    if not (math.isfinite(zz.real) and math.isfinite(zz.imag)):
        raise PreconditionFailed("start point must be finite")
    if not abs(zz) > 1.0:
        raise PreconditionFailed(f"|z| = {abs(zz):.6g} must exceed 1")
    re_over = (zz / c).real
    if not re_over > 0.0:
        raise PreconditionFailed(f"Re(z/offset) = {re_over:.6g} must be positive")
    return EscapeCertificate(
        kind="radius3",
        offset=c,
        start=zz,
        re_over_offset=re_over,
        threshold=0.0,
        min_gain=2.0 / 3.0,
    )


def _general_region_ok(c: complex, threshold: float, p: SpherePoint) -> bool:
    if p.is_infinity:
        return False
    z = p.to_complex()
    return (z / c).real > threshold


def _cycle_multiplier(form: MapForm, window: list[SpherePoint], closing: SpherePoint) -> complex:
    """Product of chart-local derivatives along window -> closing (a near-cycle)."""
    mult = complex(1.0)
    pts = window + [closing]
    for i in range(len(window)):
        mult *= local_derivative(form, pts[i], pts[i + 1])
    return mult


def _settle(form: MapForm, p: SpherePoint, rounds: int = 256) -> SpherePoint:
    """Iterate a point already inside an attracting basin until it stops moving.

    Near an attracting fixed point the float iteration contracts onto an exact
    fixed float (often the true point: 0 or infinity for superattracting
    cases). Bounded so a slowly contracting orbit still returns promptly.
    """
    for _ in range(rounds):
        nxt = evaluate(form, p)
        if nxt == p:
            return p
        p = nxt
    return p


def orbit_fate(
    form: MapForm,
    start: PointLike,
    budget: int = DEFAULT_BUDGET,
    tol: float = DEFAULT_TOL,
) -> Fate:
    """Iterate and classify the orbit of `start` under `form`.

    Detection rules, applied in order after each step:
      1. parabolic escape: for PerOneForm with nonzero offset, the general
         escape certificate promotes the fate to EscapesParabolic(certified).
      2. attraction: the smallest period p <= 16 whose orbit point from p
         steps back is within tol (chordal) of the new point, provided the
         measured cycle multiplier has modulus below 1 - 1e-6.
      3. exact landing: new point == previous point in canonical coordinates
         (only reachable for non-attracting fixed points after rule 2).

    Anything still undecided at the budget is Undetermined(budget). The walk
    is deterministic: identical inputs give identical fates.
    """
    z = as_sphere(start)
    is_parabolic_form = isinstance(form, PerOneForm) and complex(form.offset) != 0
    if is_parabolic_form:
        c = complex(form.offset)
        threshold = 2.0 / (c.real * c.real + c.imag * c.imag)
        if _general_region_ok(c, threshold, z):
            return EscapesParabolic(certified=True, steps=0)

    hist: list[SpherePoint] = [z]
    norms: list[float] = [math.hypot(abs(z.u), abs(z.v))]
    for step in range(1, budget + 1):
        znext = evaluate(form, z)
        if is_parabolic_form and _general_region_ok(c, threshold, znext):
            return EscapesParabolic(certified=True, steps=step)
        nnext = math.hypot(abs(znext.u), abs(znext.v))
        pmax = min(len(hist), CYCLE_WINDOW)
        for p in range(1, pmax + 1):
            prev = hist[-p]
            cross = abs(znext.u * prev.v - prev.u * znext.v)
            if cross < tol * nnext * norms[-p]:
                window = hist[-p:]
                mult = _cycle_multiplier(form, window, znext)
                if abs(mult) < MULTIPLIER_GATE:
                    if p == 1:
                        return AttractedToPoint(_settle(form, znext), mult, step)
                    return AttractedToCycle(p, mult, step)
                break  # near-miss without attraction (parabolic drift): keep iterating
        if znext == z:
            return HitFixedPointExactly(znext, step)
        hist.append(znext)
        norms.append(nnext)
        if len(hist) > CYCLE_WINDOW + 1:
            del hist[0]
            del norms[0]
        z = znext
    return Undetermined(budget)
