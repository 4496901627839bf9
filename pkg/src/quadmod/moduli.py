"""Fixed-point eigenvalue algebra for quadratic rational maps.

A quadratic rational map has three fixed points counted with multiplicity;
their eigenvalues (multipliers) (lambda1, lambda2, lambda3) obey one relation:
whenever no eigenvalue equals 1,

    1/(1 - lambda1) + 1/(1 - lambda2) + 1/(1 - lambda3) = 1,

equivalently, after clearing denominators, sigma3 = sigma1 - 2 where sigma_k
are the elementary symmetric functions. The unordered triple is therefore
pinned down by (sigma1, sigma2), which serve as global coordinates on the
moduli space of quadratic maps up to conjugacy.

Normal forms used throughout the package:

  * LambdaForm(l1, l2):  z -> (l1*z + z^2) / (l2*z + 1), fixing 0 with
    eigenvalue l1 and infinity with eigenvalue l2; the third fixed point is
    (1 - l1)/(1 - l2). Requires l1*l2 != 1 (else the map degenerates).
  * PerOneForm(offset):  z -> z + offset + 1/z, the normal form of the maps
    with a parabolic fixed point of eigenvalue 1 at infinity.
  * Conjugated(base, mobius): mobius . base . mobius^{-1}.

Eigenvalues are always computed by differentiating the map in a local chart
at the fixed point (the w = 1/z chart near infinity); closed-form multiplier
expressions are used only as test oracles.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .errors import (
    DegenerateCorrespondence,
    DegenerateFixedPoints,
    InconsistentTriple,
    InvalidForm,
)
from .sphere import PointLike, SpherePoint, as_sphere, chordal

# Tolerance for "these coefficients degenerate the map" checks. Kept tiny:
# it only has to absorb float dirt in products like 0.9 * (1/0.9).
_DEGENERACY_TOL = 1e-14

# Relative gate on the sigma identity before a triple is accepted.
_SIGMA_GATE = 1e-6


@dataclass(frozen=True)
class EigenvalueTriple:
    """Unordered eigenvalue triple of the three fixed points (with multiplicity)."""

    lambda1: complex
    lambda2: complex
    lambda3: complex

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.lambda1, self.lambda2, self.lambda3)


@dataclass(frozen=True)
class ModuliPoint:
    """Coordinates (sigma1, sigma2) of a conjugacy class; sigma3 is sigma1 - 2."""

    sigma1: complex
    sigma2: complex


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a*z + b) / (c*z + d) acting on homogeneous coordinates."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        det = self.a * self.d - self.b * self.c
        scale = abs(self.a * self.d) + abs(self.b * self.c)
        if abs(det) <= _DEGENERACY_TOL * (1.0 + scale):
            raise InvalidForm("Moebius map is singular (ad - bc = 0)")

    def __call__(self, point: PointLike) -> SpherePoint:
        p = as_sphere(point)
        return SpherePoint(self.a * p.u + self.b * p.v, self.c * p.u + self.d * p.v)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other (matrix product self @ other)."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    @classmethod
    def taking_to_zero_one_inf(cls, p1: PointLike, p2: PointLike, p3: PointLike) -> "MobiusMap":
        """The unique map with p1 -> 0, p2 -> 1, p3 -> infinity."""
        s1, s2, s3 = as_sphere(p1), as_sphere(p2), as_sphere(p3)
        for x, y in ((s1, s2), (s1, s3), (s2, s3)):
            if chordal(x, y) <= _DEGENERACY_TOL:
                raise DegenerateCorrespondence(f"repeated point in triple: {x} ~ {y}")
        # Rows are linear forms vanishing at p1 and p3, scaled so p2 -> [1 : 1].
        l1_at_p2 = s1.v * s2.u - s1.u * s2.v
        l3_at_p2 = s3.v * s2.u - s3.u * s2.v
        return cls(
            l3_at_p2 * s1.v,
            -l3_at_p2 * s1.u,
            l1_at_p2 * s3.v,
            -l1_at_p2 * s3.u,
        )

    @classmethod
    def taking(
        cls,
        source: tuple[PointLike, PointLike, PointLike],
        target: tuple[PointLike, PointLike, PointLike],
    ) -> "MobiusMap":
        """The unique map sending source[k] -> target[k] for k = 0, 1, 2."""
        return cls.taking_to_zero_one_inf(*target).inverse().compose(
            cls.taking_to_zero_one_inf(*source)
        )


@dataclass(frozen=True)
class LambdaForm:
    """z -> (lambda1*z + z^2) / (lambda2*z + 1); fixes 0 and infinity."""

    lambda1: complex
    lambda2: complex

    def __post_init__(self) -> None:
        prod = complex(self.lambda1) * complex(self.lambda2)
        if abs(prod - 1.0) <= _DEGENERACY_TOL * (1.0 + abs(prod)):
            raise InvalidForm("lambda1 * lambda2 = 1 degenerates the map to degree 1")


@dataclass(frozen=True)
class PerOneForm:
    """z -> z + offset + 1/z; parabolic fixed point of eigenvalue 1 at infinity."""

    offset: complex


@dataclass(frozen=True)
class Conjugated:
    """mobius . base . mobius^{-1}."""

    base: "MapForm"
    mobius: MobiusMap


MapForm = Union[LambdaForm, PerOneForm, Conjugated]

# --- homogeneous representation ---------------------------------------------
#
# Every supported form is [u : v] -> [P(u, v) : Q(u, v)] for homogeneous
# quadratics P, Q with no common root. Coefficients are stored as
# (c_u2, c_uv, c_v2). All evaluation, differentiation, and critical point
# logic downstream works off this representation, so infinity needs no
# special-casing anywhere.

_Quad = tuple[complex, complex, complex]
_Pair = tuple[_Quad, _Quad]


def _subst(poly: _Quad, alpha: complex, beta: complex, gamma: complex, delta: complex) -> _Quad:
    """Coefficients of poly(alpha*u + beta*v, gamma*u + delta*v)."""
    c20, c11, c02 = poly
    return (
        c20 * alpha * alpha + c11 * alpha * gamma + c02 * gamma * gamma,
        2 * c20 * alpha * beta + c11 * (alpha * delta + beta * gamma) + 2 * c02 * gamma * delta,
        c20 * beta * beta + c11 * beta * delta + c02 * delta * delta,
    )


@lru_cache(maxsize=256)
def hom_pair(form: MapForm) -> _Pair:
    if isinstance(form, LambdaForm):
        l1 = complex(form.lambda1)
        l2 = complex(form.lambda2)
        return ((1.0, l1, 0.0), (0.0, l2, 1.0))
    if isinstance(form, PerOneForm):
        c = complex(form.offset)
        return ((1.0, c, 1.0), (0.0, 1.0, 0.0))
    if isinstance(form, Conjugated):
        p, q = hom_pair(form.base)
        m = form.mobius
        # substitute the inverse of m, then post-compose with m
        ps = _subst(p, m.d, -m.b, -m.c, m.a)
        qs = _subst(q, m.d, -m.b, -m.c, m.a)
        return (
            tuple(m.a * x + m.b * y for x, y in zip(ps, qs)),  # type: ignore[return-value]
            tuple(m.c * x + m.d * y for x, y in zip(ps, qs)),
        )
    raise InvalidForm(f"unknown map form: {form!r}")


def _eval_quad(poly: _Quad, u: complex, v: complex) -> complex:
    c20, c11, c02 = poly
    return c20 * u * u + c11 * u * v + c02 * v * v


@lru_cache(maxsize=256)
def wronskian(form: MapForm) -> _Quad:
    """P_u Q_v - P_v Q_u: the homogeneous quadratic whose roots are the critical points."""
    (p20, p11, p02), (q20, q11, q02) = hom_pair(form)
    return (
        2 * (p20 * q11 - p11 * q20),
        4 * (p20 * q02 - p02 * q20),
        2 * (p11 * q02 - p02 * q11),
    )


def resultant(form: MapForm) -> complex:
    """Resultant of P and Q; zero iff the map drops below degree 2."""
    (p20, p11, p02), (q20, q11, q02) = hom_pair(form)
    return (p20 * q02 - p02 * q20) ** 2 - (p20 * q11 - p11 * q20) * (p11 * q02 - p02 * q11)


def local_derivative(form: MapForm, at: SpherePoint, towards: SpherePoint) -> complex:
    """Derivative of chart_out . f . chart_in^{-1} at `at`, image chart chosen by `towards`.

    Charts are z near finite points and w = 1/z near infinity, picked by the
    canonical representation. Both reduce to one formula: with W the
    Wronskian, the derivative is +-W(x) / (2 * D(x)^2) where D is Q for a
    z-chart image and P for a w-chart image, and the sign flips when the
    source and image charts differ. At a fixed point this is the eigenvalue.
    """
    p, q = hom_pair(form)
    w = wronskian(form)
    x = (at.u, at.v)
    wx = _eval_quad(w, *x)
    if towards.far_chart:
        denom = _eval_quad(p, *x)
    else:
        denom = _eval_quad(q, *x)
    value = wx / (2.0 * denom * denom)
    if at.far_chart != towards.far_chart:
        return -value
    return value


@dataclass(frozen=True)
class FixedPoint:
    point: SpherePoint
    eigenvalue: complex
    multiplicity: int


# --- operations --------------------------------------------------------------


def lambda3_from_eq1(lambda1: complex, lambda2: complex) -> complex:
    """Third eigenvalue from the fixed-point relation sum 1/(1 - lambda_i) = 1.

    Requires lambda1 != 1 and lambda2 != 1 (no parabolic merge) and
    lambda1*lambda2 != 1 (the third fixed point stays finite in eigenvalue).
    """
    l1 = complex(lambda1)
    l2 = complex(lambda2)
    if abs(l1 - 1.0) <= _DEGENERACY_TOL or abs(l2 - 1.0) <= _DEGENERACY_TOL:
        raise DegenerateFixedPoints("an eigenvalue equals 1; fixed points merge")
    prod = l1 * l2
    if abs(prod - 1.0) <= _DEGENERACY_TOL * (1.0 + abs(prod)):
        raise InvalidForm("lambda1 * lambda2 = 1 has no associated quadratic class")
    s = 1.0 - 1.0 / (1.0 - l1) - 1.0 / (1.0 - l2)
    if s == 0:
        raise InvalidForm("reciprocal sum degenerates; inputs are numerically dependent")
    return 1.0 - 1.0 / s


def fixed_points_and_multipliers(form: MapForm) -> tuple[FixedPoint, ...]:
    """Fixed points with chart-computed eigenvalues and multiplicities (total 3)."""
    if isinstance(form, LambdaForm):
        l1 = complex(form.lambda1)
        l2 = complex(form.lambda2)
        zero = SpherePoint.zero()
        inf = SpherePoint.infinity()
        if l1 == 1.0:
            # third fixed point merges with 0: parabolic double point
            return (
                FixedPoint(zero, local_derivative(form, zero, zero), 2),
                FixedPoint(inf, local_derivative(form, inf, inf), 1),
            )
        if l2 == 1.0:
            return (
                FixedPoint(zero, local_derivative(form, zero, zero), 1),
                FixedPoint(inf, local_derivative(form, inf, inf), 2),
            )
        z3 = SpherePoint(1.0 - l1, 1.0 - l2)
        return (
            FixedPoint(zero, local_derivative(form, zero, zero), 1),
            FixedPoint(inf, local_derivative(form, inf, inf), 1),
            FixedPoint(z3, local_derivative(form, z3, z3), 1),
        )
    if isinstance(form, PerOneForm):
        c = complex(form.offset)
        inf = SpherePoint.infinity()
        if c == 0:
            return (FixedPoint(inf, local_derivative(form, inf, inf), 3),)
        zf = SpherePoint(complex(-1.0), c)
        return (
            FixedPoint(inf, local_derivative(form, inf, inf), 2),
            FixedPoint(zf, local_derivative(form, zf, zf), 1),
        )
    if isinstance(form, Conjugated):
        out = []
        for fp in fixed_points_and_multipliers(form.base):
            moved = form.mobius(fp.point)
            out.append(FixedPoint(moved, local_derivative(form, moved, moved), fp.multiplicity))
        return tuple(out)
    raise InvalidForm(f"unknown map form: {form!r}")


def eigenvalue_triple_of(form: MapForm) -> EigenvalueTriple:
    """The eigenvalue triple of a form, repeating multiple fixed points."""
    values: list[complex] = []
    for fp in fixed_points_and_multipliers(form):
        values.extend([complex(fp.eigenvalue)] * fp.multiplicity)
    if len(values) != 3:
        raise DegenerateFixedPoints("fixed point multiplicities do not sum to 3")
    return EigenvalueTriple(*values)


def sigma_coordinates(triple: EigenvalueTriple) -> ModuliPoint:
    """(sigma1, sigma2) of the triple; rejects triples violating sigma3 = sigma1 - 2."""
    l1, l2, l3 = triple.as_tuple()
    s1 = l1 + l2 + l3
    s2 = l1 * l2 + l1 * l3 + l2 * l3
    s3 = l1 * l2 * l3
    if abs(s3 - (s1 - 2.0)) > _SIGMA_GATE * (1.0 + abs(s1)):
        raise InconsistentTriple(
            f"sigma3 - (sigma1 - 2) = {s3 - (s1 - 2.0):.3e}; not an eigenvalue triple"
        )
    return ModuliPoint(s1, s2)


def _principal_cbrt(z: complex) -> complex:
    if z == 0:
        return complex(0.0)
    r, phi = cmath.polar(z)
    return cmath.rect(r ** (1.0 / 3.0), phi / 3.0)


_OMEGA = complex(-0.5, 0.8660254037844386)  # primitive cube root of unity


def eigenvalues_from_sigma(point: ModuliPoint) -> EigenvalueTriple:
    """Roots of t^3 - sigma1 t^2 + sigma2 t - (sigma1 - 2), sorted by (Re, Im).

    Cardano with a stable cube-root branch choice, then one Newton step per
    root against the original cubic to shed the algebraic rearrangement error.
    """
    s1 = complex(point.sigma1)
    s2 = complex(point.sigma2)
    a2, a1, a0 = -s1, s2, -(s1 - 2.0)
    # depressed cubic t = y - a2/3:  y^3 + p y + q
    shift = a2 / 3.0
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2 ** 3 / 27.0 - a2 * a1 / 3.0 + a0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    sq = cmath.sqrt(disc)
    cand1 = -q / 2.0 + sq
    cand2 = -q / 2.0 - sq
    u3 = cand1 if abs(cand1) >= abs(cand2) else cand2
    u = _principal_cbrt(u3)
    if u == 0:
        ys = [complex(0.0)] * 3
    else:
        v = -p / (3.0 * u)
        ys = [u + v, _OMEGA * u + _OMEGA.conjugate() * v,
              _OMEGA.conjugate() * u + _OMEGA * v]
    roots = [y - shift for y in ys]

    def cubic(t: complex) -> complex:
        return ((t + a2) * t + a1) * t + a0

    def cubic_d(t: complex) -> complex:
        return (3.0 * t + 2.0 * a2) * t + a1

    polished = []
    for t in roots:
        d = cubic_d(t)
        if d != 0:
            t = t - cubic(t) / d
        polished.append(t)
    polished.sort(key=lambda t: (t.real, t.imag))
    return EigenvalueTriple(*polished)


def per1_form_from_lambda(lam: complex) -> PerOneForm:
    """Normal form z + offset + 1/z whose finite fixed point has eigenvalue lam.

    offset is the principal square root of 1 - lam; the finite fixed point
    -1/offset then carries eigenvalue 1 - offset^2 = lam.
    """
    return PerOneForm(cmath.sqrt(1.0 - complex(lam)))


def moduli_distance(a: ModuliPoint, b: ModuliPoint) -> float:
    return max(abs(a.sigma1 - b.sigma1), abs(a.sigma2 - b.sigma2))
