"""Twist sequences: log-eigenvalue deformations converging into the slice
of classes with a fixed point of eigenvalue 1.

Pick logarithms w1, w2 of two attracting eigenvalues (Re wj < 0; the branch
is selectable through integers k1, k2). The twist at stage n replaces the
reciprocals by

    1/w1(n) = 1/w1 + i n / (2 pi),      1/w2(n) = 1/w2 - i n / (2 pi),

so the sum 1/w1(n) + 1/w2(n) is independent of n while both eigenvalues
exp(wj(n)) spiral toward 1. The eigenvalue triples (exp w1(n), exp w2(n), l3(n))
converge to the class (1, 1, L) with

    L = 1 - w1 w2 / (w1 + w2),

which lies in the region of triples (1, 1, L) with Re L > 1.

Numerically, 1/wj(n) is kept as an exact pair (base, n-multiple): the
conserved sum is then witnessed by exact compensated summation instead of
being destroyed by rounding of the large imaginary parts (at n = 10^6 the
shift n/(2 pi) is ~1.6e5, whose rounding alone exceeds a 1e-12 budget).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import NotInB2, ZeroMultiplier
from .moduli import EigenvalueTriple, ModuliPoint, lambda3_from_eq1, moduli_distance, sigma_coordinates

__all__ = [
    "TwistPlan",
    "TwistState",
    "plan_from_multipliers",
    "inverse_twist",
    "twist_state",
    "sum_conservation_residual",
    "twist_limit_error",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TwistPlan:
    """A twist deformation: branch logarithms and the limiting eigenvalue."""

    omega1: complex
    omega2: complex
    limit_lambda: complex


@dataclass(frozen=True)
class TwistState:
    """The stage-n point on a twist path."""

    n: int
    omega1: complex
    omega2: complex
    triple: EigenvalueTriple


def _branch_log(lam: complex, k: int, name: str) -> complex:
    if lam == 0:
        raise ZeroMultiplier(f"{name} must be nonzero to take a logarithm")
    w = cmath.log(lam) + 2j * math.pi * k
    if not w.real < 0:
        raise ZeroMultiplier(
            f"{name} must be attracting (|{name}| < 1) so its logarithm has negative real part"
        )
    return w


def plan_from_multipliers(lambda1: complex, lambda2: complex, k1: int = 0, k2: int = 0) -> TwistPlan:
    """Build a twist plan from two attracting eigenvalues and branch choices.

    The logarithms are w_j = Log lambda_j + 2 pi i k_j; both eigenvalues must
    be attracting and nonzero (their logarithms need Re w < 0, which holds for
    every branch exactly when |lambda| < 1).
    """
    w1 = _branch_log(complex(lambda1), k1, "lambda1")
    w2 = _branch_log(complex(lambda2), k2, "lambda2")
    limit = 1.0 - (w1 * w2) / (w1 + w2)
    return TwistPlan(omega1=w1, omega2=w2, limit_lambda=limit)


def inverse_twist(limit_lambda: complex) -> TwistPlan:
    """The symmetric twist plan whose limit is the class (1, 1, limit_lambda).

    Solves w1 = w2 = 2 (1 - limit_lambda); requires Re limit_lambda > 1 (the
    region the twist limits always land in), else raises NotInB2.
    """
    L = complex(limit_lambda)
    if not L.real > 1.0:
        raise NotInB2(f"Re limit eigenvalue = {L.real:.6g} must exceed 1")
    w = 2.0 * (1.0 - L)  # then w1 w2 / (w1 + w2) = w / 2 = 1 - L
    return TwistPlan(omega1=w, omega2=w, limit_lambda=L)


def _omega_n(base: complex, shift_sign: int, n: int) -> complex:
    """exp-ready w_j(n) from 1/w_j(n) = 1/base + shift_sign * i n / (2 pi)."""
    inv = 1.0 / base + complex(0.0, shift_sign * (n / _TWO_PI))
    return 1.0 / inv


def twist_state(plan: TwistPlan, n: int) -> TwistState:
    """The stage-n eigenvalue data of the twist path."""
    if n < 0:
        raise ValueError("twist stage must be non-negative")
    w1n = _omega_n(plan.omega1, +1, n)
    w2n = _omega_n(plan.omega2, -1, n)
    l1 = cmath.exp(w1n)
    l2 = cmath.exp(w2n)
    l3 = lambda3_from_eq1(l1, l2)
    return TwistState(n=n, omega1=w1n, omega2=w2n, triple=EigenvalueTriple(l1, l2, l3))


def sum_conservation_residual(plan: TwistPlan, n: int) -> float:
    """| (1/w1(n) + 1/w2(n)) - (1/w1 + 1/w2) |, by exact compensated summation.

    The twist shifts cancel exactly in this sum; evaluating the cancellation
    with compensated summation keeps the witness exact even when the shift
    n / (2 pi) dwarfs the base reciprocals.
    """
    inv1 = 1.0 / plan.omega1
    inv2 = 1.0 / plan.omega2
    shift = n / _TWO_PI
    re = math.fsum((inv1.real, inv2.real, -inv1.real, -inv2.real))
    im = math.fsum((inv1.imag, shift, inv2.imag, -shift, -inv1.imag, -inv2.imag))
    return math.hypot(re, im)


def twist_limit_error(plan: TwistPlan, n: int) -> float:
    """Distance in moduli coordinates from the stage-n class to the limit class.

    The limit (1, 1, L) has symmetric functions (2 + L, 1 + 2 L); the distance
    is the max-coordinate metric on those.
    """
    state = twist_state(plan, n)
    here = sigma_coordinates(state.triple)
    L = plan.limit_lambda
    there = ModuliPoint(2.0 + L, 1.0 + 2.0 * L)
    return moduli_distance(here, there)
