"""Verification suites: randomized desk checks of the library's core laws.

Each suite draws reproducible samples (counter-based, keyed by seed and
sample index), runs a batch of checks, and returns a JSON-ready report dict
whose "pass" field is the suite verdict. The CLI fronts these through the
verify subcommand; the acceptance tests call them directly.
"""

from __future__ import annotations

import cmath
import math
from typing import Optional

import numpy as np

from .batch import per1_pixel_verdicts
from .classify import region_membership, verify_repelling
from .dynamics import certified_escape_paper
from .errors import PreconditionFailed
from .sampling import rectangle_points, uniform_block, unit_disk_pairs
from .twist import (
    TwistPlan,
    inverse_twist,
    plan_from_multipliers,
    sum_conservation_residual,
    twist_limit_error,
    twist_state,
)

__all__ = [
    "suite_repelling",
    "suite_twist",
    "suite_bound",
    "suite_b2",
    "run_suite",
    "SUITE_NAMES",
]

SUITE_NAMES = ("repelling", "twist", "bound", "b2")


def _cpair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def suite_repelling(samples: int = 100_000, seed: int = 7) -> dict:
    """Two attracting fixed points force the third to satisfy Re l3 > 1."""
    rep = verify_repelling(samples, seed)
    ok = rep.violations == 0 and rep.min_re_lambda3 > 1.0
    return {
        "suite": "repelling",
        "samples": rep.samples,
        "seed": rep.seed,
        "min_re_lambda3": rep.min_re_lambda3,
        "violations": rep.violations,
        "worst_pair": {
            "lambda1": _cpair(rep.worst_pair[0]),
            "lambda2": _cpair(rep.worst_pair[1]),
        },
        "pass": ok,
    }


# Twist limit targets are sampled with |Im lambda| <= 1.5 so the symmetric
# log-multiplier 2(1 - lambda) keeps |Im omega| <= 3 < pi: the principal
# logarithm then reproduces omega exactly and the round trip is wrap-free.
_ROUNDTRIP_RE = (1.0 + 1e-6, 6.0)
_ROUNDTRIP_IM = 1.5


def _random_plans(count: int, seed: int) -> list[TwistPlan]:
    plans: list[TwistPlan] = []
    start = 0
    while len(plans) < count:
        l1s, l2s = unit_disk_pairs(seed, start, count)
        for l1, l2 in zip(l1s, l2s):
            if len(plans) == count:
                break
            if abs(l1) < 1e-6 or abs(l2) < 1e-6:
                continue  # too close to the excluded zero multiplier
            plans.append(plan_from_multipliers(complex(l1), complex(l2)))
        start += count
    return plans


def suite_twist(plans: int = 100, seed: int = 7, n_max: int = 10**6) -> dict:
    """Twist-path laws: conservation, containment, limit, rate, inverse."""
    grid = [1]
    while grid[-1] * 2 <= n_max:
        grid.append(grid[-1] * 2)
    if grid[-1] != n_max:
        grid.append(n_max)

    all_plans = _random_plans(plans, seed)
    worst_residual = 0.0
    containment_failures = 0
    limit_failures = 0
    rate_ratios: list[float] = []
    first_failure: Optional[dict] = None

    for pi, plan in enumerate(all_plans):
        for n in grid:
            r = sum_conservation_residual(plan, n)
            worst_residual = max(worst_residual, r)
            if r >= 1e-12 and first_failure is None:
                first_failure = {"check": "conservation", "plan": pi, "n": n, "residual": r}
            label = region_membership(twist_state(plan, n).triple)
            if label.tag != "H":
                containment_failures += 1
                if first_failure is None:
                    first_failure = {"check": "containment", "plan": pi, "n": n, "tag": label.tag}
        err4 = twist_limit_error(plan, 10**4)
        if not err4 < 1e-2 * (1.0 + abs(plan.limit_lambda)):
            limit_failures += 1
            if first_failure is None:
                first_failure = {"check": "limit", "plan": pi, "error": err4}
        for n in (1000, 2000, 4000):
            rate_ratios.append(twist_limit_error(plan, 2 * n) / twist_limit_error(plan, n))

    rate_arr = np.asarray(rate_ratios)
    rate_ok = bool(((rate_arr >= 0.4) & (rate_arr <= 0.6)).all())
    if not rate_ok and first_failure is None:
        bad = int(np.argmax((rate_arr < 0.4) | (rate_arr > 0.6)))
        first_failure = {
            "check": "rate",
            "plan": bad // 3,
            "n": (1000, 2000, 4000)[bad % 3],
            "ratio": float(rate_arr[bad]),
        }

    # Inverse round trip on wrap-free limit targets.
    targets = rectangle_points(
        seed + 1, 0, plans,
        re_min=_ROUNDTRIP_RE[0], re_max=_ROUNDTRIP_RE[1],
        im_min=-_ROUNDTRIP_IM, im_max=_ROUNDTRIP_IM,
    )
    roundtrip_worst = 0.0
    for lam in targets:
        lam = complex(lam)
        back = inverse_twist(lam)
        redone = plan_from_multipliers(cmath.exp(back.omega1), cmath.exp(back.omega2), 0, 0)
        roundtrip_worst = max(roundtrip_worst, abs(redone.limit_lambda - lam))
    roundtrip_ok = roundtrip_worst < 1e-12
    if not roundtrip_ok and first_failure is None:
        first_failure = {"check": "roundtrip", "worst": roundtrip_worst}

    ok = (
        worst_residual < 1e-12
        and containment_failures == 0
        and limit_failures == 0
        and rate_ok
        and roundtrip_ok
    )
    report = {
        "suite": "twist",
        "plans": plans,
        "seed": seed,
        "n_max": n_max,
        "worst_conservation_residual": worst_residual,
        "containment_failures": containment_failures,
        "limit_failures": limit_failures,
        "rate_ratio_min": float(rate_arr.min()),
        "rate_ratio_max": float(rate_arr.max()),
        "rate_band": [0.4, 0.6],
        "rate_ok": rate_ok,
        "roundtrip_worst": roundtrip_worst,
        "pass": ok,
    }
    if first_failure is not None:
        report["first_counterexample"] = first_failure
    return report


def suite_bound(samples: int = 10_000, seed: int = 7) -> dict:
    """The exclusion bound: |lambda - 1| > 9 is certified Cantor, and every
    offset with 3 < |B| <= 10 certifies escape of both critical values."""
    u = uniform_block(seed, 0, samples)
    # radius strictly above 9 (never exactly on the boundary)
    r = 9.0 * (1.0 + 1e-12) + 18.0 * u[:, 0]
    theta = 2.0 * math.pi * u[:, 1]
    lams = 1.0 + r * np.cos(theta) + 1j * (r * np.sin(theta))
    verdict, steps, certified = _ladder_t4_only(lams)
    cantor_certified = int(np.count_nonzero(verdict))
    first_failure: Optional[dict] = None
    if cantor_certified != samples:
        bad = int(np.argmin(verdict))
        first_failure = {"check": "t4", "lambda": _cpair(complex(lams[bad]))}

    u2 = uniform_block(seed + 1, 0, samples)
    rb = 3.0 * (1.0 + 1e-12) + 7.0 * u2[:, 0]
    tb = 2.0 * math.pi * u2[:, 1]
    offsets = rb * np.cos(tb) + 1j * (rb * np.sin(tb))
    cert_failures = 0
    for off in offsets:
        off = complex(off)
        try:
            certified_escape_paper(off, off + 2.0)
            certified_escape_paper(off, off - 2.0)
        except PreconditionFailed:
            cert_failures += 1
            if first_failure is None:
                first_failure = {"check": "radius3-cert", "offset": _cpair(off)}
    ok = cantor_certified == samples and cert_failures == 0
    report = {
        "suite": "bound",
        "samples": samples,
        "seed": seed,
        "cantor_certified": cantor_certified,
        "cert_failures": cert_failures,
        "pass": ok,
    }
    if first_failure is not None:
        report["first_counterexample"] = first_failure
    return report


def _ladder_t4_only(lams: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    from .batch import ladder_batch

    verdict, tier, steps = ladder_batch(lams, ("t4",), budget=1)
    return (verdict == 2) & (tier == 3), steps, tier


def suite_b2(samples: int = 1000, seed: int = 7, budget: int = 100_000) -> dict:
    """Shortcut-free check that the repelling half plane is all Cantor.

    Main batch: Re lambda in [1.5, 10], |Im lambda| <= 10, numeric tier only —
    every sample must come back Cantor. Side batch: Re lambda in (1, 1.5),
    where slow parabolic escape is expected; its undetermined rate is
    reported without a threshold.
    """
    lams = rectangle_points(seed, 0, samples, re_min=1.5, re_max=10.0, im_min=-10.0, im_max=10.0)
    verdict, steps, certified = per1_pixel_verdicts(lams, budget)
    cantor = int(np.count_nonzero(verdict == 2))
    connected = int(np.count_nonzero(verdict == 1))
    undetermined = int(np.count_nonzero(verdict == 0))
    ok = cantor == samples and connected == 0 and undetermined == 0

    near = rectangle_points(seed, samples, samples, re_min=1.0 + 1e-9, re_max=1.5, im_min=-10.0, im_max=10.0)
    vnear, _, _ = per1_pixel_verdicts(near, budget)
    near_undetermined = int(np.count_nonzero(vnear == 0))
    near_connected = int(np.count_nonzero(vnear == 1))

    report = {
        "suite": "b2",
        "samples": samples,
        "seed": seed,
        "budget": budget,
        "cantor": cantor,
        "connected": connected,
        "undetermined": undetermined,
        "near_boundary_undetermined_rate": near_undetermined / samples,
        "near_boundary_connected": near_connected,
        "max_steps": int(steps.max()) if samples else 0,
        "pass": ok,
    }
    if not ok:
        bad = int(np.argmax(verdict != 2))
        report["first_counterexample"] = {"lambda": _cpair(complex(lams[bad])), "verdict": int(verdict[bad])}
    return report


def run_suite(
    name: str,
    samples: Optional[int] = None,
    seed: int = 7,
    budget: Optional[int] = None,
    plans: Optional[int] = None,
) -> dict:
    if name == "repelling":
        return suite_repelling(samples if samples is not None else 100_000, seed)
    if name == "twist":
        return suite_twist(plans if plans is not None else 100, seed)
    if name == "bound":
        return suite_bound(samples if samples is not None else 10_000, seed)
    if name == "b2":
        return suite_b2(
            samples if samples is not None else 1000, seed, budget if budget is not None else 100_000
        )
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
