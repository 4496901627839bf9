"""Region membership, boundary reporting, and the connectivity ladder."""

import cmath
import math

import numpy as np
import pytest

from quadmod.classify import (
    ALL_TIERS,
    DEFAULT_TIERS,
    Connectivity,
    Tier,
    boundary_of_H,
    connectivity_per1,
    region_membership,
    verify_repelling,
)
from quadmod.errors import AmbiguousNearBoundary, InconsistentTriple, InvalidForm


# --- region membership ----------------------------------------------------------


def test_region_h_from_pair():
    label = region_membership((0.5, 0.5))
    assert label.tag == "H"
    assert label.near == ()
    assert region_membership((0.5j, -0.5j)).tag == "H"
    assert region_membership((0.0, 0.0)).tag == "H"  # the squaring map


def test_region_b0_circle_point():
    # one eigenvalue exactly on the circle, the other inside, product != 1
    label = region_membership((1j, 0.5))
    assert label.tag == "B0"
    assert label.near == ()


def test_region_b1():
    assert region_membership((1.0, 0.5)).tag == "B1"
    assert region_membership((1.0, 1.0, -1.0)).tag == "B1"  # |mu| = 1 included
    assert region_membership((1.0, 1.0, 0.3 + 0.4j)).tag == "B1"


def test_region_b2():
    label = region_membership((1.0, 1.0, 2.5))
    assert label.tag == "B2"
    assert label.near == ()
    assert region_membership((1.0, 2.5)).tag == "B2"  # pair completes to (1,1,2.5)


def test_region_b2_closure_only():
    assert region_membership((1.0, 1.0, 1.0)).tag == "B2closureOnly"
    assert region_membership((1.0, 1.0, 1.0 + 2.0j)).tag == "B2closureOnly"


def test_region_per1_of_1():
    # |mu| > 1 with Re mu <= 1: in the slice but in none of the named strata
    assert region_membership((1.0, 1.0, -3.0)).tag == "Per1of1"
    assert region_membership((1.0, 1.0, -0.5 + 2.0j)).tag == "Per1of1"


def test_region_exterior():
    label = region_membership((1.5, 2.0))
    assert label.tag == "Exterior"
    assert label.near == ()


def test_region_eigenvalue_one_multiplicity_one_rejected():
    with pytest.raises(InconsistentTriple):
        region_membership((1.0, 0.5, 0.7))


def test_region_degenerate_pair_rejected():
    with pytest.raises(InvalidForm):
        region_membership((2.0, 0.5))


def test_region_snap_is_recorded():
    label = region_membership((1.0 + 5e-10, 0.5))
    assert label.tag == "B1"
    assert any("l1" in item for item in label.near)
    # widening eps moves the snap band
    wide = region_membership((1.0 + 1e-7, 0.5), eps=1e-6)
    assert wide.tag == "B1"
    assert wide.near != ()


def test_region_open_conditions_use_strict_inequality():
    # within the band but still strictly inside: H with the proximity recorded
    lam = 1.0 - 1e-12
    label = region_membership((lam * 1j * cmath.exp(0.3j), 0.2))
    assert label.tag in ("H", "B0")  # decided by the exact float magnitude
    # strictly above Re = 1 by less than eps: the open condition wins (B2),
    # with the proximity recorded for the caller
    label2 = region_membership((1.0, 1.0, 1.0 + 5e-10 + 2.0j))
    assert label2.tag == "B2"
    assert label2.near != ()
    # at or below the wall the equality stratum absorbs the eps band
    label3 = region_membership((1.0, 1.0, 1.0 - 5e-10 + 2.0j))
    assert label3.tag == "B2closureOnly"
    assert label3.near != ()
    label4 = region_membership((1.0, 1.0, 1.0 + 1e-6 + 2.0j))
    assert label4.tag == "B2"
    assert label4.near == ()


def test_boundary_of_h():
    assert boundary_of_H((1j, 0.5)) is True  # B0
    assert boundary_of_H((1.0, 0.5)) is True  # B1
    assert boundary_of_H((1.0, 1.0, 2.5)) is True  # B2
    assert boundary_of_H((1.0, 1.0, 1.0)) is True  # closure point
    assert boundary_of_H((0.5, 0.5)) is False  # interior of H
    assert boundary_of_H((1.5, 2.0)) is False  # exterior


def test_boundary_of_h_refuses_snapped_answers():
    with pytest.raises(AmbiguousNearBoundary) as ei:
        boundary_of_H((1.0 + 5e-10, 0.5))
    assert ei.value.tag == "B1"
    assert ei.value.near


# --- connectivity ladder ---------------------------------------------------------


def test_tier_sets():
    assert DEFAULT_TIERS == frozenset({"t1", "t2", "t3", "t4", "numeric"})
    assert ALL_TIERS == DEFAULT_TIERS | {"t5"}


def test_ladder_unknown_tier_rejected():
    with pytest.raises(InvalidForm):
        connectivity_per1(0.5, tiers=("t9",))


def test_ladder_t1_cusp():
    v = connectivity_per1(1.0)
    assert v.connectivity is Connectivity.CONNECTED
    assert v.tier is Tier.THEOREM_SHORTCUT
    assert v.rule == "unit-eigenvalue-cusp"


def test_ladder_t2_nonrepelling():
    for lam in (0.5, -1.0, 0.3 + 0.4j, cmath.exp(0.7j)):
        v = connectivity_per1(lam)
        assert v.connectivity is Connectivity.CONNECTED
        assert v.rule == "second-nonrepelling-fixed-point"


def test_ladder_t3_halfplane():
    v = connectivity_per1(2.5)
    assert v.connectivity is Connectivity.CANTOR
    assert v.tier is Tier.THEOREM_SHORTCUT
    assert v.rule == "repelling-halfplane"


def test_ladder_t4_certified_radius():
    v = connectivity_per1(-15.0)
    assert v.connectivity is Connectivity.CANTOR
    assert v.tier is Tier.CERTIFIED
    assert v.rule == "radius-bound-both-critical-values-escape"
    assert len(v.certificates) == 2
    offset = cmath.sqrt(1.0 - (-15.0))
    for cert, z in zip(v.certificates, (offset + 2.0, offset - 2.0)):
        assert cert.kind == "radius3"
        assert cert.offset == offset
        assert cert.start == z
        assert cert.min_gain == pytest.approx(2.0 / 3.0)


def test_ladder_t5_opt_in():
    # |lam + 1| = 3 > 2 but |lam - 1| = 5 < 9: t5 decides only when enabled.
    with_t5 = connectivity_per1(-4.0, tiers=("t1", "t2", "t3", "t4", "t5"))
    assert with_t5.connectivity is Connectivity.CANTOR
    assert with_t5.tier is Tier.EXTERNAL_THEOREM
    assert with_t5.rule == "imported-disk-bound"
    default = connectivity_per1(-4.0)
    assert default.rule != "imported-disk-bound"


def test_ladder_numeric_certified_cantor():
    # lam = -3.2: t4 misses (|lam-1| = 4.2), numeric run certifies both escapes.
    v = connectivity_per1(-3.2)
    assert v.connectivity is Connectivity.CANTOR
    assert v.tier is Tier.CERTIFIED
    assert v.rule == "both-critical-orbits-escape"
    assert v.steps == (0, 1)
    assert all(isinstance(s, int) for s in v.steps)


def test_ladder_numeric_connected():
    v = connectivity_per1(0.75, tiers=("numeric",))
    assert v.connectivity is Connectivity.CONNECTED
    assert v.tier is Tier.NUMERIC
    assert v.rule == "critical-orbit-attracted"


def test_ladder_numeric_inconclusive_pole_hit():
    # lam = -3 (offset 2): one critical value hits the pole and lands exactly
    # on the parabolic point; the evidence proves nothing either way.
    v = connectivity_per1(-3.0)
    assert v.connectivity is Connectivity.UNDETERMINED
    assert v.tier is Tier.NONE
    assert v.rule == "orbit-evidence-inconclusive"


def test_ladder_numeric_budget_exhaustion():
    lam = cmath.exp(2j * math.pi * (math.sqrt(5.0) - 1.0) / 2.0)
    v = connectivity_per1(lam, tiers=("numeric",), budget=50)
    assert v.connectivity is Connectivity.UNDETERMINED
    assert v.rule == "orbit-evidence-inconclusive"


def test_ladder_no_enabled_rule():
    v = connectivity_per1(0.5, tiers=("t1",))
    assert v.connectivity is Connectivity.UNDETERMINED
    assert v.tier is Tier.NONE
    assert v.rule == "no-enabled-rule-applies"


def test_ladder_order_is_canonical():
    # t3 would also apply to lam = 12, but t1/t2 are checked first and skip it;
    # passing tiers in scrambled order must not change the outcome.
    a = connectivity_per1(12.0, tiers=("numeric", "t4", "t3"))
    b = connectivity_per1(12.0, tiers=("t3", "t4", "numeric"))
    assert a == b
    assert a.rule == "repelling-halfplane"


def test_batch_ladder_matches_scalar():
    from quadmod.batch import TIER_CODES, ladder_batch

    lams = np.array(
        [1.0, 0.5, -1.0, 2.5, -15.0, -3.2, 0.75, 12.0, 1 + 9.5j, 0.1 - 0.2j],
        dtype=np.complex128,
    )
    order = ("t1", "t2", "t3", "t4", "numeric")
    verdict, tier, steps = ladder_batch(lams, order, budget=100_000)
    code_of = {
        Connectivity.UNDETERMINED: 0,
        Connectivity.CONNECTED: 1,
        Connectivity.CANTOR: 2,
    }
    for k, lam in enumerate(lams):
        v = connectivity_per1(complex(lam), tiers=order, budget=100_000)
        assert int(verdict[k]) == code_of[v.connectivity], (lam, v)
        assert int(tier[k]) == TIER_CODES[v.tier.value], (lam, v)


def test_verify_repelling_report():
    rep = verify_repelling(2000, seed=7)
    assert rep.samples == 2000
    assert rep.violations == 0
    assert rep.min_re_lambda3 > 1.0
    l1, l2 = rep.worst_pair
    assert abs(l1) < 1.0 and abs(l2) < 1.0
