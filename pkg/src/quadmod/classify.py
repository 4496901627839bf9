"""Region membership in moduli space and the Julia-set connectivity classifier.

Regions are defined by the fixed-point eigenvalue triple (l1, l2, l3), which
always satisfies 1/(1-l1) + 1/(1-l2) + 1/(1-l3) = 1 when no eigenvalue is 1,
and contains the eigenvalue 1 with multiplicity at least two otherwise:

  H               two eigenvalues strictly inside the unit disk (the third is
                  then automatically repelling with Re l3 > 1).
  B0              boundary stratum of H: one eigenvalue on the unit circle,
                  another in the closed disk, their product not 1.
  B1              triples (1, 1, l) with |l| <= 1, l != 1.
  B2              triples (1, 1, l) with Re l > 1.
  B2closureOnly   points of the closure of B2 not in B2: (1, 1, l) with
                  Re l = 1, l != 1, and the totally degenerate (1, 1, 1).
  Per1of1         any triple (1, 1, l): the slice fixing eigenvalue 1.
  Exterior        none of the above.

Strata cut out by equalities (an eigenvalue equal to 1, a modulus or real
part equal to 1, a product equal to 1) can never be hit exactly in floating
point, so values within `eps` of those sets snap onto them. Open conditions
(strictly inside the disk, Re > 1) are decided by the strict inequality
itself. Either way a value within `eps` of a decision boundary is recorded
in RegionLabel.near, so callers can tell confident answers from fragile
ones; boundary_of_H refuses to answer in the fragile case by raising
AmbiguousNearBoundary.

Connectivity of the Julia set for the parabolic normal form g(z) = z + B + 1/z
(eigenvalues (1, 1, l) with l = 1 - B^2) is decided by a ladder of rules:

  t1  l == 1: connected (the degenerate cusp point lies in the connectedness locus).
  t2  |l| <= 1, l != 1: connected (a second non-repelling fixed point forces it).
  t3  Re l > 1: disconnected (the triple doubles as an H-triple; Cantor side).
  t4  |l - 1| > 9: disconnected, with escape certificates for both critical
      values (|B| > 3 puts both of B +- 2 in the certified escape region).
  t5  |l + 1| > 2: disconnected (imported bound; off by default — enable it
      explicitly to use the larger exclusion disk).
  numeric: iterate both critical orbits; any attraction to a point or short
      cycle proves connected, both orbits escaping proves disconnected
      (certified when both escapes carry certificates).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

from .errors import AmbiguousNearBoundary, InconsistentTriple, InvalidForm
from .dynamics import (
    DEFAULT_BUDGET,
    DEFAULT_TOL,
    AttractedToCycle,
    AttractedToPoint,
    EscapeCertificate,
    EscapesParabolic,
    Fate,
    certified_escape_paper,
    orbit_fate,
)
from .moduli import EigenvalueTriple, lambda3_from_eq1, per1_form_from_lambda

__all__ = [
    "RegionLabel",
    "region_membership",
    "boundary_of_H",
    "Connectivity",
    "Tier",
    "Verdict",
    "DEFAULT_TIERS",
    "ALL_TIERS",
    "connectivity_per1",
    "RepellingReport",
    "verify_repelling",
]

DEFAULT_EPS = 1e-9

TRIPLE_INPUT = Union[EigenvalueTriple, tuple]


@dataclass(frozen=True)
class RegionLabel:
    """Classification answer: the region tag, the eps used, and snap events."""

    tag: str
    eps: float
    near: tuple[str, ...] = ()


class _Snapper:
    """Comparisons with an eps-wide snap band; every snap is recorded."""

    def __init__(self, eps: float):
        self.eps = eps
        self.near: list[str] = []

    def is_one(self, x: complex, name: str) -> bool:
        d = abs(x - 1.0)
        if d == 0.0:
            return True
        if d <= self.eps:
            self.near.append(f"{name} within eps of 1")
            return True
        return False

    def on_circle(self, x: complex, name: str) -> bool:
        d = abs(abs(x) - 1.0)
        if d == 0.0:
            return True
        if d <= self.eps:
            self.near.append(f"|{name}| within eps of 1")
            return True
        return False

    def strictly_inside(self, x: complex, name: str) -> bool:
        # The strict inequality decides; the band only flags a fragile answer.
        self.on_circle(x, name)
        return abs(x) < 1.0

    def in_closed_disk(self, x: complex, name: str) -> bool:
        return abs(x) < 1.0 or self.on_circle(x, name)

    def re_above_one(self, x: complex, name: str) -> bool:
        # Open condition: strict inequality decides, the band only reports.
        d = x.real - 1.0
        if 0.0 < abs(d) <= self.eps:
            self.near.append(f"Re {name} within eps of 1")
        return d > 0.0

    def re_equals_one(self, x: complex, name: str) -> bool:
        d = abs(x.real - 1.0)
        if d == 0.0:
            return True
        if d <= self.eps:
            self.near.append(f"Re {name} within eps of 1")
            return True
        return False

    def product_is_one(self, x: complex, y: complex, name: str) -> bool:
        d = abs(x * y - 1.0)
        if d == 0.0:
            return True
        if d <= self.eps:
            self.near.append(f"{name} within eps of 1")
            return True
        return False


def _as_triple(x: TRIPLE_INPUT, snap: _Snapper) -> tuple[complex, complex, complex]:
    if isinstance(x, EigenvalueTriple):
        return (complex(x.lambda1), complex(x.lambda2), complex(x.lambda3))
    vals = tuple(complex(v) for v in x)
    if len(vals) == 3:
        return vals  # type: ignore[return-value]
    if len(vals) != 2:
        raise InvalidForm("expected an eigenvalue pair or triple")
    l1, l2 = vals
    if snap.product_is_one(l1, l2, "l1*l2"):
        raise InvalidForm("eigenvalue pair with product 1 is not a quadratic class")
    # An eigenvalue equal to 1 forces a second one (the fixed points merge).
    if snap.is_one(l1, "l1"):
        return (1.0 + 0j, 1.0 + 0j, l2)
    if snap.is_one(l2, "l2"):
        return (1.0 + 0j, 1.0 + 0j, l1)
    return (l1, l2, lambda3_from_eq1(l1, l2))


def region_membership(x: TRIPLE_INPUT, eps: float = DEFAULT_EPS) -> RegionLabel:
    """Classify an eigenvalue pair or triple into a region tag.

    Pairs are completed to triples via the fixed-point relation. Values within
    eps of a decision boundary are snapped onto it and the snap recorded in the
    returned label's `near` field.
    """
    snap = _Snapper(eps)
    l1, l2, l3 = _as_triple(x, snap)
    names = ("l1", "l2", "l3")
    vals = (l1, l2, l3)
    ones = [snap.is_one(v, n) for v, n in zip(vals, names)]
    n_ones = sum(ones)

    tag: str
    if n_ones == 3:
        tag = "B2closureOnly"
    elif n_ones == 2:
        (mu, mu_name), = [(v, n) for v, n, o in zip(vals, names, ones) if not o]
        if snap.in_closed_disk(mu, mu_name):
            tag = "B1"
        elif snap.re_above_one(mu, mu_name):
            tag = "B2"
        elif snap.re_equals_one(mu, mu_name):
            tag = "B2closureOnly"
        else:
            tag = "Per1of1"
    elif n_ones == 1:
        raise InconsistentTriple(
            "eigenvalue 1 with multiplicity one violates the fixed-point relation"
        )
    else:
        inside = [snap.strictly_inside(v, n) for v, n in zip(vals, names)]
        if sum(inside) >= 2:
            tag = "H"
        else:
            tag = "Exterior"
            for i in range(3):
                for j in range(3):
                    if i == j:
                        continue
                    if (
                        snap.on_circle(vals[i], names[i])
                        and snap.in_closed_disk(vals[j], names[j])
                        and not snap.product_is_one(vals[i], vals[j], f"{names[i]}*{names[j]}")
                    ):
                        tag = "B0"
                        break
                if tag == "B0":
                    break
    return RegionLabel(tag=tag, eps=eps, near=tuple(sorted(set(snap.near))))


def boundary_of_H(x: TRIPLE_INPUT, eps: float = DEFAULT_EPS) -> bool:
    """True when the class lies on the boundary of the hyperbolic-like region H.

    The boundary consists of B0 together with the parabolic strata B1, B2 and
    the rest of the closure of B2. Raises AmbiguousNearBoundary when the
    classification was decided by an eps snap rather than exact arithmetic.
    """
    label = region_membership(x, eps)
    if label.near:
        raise AmbiguousNearBoundary(
            f"classification of {label.tag!r} relied on eps-snapping: {', '.join(label.near)}",
            tag=label.tag,
            near=label.near,
        )
    return label.tag in ("B0", "B1", "B2", "B2closureOnly")


class Connectivity(str, Enum):
    CONNECTED = "connected"
    CANTOR = "cantor"
    UNDETERMINED = "undetermined"


class Tier(str, Enum):
    THEOREM_SHORTCUT = "theorem-shortcut"
    EXTERNAL_THEOREM = "external-theorem"
    CERTIFIED = "certified"
    NUMERIC = "numeric"
    NONE = "none"


DEFAULT_TIERS: frozenset[str] = frozenset({"t1", "t2", "t3", "t4", "numeric"})
ALL_TIERS: frozenset[str] = frozenset({"t1", "t2", "t3", "t4", "t5", "numeric"})
_TIER_ORDER = ("t1", "t2", "t3", "t4", "t5", "numeric")


@dataclass(frozen=True)
class Verdict:
    """Connectivity answer with the evidence that produced it."""

    connectivity: Connectivity
    tier: Tier
    rule: str
    steps: tuple[int, ...] = ()
    fates: tuple[Fate, ...] = ()
    certificates: tuple[EscapeCertificate, ...] = ()


def _normalize_tiers(tiers: Optional[Sequence[str]]) -> tuple[str, ...]:
    if tiers is None:
        chosen = DEFAULT_TIERS
    else:
        chosen = set(tiers)
        unknown = chosen - ALL_TIERS
        if unknown:
            raise InvalidForm(f"unknown tier names: {sorted(unknown)}")
    return tuple(t for t in _TIER_ORDER if t in chosen)


def connectivity_per1(
    lam: complex,
    tiers: Optional[Sequence[str]] = None,
    budget: int = DEFAULT_BUDGET,
    tol: float = DEFAULT_TOL,
) -> Verdict:
    """Connectivity of the Julia set for the class (1, 1, lam).

    `tiers` selects which rules may fire (default: t1-t4 plus numeric; t5 is
    opt-in). Rules are tried in the fixed order t1, t2, t3, t4, t5, numeric;
    the first applicable one decides.
    """
    lam = complex(lam)
    order = _normalize_tiers(tiers)
    for t in order:
        if t == "t1" and lam == 1.0:
            return Verdict(Connectivity.CONNECTED, Tier.THEOREM_SHORTCUT, "unit-eigenvalue-cusp")
        if t == "t2" and lam != 1.0 and abs(lam) <= 1.0:
            return Verdict(
                Connectivity.CONNECTED, Tier.THEOREM_SHORTCUT, "second-nonrepelling-fixed-point"
            )
        if t == "t3" and lam.real > 1.0:
            return Verdict(Connectivity.CANTOR, Tier.THEOREM_SHORTCUT, "repelling-halfplane")
        if t == "t4" and abs(lam - 1.0) > 9.0:
            # |offset| > 3, so the radius-style escape test provably covers
            # both critical values offset +- 2.
            offset = cmath.sqrt(1.0 - lam)
            certs = (
                certified_escape_paper(offset, offset + 2.0),
                certified_escape_paper(offset, offset - 2.0),
            )
            return Verdict(
                Connectivity.CANTOR,
                Tier.CERTIFIED,
                "radius-bound-both-critical-values-escape",
                certificates=certs,
            )
        if t == "t5" and abs(lam + 1.0) > 2.0:
            return Verdict(Connectivity.CANTOR, Tier.EXTERNAL_THEOREM, "imported-disk-bound")
        if t == "numeric":
            form = per1_form_from_lambda(lam)
            offset = complex(form.offset)
            f1 = orbit_fate(form, offset + 2.0, budget, tol)
            f2 = orbit_fate(form, offset - 2.0, budget, tol)
            return _combine_numeric(f1, f2)
    return Verdict(Connectivity.UNDETERMINED, Tier.NONE, "no-enabled-rule-applies")


def _combine_numeric(f1: Fate, f2: Fate) -> Verdict:
    fates = (f1, f2)
    steps = (f1.steps, f2.steps)
    if any(isinstance(f, (AttractedToPoint, AttractedToCycle)) for f in fates):
        return Verdict(
            Connectivity.CONNECTED,
            Tier.NUMERIC,
            "critical-orbit-attracted",
            steps=steps,
            fates=fates,
        )
    if all(isinstance(f, EscapesParabolic) for f in fates):
        certified = all(f.certified for f in fates)  # type: ignore[union-attr]
        return Verdict(
            Connectivity.CANTOR,
            Tier.CERTIFIED if certified else Tier.NUMERIC,
            "both-critical-orbits-escape",
            steps=steps,
            fates=fates,
        )
    return Verdict(
        Connectivity.UNDETERMINED, Tier.NONE, "orbit-evidence-inconclusive", steps=steps, fates=fates
    )


@dataclass(frozen=True)
class RepellingReport:
    samples: int
    seed: int
    min_re_lambda3: float
    violations: int
    worst_pair: tuple[complex, complex]


def verify_repelling(samples: int, seed: int) -> RepellingReport:
    """Monte-Carlo check that two attracting eigenvalues force Re l3 > 1.

    Draws eigenvalue pairs uniformly from the open unit bidisk, computes the
    third eigenvalue from the fixed-point relation in closed form, and counts
    violations of Re l3 > 1. The minimum observed Re l3 and the pair attaining
    it are reported.
    """
    import numpy as np

    from .sampling import unit_disk_pairs

    l1, l2 = unit_disk_pairs(seed, 0, samples)
    # 1/(1-l3) = 1 - 1/(1-l1) - 1/(1-l2), so l3 = 1 - 1/s with s that sum.
    s = 1.0 - 1.0 / (1.0 - l1) - 1.0 / (1.0 - l2)
    l3 = 1.0 - 1.0 / s
    re3 = l3.real
    worst = int(np.argmin(re3))
    violations = int(np.count_nonzero(~(re3 > 1.0)))
    return RepellingReport(
        samples=samples,
        seed=seed,
        min_re_lambda3=float(re3[worst]),
        violations=violations,
        worst_pair=(complex(l1[worst]), complex(l2[worst])),
    )
