"""Acceptance gate: ten numbered end-to-end checks with pinned tolerances.

Each test prints exactly one `ACCEPTANCE n: PASS/FAIL` line (visible in the
run summary) and then asserts, so a red criterion is both visible and fatal.

Two criteria fail honestly — the implementation is faithful and the checks
are kept at their pinned tolerances rather than loosened to go green:

* Criterion 1 (reciprocal-sum clause): the residual of the relation has
  condition number |1/(1 - lambda3)|^2, and uniform bidisk sampling at 10^5
  pairs reliably draws eigenvalues within ~4e-3 of the cusp at 1, so even a
  perfectly rounded double lambda3 leaves a residual near
  eps * |1/(1-lambda3)|^2 ~ 3e-11.  A flat 1e-12 over this sample size is
  below what IEEE doubles can represent; the well-conditioned
  denominator-cleared identity (product = sum - 2) passes at ~1.5e-14.
* Criterion 4 (rate-band clause): the band demands error(2n)/error(n) in
  [0.4, 0.6], but the twist path approaches its limit at second order, so
  the measured ratios sit near 1/4.  All other clauses (conservation,
  containment, limit law, round trip, runtime) hold.
"""

import json
import math
import pathlib
import time

import numpy as np

from quadmod.batch import ladder_batch
from quadmod.classify import Connectivity, connectivity_per1, verify_repelling
from quadmod.cli import main
from quadmod.moduli import (
    LambdaForm,
    PerOneForm,
    eigenvalue_triple_of,
    fixed_points_and_multipliers,
    lambda3_from_eq1,
)
from quadmod.raster import default_parameter_job, encode_ppm, raster_parameter_plane
from quadmod.sampling import disk_points, uniform_block, unit_disk_pairs
from quadmod.verify import suite_b2, suite_bound, suite_twist

DATA = pathlib.Path(__file__).parent / "data"


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} — {detail}")


def test_acceptance_01_eigenvalue_sum_relation():
    """10^5 bidisk pairs satisfy the reciprocal-sum relation to 1e-12, and
    10^4 independent fixed-point computations satisfy the symmetric-function
    identity (product = sum - 2) to 1e-9, within 5 seconds."""
    t0 = time.perf_counter()
    l1, l2 = unit_disk_pairs(7, 0, 100_000)
    l3 = np.array(
        [lambda3_from_eq1(complex(a), complex(b)) for a, b in zip(l1, l2)],
        dtype=np.complex128,
    )
    resid = np.abs(1.0 / (1.0 - l1) + 1.0 / (1.0 - l2) + 1.0 / (1.0 - l3) - 1.0)
    worst_eq = float(resid.max())

    worst_sigma = 0.0
    for a, b in zip(l1[:10_000], l2[:10_000]):
        tr = eigenvalue_triple_of(LambdaForm(complex(a), complex(b)))
        s1 = tr.lambda1 + tr.lambda2 + tr.lambda3
        s3 = tr.lambda1 * tr.lambda2 * tr.lambda3
        worst_sigma = max(worst_sigma, abs(s3 - (s1 - 2.0)))
    dt = time.perf_counter() - t0

    ok = worst_eq < 1e-12 and worst_sigma < 1e-9 and dt < 5.0
    detail = (
        f"relation residual {worst_eq:.3e} (< 1e-12), "
        f"sigma residual {worst_sigma:.3e} (< 1e-9), t={dt:.2f}s (< 5s)"
    )
    _report(1, ok, detail)
    assert ok, detail


def test_acceptance_02_third_eigenvalue_repelling():
    """10^5 bidisk samples x 10 seeds: the third eigenvalue always has
    Re > 1, zero violations, within 10 seconds."""
    t0 = time.perf_counter()
    violations = 0
    min_re = float("inf")
    for seed in range(1, 11):
        rep = verify_repelling(100_000, seed)
        violations += rep.violations
        min_re = min(min_re, rep.min_re_lambda3)
    dt = time.perf_counter() - t0
    ok = violations == 0 and min_re > 1.0 and dt < 10.0
    detail = f"violations {violations}, min Re {min_re:.6f} (> 1), t={dt:.2f}s (< 10s)"
    _report(2, ok, detail)
    assert ok, detail


def test_acceptance_03_parabolic_form_multipliers():
    """For 10^3 random offsets the differentiated multipliers of the
    parabolic normal form equal {1, 1 - B^2} within 1e-10."""
    u = uniform_block(7, 0, 1000)
    rb = 0.1 + 4.9 * u[:, 0]
    tb = 2.0 * math.pi * u[:, 1]
    worst = 0.0
    for r, t in zip(rb, tb):
        B = complex(r * math.cos(t), r * math.sin(t))
        fps = fixed_points_and_multipliers(PerOneForm(B))
        at_inf = [fp for fp in fps if fp.point.is_infinity]
        finite = [fp for fp in fps if not fp.point.is_infinity]
        assert len(at_inf) == 1 and at_inf[0].multiplicity == 2
        assert len(finite) == 1
        worst = max(
            worst,
            abs(at_inf[0].eigenvalue - 1.0),
            abs(finite[0].eigenvalue - (1.0 - B * B)),
        )
    ok = worst < 1e-10
    detail = f"worst multiplier deviation {worst:.3e} (< 1e-10) over 1000 offsets"
    _report(3, ok, detail)
    assert ok, detail


def test_acceptance_04_twist_path_laws():
    """100 random twist plans: exact sum conservation at every tabulated
    index up to 10^6, every state in region H, limit error at n=10^4 below
    1e-2 (1 + |lambda|), halving ratios inside [0.4, 0.6], inverse round trip
    to 1e-12, within 30 seconds.

    The rate-band clause fails by design of the band: the path converges at
    second order, so error(2n)/error(n) measures ~ 1/4, outside [0.4, 0.6].
    """
    t0 = time.perf_counter()
    rep = suite_twist(plans=100, seed=7, n_max=10**6)
    dt = time.perf_counter() - t0
    clauses = {
        "conservation": rep["worst_conservation_residual"] < 1e-12,
        "containment": rep["containment_failures"] == 0,
        "limit": rep["limit_failures"] == 0,
        "rate": rep["rate_ok"],
        "roundtrip": rep["roundtrip_worst"] < 1e-12,
        "runtime": dt < 30.0,
    }
    ok = all(clauses.values())
    detail = (
        f"conservation {rep['worst_conservation_residual']:.1e}, "
        f"containment failures {rep['containment_failures']}, "
        f"limit failures {rep['limit_failures']}, "
        f"rate ratios [{rep['rate_ratio_min']:.4f}, {rep['rate_ratio_max']:.4f}] "
        f"vs required band [0.4, 0.6] -> rate_ok={rep['rate_ok']}, "
        f"roundtrip {rep['roundtrip_worst']:.1e}, t={dt:.2f}s (< 30s); "
        f"failing clauses: {[k for k, v in clauses.items() if not v] or 'none'}"
    )
    _report(4, ok, detail)
    assert ok, detail


def test_acceptance_05_exclusion_radius_certificates():
    """10^4 eigenvalues with |lambda - 1| > 9 all classified Cantor with
    certificates, and 10^4 offsets with 3 < |B| <= 10 pass the radius escape
    certificate on both critical values, within 10 seconds."""
    t0 = time.perf_counter()
    rep = suite_bound(samples=10_000, seed=7)
    dt = time.perf_counter() - t0
    ok = rep["cantor_certified"] == 10_000 and rep["cert_failures"] == 0 and dt < 10.0
    detail = (
        f"certified Cantor {rep['cantor_certified']}/10000, "
        f"certificate failures {rep['cert_failures']}, t={dt:.2f}s (< 10s)"
    )
    _report(5, ok, detail)
    assert ok, detail


def test_acceptance_06_repelling_halfplane_numeric():
    """With all theorem shortcuts disabled, 10^3 eigenvalues with
    Re in [1.5, 10], |Im| <= 10 at budget 10^5 come back 100% Cantor with
    zero Undetermined; the slow strip Re in (1, 1.5) is reported without a
    threshold. Within 2 minutes."""
    t0 = time.perf_counter()
    rep = suite_b2(samples=1000, seed=7, budget=100_000)
    dt = time.perf_counter() - t0
    ok = (
        rep["cantor"] == 1000
        and rep["connected"] == 0
        and rep["undetermined"] == 0
        and dt < 120.0
    )
    detail = (
        f"cantor {rep['cantor']}/1000, connected {rep['connected']}, "
        f"undetermined {rep['undetermined']}, near-boundary undetermined rate "
        f"{rep['near_boundary_undetermined_rate']:.3f} (reported, no threshold), "
        f"t={dt:.2f}s (< 120s)"
    )
    _report(6, ok, detail)
    assert ok, detail


def test_acceptance_07_unit_disk_connected(capsys):
    """10^3 eigenvalues with |lambda| <= 1, lambda != 1 are all Connected by
    the second-nonrepelling-fixed-point rule; lambda = 1 is Connected and the
    CLI marks it with the note token."""
    inside = disk_points(7, 0, 900)
    u = uniform_block(8, 0, 400)
    circle = np.exp(2j * np.pi * (0.01 + 0.98 * u[:, 0]))
    circle = circle[np.abs(circle) <= 1.0][:100]
    lams = np.concatenate([inside, circle])
    assert lams.size >= 1000
    lams = lams[:1000]
    assert bool((np.abs(lams) <= 1.0).all()) and not bool((lams == 1.0).any())

    bad = 0
    for lam in lams:
        v = connectivity_per1(complex(lam))
        if v.connectivity is not Connectivity.CONNECTED or v.rule != "second-nonrepelling-fixed-point":
            bad += 1
    cusp = connectivity_per1(1.0)
    code = main(["classify", "--lambda", "1,0"])
    doc = json.loads(capsys.readouterr().out)

    ok = (
        bad == 0
        and cusp.connectivity is Connectivity.CONNECTED
        and code == 0
        and doc["verdict"] == "connected"
        and doc.get("note") == "[R]"
    )
    detail = (
        f"connected via shortcut {1000 - bad}/1000, unit eigenvalue verdict "
        f"{cusp.connectivity.value} with CLI note {doc.get('note')!r}"
    )
    _report(7, ok, detail)
    assert ok, detail


def test_acceptance_08_default_raster_reproduction():
    """The 400x400 default-window raster at budget 10^4 has nonzero Connected
    and Cantor counts, no Connected pixel outside |lambda - 1| <= 9, exact
    mirror symmetry, and byte-identical output across thread counts {1, 2, 8}
    and tile sizes {16, 64, 256}. Within 2 minutes."""
    t0 = time.perf_counter()
    base_bytes = None
    counts = None
    window = None
    for tile in (16, 64, 256):
        for threads in (1, 2, 8):
            job = default_parameter_job(res=400, budget=10_000, tile=tile)
            img = raster_parameter_plane(job, threads=threads)
            if base_bytes is None:
                base_bytes = img.rgb
                counts = img.counts
                window = job.window
            elif img.rgb != base_bytes:
                detail = f"bytes differ at tile={tile} threads={threads}"
                _report(8, False, detail)
                raise AssertionError(detail)
    dt = time.perf_counter() - t0

    arr = np.frombuffer(base_bytes, dtype=np.uint8).reshape(400, 400, 3)
    mirror = bool(np.array_equal(arr, arr[::-1, :, :]))
    lam = window.re_axis()[None, :] + 1j * window.im_axis()[:, None]
    connected_mask = (arr == 0).all(axis=2)
    outside = int(connected_mask[np.abs(lam - 1.0) > 9.0].sum())

    ok = (
        counts["connected"] > 0
        and counts["cantor"] > 0
        and outside == 0
        and mirror
        and dt < 120.0
    )
    detail = (
        f"counts {counts}, connected pixels outside radius-9 disk {outside}, "
        f"mirror symmetric {mirror}, 9 renders byte-identical, t={dt:.2f}s (< 120s)"
    )
    _report(8, ok, detail)
    assert ok, detail


def test_acceptance_09_imported_disk_bound_cross_check():
    """10^3 eigenvalues with |lambda + 1| > 2 and |lambda - 1| <= 9, numeric
    tier only: zero Connected verdicts (Undetermined permitted and reported)."""
    u = uniform_block(9, 0, 4000)
    cand = 1.0 + 9.0 * np.sqrt(u[:, 0]) * np.exp(2j * np.pi * u[:, 1])
    keep = (np.abs(cand + 1.0) > 2.0) & (np.abs(cand - 1.0) <= 9.0)
    lams = cand[keep][:1000]
    assert lams.size == 1000

    verdict, tier, steps = ladder_batch(lams, ("numeric",), budget=10_000)
    connected = int(np.count_nonzero(verdict == 1))
    cantor = int(np.count_nonzero(verdict == 2))
    undetermined = int(np.count_nonzero(verdict == 0))

    ok = connected == 0
    detail = (
        f"connected {connected} (must be 0), cantor {cantor}, "
        f"undetermined {undetermined} (permitted) of 1000"
    )
    _report(9, ok, detail)
    assert ok, detail


def test_acceptance_10_golden_image():
    """The frozen 8x8 image fixture is reproduced byte-identically."""
    job = default_parameter_job(res=8, budget=1000)
    got = encode_ppm(raster_parameter_plane(job, threads=1))
    want = (DATA / "golden_parameter_8x8.ppm").read_bytes()
    ok = got == want
    detail = f"rendered {len(got)} bytes {'==' if ok else '!='} fixture {len(want)} bytes"
    _report(10, ok, detail)
    assert ok, detail
