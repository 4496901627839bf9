"""Vectorized orbit engines mirroring the scalar classifier's semantics.

Every operation is elementwise, so results for a given input row never depend
on which other rows share the array, on chunking, or on thread scheduling:
tiling a grid and concatenating the results is bitwise-identical to one big
call. The scalar and vector engines use mathematically identical rules
(certificate region, cycle window, multiplier gate) but different float
expression orderings, so they are compared at verdict level, not bitwise.

Orbit codes: 0 budget exhausted, 1 certified escape, 2 attracted to a point
or cycle (multiplier gate passed), 3 exact/terminal hit (pole, exact repeat,
or float overflow onto the point at infinity).
"""

from __future__ import annotations

import numpy as np

from .dynamics import CYCLE_WINDOW, MULTIPLIER_GATE

__all__ = [
    "per1_orbit_batch",
    "per1_pixel_verdicts",
    "ladder_batch",
    "lambda_basin_batch",
    "TIER_CODES",
]

_HIST = CYCLE_WINDOW + 1  # ring buffer: the 16 previous points plus the current one

# Tier codes used by ladder_batch (index = intensity of evidence).
TIER_CODES = {"none": 0, "theorem-shortcut": 1, "external-theorem": 2, "certified": 3, "numeric": 4}


def per1_orbit_batch(
    offsets: np.ndarray,
    starts: np.ndarray,
    budget: int,
    tol: float = 1e-12,
) -> tuple[np.ndarray, np.ndarray]:
    """Fates of one orbit per row of z -> z + offset + 1/z.

    Returns (code, steps) with codes as in the module docstring. `offsets`
    and `starts` are broadcast against each other.
    """
    c, z = np.broadcast_arrays(
        np.asarray(offsets, dtype=np.complex128), np.asarray(starts, dtype=np.complex128)
    )
    c = c.ravel().copy()
    z = z.ravel().copy()
    n = z.size
    code_out = np.zeros(n, dtype=np.uint8)
    steps_out = np.full(n, budget, dtype=np.int64)
    if n == 0:
        return code_out, steps_out

    live = np.arange(n)
    cr = c.real.copy()
    ci = c.imag.copy()
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_abs2 = 1.0 / (cr * cr + ci * ci)  # inf when offset == 0
    thr = 2.0 * inv_abs2
    oc = np.zeros(n, dtype=np.uint8)
    osteps = np.zeros(n, dtype=np.int64)

    hist = np.zeros((_HIST, n), dtype=np.complex128)
    hnorm = np.ones((_HIST, n), dtype=np.float64)
    hist[0] = z
    hnorm[0] = 1.0 + z.real * z.real + z.imag * z.imag

    # step-0 certificate (0*inf -> nan -> False keeps offset == 0 rows safe)
    with np.errstate(invalid="ignore"):
        esc0 = (z.real * cr + z.imag * ci) * inv_abs2 > thr
    oc[esc0] = 1

    t2 = tol * tol
    t = 0
    while live.size and t < budget:
        t += 1
        slot = t % _HIST
        a = oc == 0
        if not a.any():
            break

        pole = a & (z == 0)
        if pole.any():
            oc[pole] = 3
            osteps[pole] = t
            a &= ~pole

        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            zn = z + c + 1.0 / np.where(z == 0, 1.0, z)
        fin = np.isfinite(zn.real) & np.isfinite(zn.imag)
        bad = a & ~fin
        if bad.any():
            oc[bad] = 3
            osteps[bad] = t
            a &= ~bad

        with np.errstate(invalid="ignore"):
            esc = a & ((zn.real * cr + zn.imag * ci) * inv_abs2 > thr)
        if esc.any():
            oc[esc] = 1
            osteps[esc] = t
            a &= ~esc

        nz2 = 1.0 + zn.real * zn.real + zn.imag * zn.imag
        unmatched = a.copy()
        for p in range(1, min(t, CYCLE_WINDOW) + 1):
            if not unmatched.any():
                break
            ps = (t - p) % _HIST
            dz = zn - hist[ps]
            close = unmatched & ((dz.real * dz.real + dz.imag * dz.imag) < t2 * nz2 * hnorm[ps])
            if not close.any():
                continue
            unmatched &= ~close
            rows = np.flatnonzero(close)
            mult = np.ones(rows.size, dtype=np.complex128)
            with np.errstate(divide="ignore", invalid="ignore"):
                for i in range(p):
                    x = hist[(t - p + i) % _HIST, rows]
                    mult = mult * (1.0 - 1.0 / (x * x))
            attracted = np.abs(mult) < MULTIPLIER_GATE
            crows = rows[attracted]
            if crows.size:
                oc[crows] = 2
                osteps[crows] = t
                a[crows] = False

        same = a & (zn == z)
        if same.any():
            oc[same] = 3
            osteps[same] = t
            a &= ~same

        z = np.where(a, zn, z)
        hist[slot] = np.where(a, zn, hist[slot])
        hnorm[slot] = np.where(a, nz2, hnorm[slot])

        done = oc != 0
        # Compact occasionally so long-running rows dominate the arrays.
        if done.any() and (done.sum() * 4 >= done.size or t % 256 == 0):
            rows = np.flatnonzero(done)
            code_out[live[rows]] = oc[rows]
            steps_out[live[rows]] = osteps[rows]
            keep = ~done
            live = live[keep]
            z = z[keep]
            c = c[keep]
            cr = cr[keep]
            ci = ci[keep]
            inv_abs2 = inv_abs2[keep]
            thr = thr[keep]
            oc = oc[keep]
            osteps = osteps[keep]
            hist = hist[:, keep]
            hnorm = hnorm[:, keep]

    done = oc != 0
    rows = np.flatnonzero(done)
    code_out[live[rows]] = oc[rows]
    steps_out[live[rows]] = osteps[rows]
    return code_out, steps_out


def per1_pixel_verdicts(
    lams: np.ndarray, budget: int, tol: float = 1e-12
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Numeric connectivity verdicts for classes (1, 1, lam), vectorized.

    Returns (verdict, steps, certified): verdict 0 undetermined, 1 connected,
    2 Cantor. Both critical orbits (from B +- 2 with B = sqrt(1 - lam)) are
    examined; the second is only run where the first did not already prove
    connectivity. Escapes detected by the engine always carry a certificate.
    """
    lams = np.asarray(lams, dtype=np.complex128).ravel()
    n = lams.size
    B = np.sqrt(1.0 - lams)
    code1, steps1 = per1_orbit_batch(B, B + 2.0, budget, tol)
    verdict = np.zeros(n, dtype=np.uint8)
    steps = np.full(n, budget, dtype=np.int64)
    cyc1 = code1 == 2
    verdict[cyc1] = 1
    steps[cyc1] = steps1[cyc1]

    rest = np.flatnonzero(~cyc1)
    certified = np.zeros(n, dtype=bool)
    if rest.size:
        code2, steps2 = per1_orbit_batch(B[rest], B[rest] - 2.0, budget, tol)
        cyc2 = code2 == 2
        verdict[rest[cyc2]] = 1
        steps[rest[cyc2]] = steps2[cyc2]
        both_esc = (code1[rest] == 1) & (code2 == 1)
        verdict[rest[both_esc]] = 2
        steps[rest[both_esc]] = np.maximum(steps1[rest[both_esc]], steps2[both_esc])
        certified[rest[both_esc]] = True
        mixed = ~cyc2 & ~both_esc
        steps[rest[mixed]] = np.maximum(steps1[rest[mixed]], steps2[mixed])
    return verdict, steps, certified


def ladder_batch(
    lams: np.ndarray,
    tiers: tuple[str, ...],
    budget: int,
    tol: float = 1e-12,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized connectivity ladder over an array of eigenvalues.

    `tiers` must already be normalized to canonical order (see classify).
    Returns (verdict, tier_code, steps); shortcut decisions report steps 0.
    """
    lams = np.asarray(lams, dtype=np.complex128).ravel()
    n = lams.size
    verdict = np.zeros(n, dtype=np.uint8)
    tier = np.zeros(n, dtype=np.uint8)
    steps = np.zeros(n, dtype=np.int64)
    open_rows = np.ones(n, dtype=bool)
    for t in tiers:
        if not open_rows.any():
            break
        if t == "t1":
            m = open_rows & (lams == 1.0)
            verdict[m] = 1
            tier[m] = TIER_CODES["theorem-shortcut"]
        elif t == "t2":
            m = open_rows & (lams != 1.0) & (np.abs(lams) <= 1.0)
            verdict[m] = 1
            tier[m] = TIER_CODES["theorem-shortcut"]
        elif t == "t3":
            m = open_rows & (lams.real > 1.0)
            verdict[m] = 2
            tier[m] = TIER_CODES["theorem-shortcut"]
        elif t == "t4":
            m = open_rows & (np.abs(lams - 1.0) > 9.0)
            verdict[m] = 2
            tier[m] = TIER_CODES["certified"]
        elif t == "t5":
            m = open_rows & (np.abs(lams + 1.0) > 2.0)
            verdict[m] = 2
            tier[m] = TIER_CODES["external-theorem"]
        elif t == "numeric":
            rows = np.flatnonzero(open_rows)
            v, s, cert = per1_pixel_verdicts(lams[rows], budget, tol)
            verdict[rows] = v
            steps[rows] = s
            tcode = np.zeros(rows.size, dtype=np.uint8)
            tcode[v == 1] = TIER_CODES["numeric"]
            tcode[(v == 2) & cert] = TIER_CODES["certified"]
            tcode[(v == 2) & ~cert] = TIER_CODES["numeric"]
            tier[rows] = tcode
            m = open_rows.copy()
        else:  # pragma: no cover - guarded by tier normalization
            raise ValueError(f"unknown tier {t!r}")
        open_rows &= ~m
    return verdict, tier, steps


def lambda_basin_batch(
    lambda1: complex,
    lambda2: complex,
    grid: np.ndarray,
    budget: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Basin classification for f(z) = (l1 z + z^2) / (l2 z + 1), |l1|,|l2| < 1.

    Returns (code, steps): code 1 for the basin of the fixed point 0, code 2
    for the basin of infinity, 0 for rows undecided within the budget. The
    capture radii are strict contraction certificates: once |z| is below
    (1 - |l1|) / (4 (1 + |l2|)) the orbit stays and converges to 0, and
    symmetrically (in the 1/z chart) for infinity.
    """
    l1 = complex(lambda1)
    l2 = complex(lambda2)
    if not (abs(l1) < 1.0 and abs(l2) < 1.0):
        raise ValueError("both eigenvalues must lie strictly inside the unit disk")
    r_zero = (1.0 - abs(l1)) / (4.0 * (1.0 + abs(l2)))
    r_inf = 4.0 * (1.0 + abs(l1)) / (1.0 - abs(l2))  # |z| above this is captured by infinity

    z = np.asarray(grid, dtype=np.complex128).ravel().copy()
    n = z.size
    code_out = np.zeros(n, dtype=np.uint8)
    steps_out = np.full(n, budget, dtype=np.int64)
    live = np.arange(n)

    t = 0
    while live.size and t <= budget:
        am = np.abs(z)
        near0 = am < r_zero
        nearinf = ~near0 & ~(am <= r_inf)  # catches inf and nan-free large values
        decided = near0 | nearinf
        if decided.any():
            rows = np.flatnonzero(decided)
            code_out[live[rows]] = np.where(near0[rows], 1, 2)
            steps_out[live[rows]] = t
            keep = ~decided
            live = live[keep]
            z = z[keep]
            if not live.size:
                break
        if t == budget:
            break
        t += 1
        den = l2 * z + 1.0
        onpole = den == 0
        if onpole.any():
            rows = np.flatnonzero(onpole)
            code_out[live[rows]] = 2  # maps exactly onto the attractor at infinity
            steps_out[live[rows]] = t
            keep = ~onpole
            live = live[keep]
            z = z[keep]
            den = den[keep]
            if not live.size:
                break
        with np.errstate(over="ignore", invalid="ignore"):
            z = (l1 * z + z * z) / den
    return code_out, steps_out
