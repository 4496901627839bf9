"""Command-line interface: classify, twist, raster, and verify subcommands.

Outputs are machine-readable and deterministic: JSON reports use canonical
serialization (fixed key order, 17-significant-digit scientific floats), CSV
tables follow RFC 4180, images are binary PPM with a JSON sidecar. Repeating
an invocation with the same flags produces byte-identical files and stdout.

Exit codes: 0 success (including an Undetermined verdict), 1 usage or
input-domain error, 2 numeric failure (non-finite intermediate), 3 verify
suite failure.
"""

from __future__ import annotations

import argparse
import csv
import re
import sys
import time
from typing import Optional, Sequence

from .classify import (
    Connectivity,
    Tier,
    Verdict,
    _normalize_tiers,
    connectivity_per1,
    region_membership,
)
from .dynamics import DEFAULT_BUDGET, EscapeCertificate
from .errors import (
    AmbiguousNearBoundary,
    DegenerateCorrespondence,
    DegenerateFixedPoints,
    InconsistentTriple,
    InvalidForm,
    NotInB2,
    PreconditionFailed,
    UnsupportedForm,
    ZeroMultiplier,
)
from .jsonfmt import canonical_json
from .moduli import LambdaForm, PerOneForm
from .raster import (
    DEFAULT_DYNAMICAL_WINDOW,
    DEFAULT_PARAMETER_WINDOW,
    RasterJob,
    Window,
    encode_ppm,
    job_to_dict,
    mobius_conjugate_symmetric,
    raster_dynamical_plane,
    raster_parameter_plane,
)
from .twist import (
    inverse_twist,
    plan_from_multipliers,
    sum_conservation_residual,
    twist_limit_error,
    twist_state,
)
from .verify import SUITE_NAMES, run_suite

__all__ = ["main", "build_parser"]

_USAGE_ERRORS = (
    InvalidForm,
    ZeroMultiplier,
    NotInB2,
    InconsistentTriple,
    DegenerateFixedPoints,
    UnsupportedForm,
    AmbiguousNearBoundary,
    DegenerateCorrespondence,
)
_NUMERIC_ERRORS = (PreconditionFailed, OverflowError, ZeroDivisionError, FloatingPointError)

_REGION_EPS = 1e-9


# Values like "-15,0" or "-9,11,-10,10" must parse as flag values, not as
# option strings; argparse's stock matcher only covers bare numbers.
_NEGATIVE_VALUE = re.compile(r"^-\d[\d.,eE+-]*$")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits 1 (not 2) on usage errors and accepts
    negative complex/window values."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = _NEGATIVE_VALUE

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _complex_flag(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        re, im = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 're,im' floats, got {text!r}") from exc
    if not (re == re and im == im and abs(re) != float("inf") and abs(im) != float("inf")):
        raise argparse.ArgumentTypeError("complex flag components must be finite")
    return complex(re, im)


def _window_flag(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected 're_min,re_max,im_min,im_max', got {text!r}")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"window components must be floats, got {text!r}") from exc
    return vals  # type: ignore[return-value]


def _res_flag(text: str) -> tuple[int, int]:
    try:
        if "x" in text:
            w, h = text.split("x")
            return (int(w), int(h))
        n = int(text)
        return (n, n)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'N' or 'WxH', got {text!r}") from exc


def _tiers_flag(text: str) -> tuple[str, ...]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise argparse.ArgumentTypeError("empty tier list")
    return tuple(names)


def _cpair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def build_parser() -> _Parser:
    parser = _Parser(
        prog="quadmod",
        description="Moduli-space computations for quadratic rational maps: "
        "region membership, Julia-set connectivity, twist paths, rasters.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser(
        "classify",
        help="classify a map class: moduli region and Julia-set connectivity",
        description="Classify a map class given either the slice eigenvalue "
        "(--lambda: the class (1, 1, lambda)) or a fixed-point eigenvalue pair "
        "(--l1/--l2). Prints a canonical JSON report to stdout.",
    )
    p.add_argument("--lambda", dest="lam", type=_complex_flag, metavar="RE,IM",
                   help="slice eigenvalue: classify the class (1, 1, lambda)")
    p.add_argument("--l1", type=_complex_flag, metavar="RE,IM",
                   help="first fixed-point eigenvalue (with --l2)")
    p.add_argument("--l2", type=_complex_flag, metavar="RE,IM",
                   help="second fixed-point eigenvalue (with --l1)")
    p.add_argument("--tiers", type=_tiers_flag, default=None, metavar="T1,T2,...",
                   help="connectivity rules to enable, from t1 t2 t3 t4 t5 numeric "
                   "(default: all but t5)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, metavar="N",
                   help=f"iteration budget for numeric orbits (default {DEFAULT_BUDGET})")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser(
        "twist",
        help="tabulate a twist path of eigenvalue states as CSV",
        description="Tabulate the eigenvalue states along a twist path, either "
        "from a pair of attracting multipliers (--l1/--l2, principal logarithm "
        "branches) or from a limit class with Re lambda > 1 (--target-lambda). "
        "Writes RFC-4180 CSV with one row per tabulated index.",
    )
    p.add_argument("--l1", type=_complex_flag, metavar="RE,IM",
                   help="first attracting multiplier (with --l2)")
    p.add_argument("--l2", type=_complex_flag, metavar="RE,IM",
                   help="second attracting multiplier (with --l1)")
    p.add_argument("--target-lambda", dest="target", type=_complex_flag, metavar="RE,IM",
                   help="limit eigenvalue with Re > 1; the symmetric path converging to it")
    p.add_argument("--n-max", dest="n_max", type=int, default=10_000, metavar="N",
                   help="largest twist index to tabulate (default 10000)")
    p.add_argument("--geometric", action="store_true",
                   help="tabulate only 0 and powers of two up to n-max "
                   "(default: every integer; use this for large n-max)")
    p.add_argument("-o", "--output", default=None, metavar="PATH",
                   help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser(
        "raster",
        help="render a parameter-plane or dynamical-plane image",
        description="Render an image as binary PPM plus a JSON sidecar "
        "(same path + '.json') holding the job description and pixel counts. "
        "parameter mode maps the connectedness locus of the slice (1, 1, lambda); "
        "dynamical mode renders basins of a two-eigenvalue form (--l1/--l2, both "
        "attracting, optionally conjugated via --symmetric-r) or escape times of "
        "the parabolic form (--offset).",
    )
    p.add_argument("--mode", choices=("parameter", "dynamical"), default="parameter",
                   help="what to render (default parameter)")
    p.add_argument("--window", type=_window_flag, default=None, metavar="RMIN,RMAX,IMIN,IMAX",
                   help="complex-plane extents (default: mode-specific)")
    p.add_argument("--res", type=_res_flag, default=(400, 400), metavar="N|WxH",
                   help="pixel resolution (default 400)")
    p.add_argument("--budget", type=int, default=None, metavar="N",
                   help="iteration budget per pixel (default: 10000 parameter, 1000 dynamical)")
    p.add_argument("--tiers", type=_tiers_flag, default=None, metavar="T1,T2,...",
                   help="connectivity rules for parameter mode (default: all but t5)")
    p.add_argument("--tile", type=int, default=64, metavar="N",
                   help="tile edge in pixels (default 64); output is tile-independent")
    p.add_argument("--threads", type=int, default=None, metavar="N",
                   help="worker threads (default: QUADMOD_THREADS or machine parallelism); "
                   "output is thread-independent")
    p.add_argument("--l1", type=_complex_flag, metavar="RE,IM",
                   help="dynamical mode: first eigenvalue of a two-eigenvalue form")
    p.add_argument("--l2", type=_complex_flag, metavar="RE,IM",
                   help="dynamical mode: second eigenvalue of a two-eigenvalue form")
    p.add_argument("--offset", type=_complex_flag, metavar="RE,IM",
                   help="dynamical mode: translation constant of the parabolic form")
    p.add_argument("--symmetric-r", dest="symmetric_r", type=float, default=None, metavar="R",
                   help="dynamical mode with --l1/--l2: conjugate so the finite fixed "
                   "points sit at -R and -1/R and the third at 1")
    p.add_argument("-o", "--output", default="raster.ppm", metavar="PATH",
                   help="PPM output path (default raster.ppm); sidecar at PATH + '.json'")
    p.set_defaults(func=cmd_raster)

    p = sub.add_parser(
        "verify",
        help="run a randomized verification suite",
        description="Run one of the named verification suites and print its "
        "canonical JSON report. Exits 0 when the suite passes, 3 when it fails "
        "(the report then carries the first counterexample).",
    )
    p.add_argument("--suite", choices=SUITE_NAMES, required=True,
                   help="which battery to run")
    p.add_argument("--samples", type=int, default=None, metavar="N",
                   help="sample count (default: suite-specific)")
    p.add_argument("--seed", type=int, default=7, metavar="N",
                   help="base seed for the counter-based sampler (default 7)")
    p.add_argument("--plans", type=int, default=None, metavar="N",
                   help="twist suite: number of random twist plans (default 100)")
    p.add_argument("--budget", type=int, default=None, metavar="N",
                   help="b2 suite: per-orbit iteration budget (default 100000)")
    p.set_defaults(func=cmd_verify)

    return parser


# ---------------------------------------------------------------------------
# classify


def _certificate_dict(c: EscapeCertificate) -> dict:
    return {
        "kind": c.kind,
        "offset": _cpair(c.offset),
        "start": _cpair(c.start),
        "re_over_offset": c.re_over_offset,
        "threshold": c.threshold,
        "min_gain": c.min_gain,
    }


def _pair_verdict(
    tag: str, l1: complex, l2: complex, tiers: Optional[Sequence[str]], budget: int
) -> tuple[Verdict, Optional[complex]]:
    """Connectivity for a pair-specified class, routed by its region tag.

    Returns the verdict and, when the class lies in the slice fixing
    eigenvalue 1, the slice eigenvalue the ladder ran on.
    """
    if tag == "H":
        return (
            Verdict(Connectivity.CONNECTED, Tier.THEOREM_SHORTCUT, "both-fixed-points-attracting"),
            None,
        )
    if tag == "B0":
        return (
            Verdict(
                Connectivity.CONNECTED, Tier.THEOREM_SHORTCUT, "second-nonrepelling-fixed-point"
            ),
            None,
        )
    if tag in ("B1", "B2", "B2closureOnly", "Per1of1"):
        # The completed triple is (1, 1, mu); run the slice ladder on mu.
        if abs(l1 - 1.0) <= _REGION_EPS:
            mu = l2
        else:
            mu = l1
        if abs(mu - 1.0) <= _REGION_EPS:
            mu = 1.0 + 0j
        return connectivity_per1(mu, tiers, budget), mu
    return (
        Verdict(Connectivity.UNDETERMINED, Tier.NONE, "no-connectivity-rule-for-this-region"),
        None,
    )


def cmd_classify(args: argparse.Namespace) -> int:
    pair_given = args.l1 is not None or args.l2 is not None
    if (args.lam is None) == (not pair_given):
        print("error: give exactly one input form: --lambda, or --l1 with --l2", file=sys.stderr)
        return 1
    if pair_given and (args.l1 is None or args.l2 is None):
        print("error: --l1 and --l2 must be given together", file=sys.stderr)
        return 1
    tiers = list(_normalize_tiers(args.tiers))

    if args.lam is not None:
        lam = args.lam
        label = region_membership((1.0 + 0j, 1.0 + 0j, lam))
        verdict = connectivity_per1(lam, args.tiers, args.budget)
        note = lam == 1.0
        inp: dict = {"lambda": _cpair(lam), "tiers": tiers, "budget": args.budget}
    else:
        label = region_membership((args.l1, args.l2))
        verdict, mu = _pair_verdict(label.tag, args.l1, args.l2, args.tiers, args.budget)
        note = mu == 1.0
        inp = {"l1": _cpair(args.l1), "l2": _cpair(args.l2), "tiers": tiers, "budget": args.budget}

    out = {
        "schema": "quadmod-classify/1",
        "input": inp,
        "region": label.tag,
        "verdict": verdict.connectivity.value,
        "tier": verdict.tier.value,
        "rule": verdict.rule,
        "steps": list(verdict.steps),
        "certificates": [_certificate_dict(c) for c in verdict.certificates],
    }
    if label.near:
        out["region_near"] = list(label.near)
    if note:
        out["note"] = "[R]"
    print(canonical_json(out))
    return 0


# ---------------------------------------------------------------------------
# twist


_TWIST_COLUMNS = (
    "n",
    "re_lambda1n", "im_lambda1n",
    "re_lambda2n", "im_lambda2n",
    "re_lambda3n", "im_lambda3n",
    "error", "sum_residual",
    "re_limit_lambda", "im_limit_lambda",
)


def _fmt(x: float) -> str:
    from .jsonfmt import format_float

    return format_float(float(x))


def cmd_twist(args: argparse.Namespace) -> int:
    pair_given = args.l1 is not None or args.l2 is not None
    if (args.target is None) == (not pair_given):
        print(
            "error: give exactly one input mode: --target-lambda, or --l1 with --l2",
            file=sys.stderr,
        )
        return 1
    if pair_given and (args.l1 is None or args.l2 is None):
        print("error: --l1 and --l2 must be given together", file=sys.stderr)
        return 1
    if args.n_max < 0:
        print("error: --n-max must be nonnegative", file=sys.stderr)
        return 1

    if args.target is not None:
        plan = inverse_twist(args.target)
    else:
        plan = plan_from_multipliers(args.l1, args.l2)

    if args.geometric:
        grid = [0, 1]
        while grid[-1] * 2 <= args.n_max:
            grid.append(grid[-1] * 2)
        if grid[-1] != args.n_max:
            grid.append(args.n_max)
        grid = sorted(set(n for n in grid if n <= args.n_max))
    else:
        grid = list(range(args.n_max + 1))

    lim = plan.limit_lambda

    def write_rows(fh) -> None:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(_TWIST_COLUMNS)
        for n in grid:
            st = twist_state(plan, n)
            t = st.triple
            w.writerow(
                [str(n)]
                + [
                    _fmt(v)
                    for v in (
                        t.lambda1.real, t.lambda1.imag,
                        t.lambda2.real, t.lambda2.imag,
                        t.lambda3.real, t.lambda3.imag,
                        twist_limit_error(plan, n),
                        sum_conservation_residual(plan, n),
                        lim.real, lim.imag,
                    )
                ]
            )

    if args.output is None:
        write_rows(sys.stdout)
    else:
        with open(args.output, "w", newline="", encoding="ascii") as fh:
            write_rows(fh)
    return 0


# ---------------------------------------------------------------------------
# raster


def cmd_raster(args: argparse.Namespace) -> int:
    res_x, res_y = args.res
    form_flags = [f for f, v in (("--l1", args.l1), ("--l2", args.l2), ("--offset", args.offset))
                  if v is not None]
    if args.symmetric_r is not None:
        form_flags.append("--symmetric-r")

    if args.mode == "parameter":
        if form_flags:
            print(f"error: {', '.join(form_flags)} only apply to --mode dynamical",
                  file=sys.stderr)
            return 1
        budget = args.budget if args.budget is not None else 10_000
        if args.window is None:
            base = DEFAULT_PARAMETER_WINDOW
            window = Window(base.center, base.width, base.height, res_x, res_y)
        else:
            window = Window.from_extents(*args.window, res_x, res_y)
        job = RasterJob(
            mode="parameter",
            window=window,
            tiers=_normalize_tiers(args.tiers),
            budget=budget,
            tile=args.tile,
        )
        t0 = time.perf_counter()
        image = raster_parameter_plane(job, threads=args.threads)
        wall = time.perf_counter() - t0
    else:
        if args.tiers is not None:
            print("error: --tiers only applies to --mode parameter", file=sys.stderr)
            return 1
        if args.offset is not None and (args.l1 is not None or args.l2 is not None):
            print("error: give either --offset or --l1/--l2, not both", file=sys.stderr)
            return 1
        if args.offset is not None:
            if args.symmetric_r is not None:
                print("error: --symmetric-r needs --l1/--l2", file=sys.stderr)
                return 1
            form = PerOneForm(args.offset)
        elif args.l1 is not None and args.l2 is not None:
            lform = LambdaForm(args.l1, args.l2)
            form = (
                mobius_conjugate_symmetric(lform, args.symmetric_r)
                if args.symmetric_r is not None
                else lform
            )
        else:
            print("error: dynamical mode needs --offset or --l1 with --l2", file=sys.stderr)
            return 1
        budget = args.budget if args.budget is not None else 1000
        if args.window is None:
            base = DEFAULT_DYNAMICAL_WINDOW
            window = Window(base.center, base.width, base.height, res_x, res_y)
        else:
            window = Window.from_extents(*args.window, res_x, res_y)
        job = RasterJob(
            mode="dynamical", window=window, tiers=(), budget=budget, tile=args.tile, form=form
        )
        t0 = time.perf_counter()
        image = raster_dynamical_plane(job, threads=args.threads)
        wall = time.perf_counter() - t0

    with open(args.output, "wb") as fh:
        fh.write(encode_ppm(image))
    sidecar = {
        "schema": "quadmod-raster/1",
        "job": job_to_dict(job),
        "counts": image.counts,
    }
    with open(args.output + ".json", "w", encoding="ascii") as fh:
        fh.write(canonical_json(sidecar))
        fh.write("\n")
    print(f"wall_time_s={wall:.3f}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_suite(
        args.suite, samples=args.samples, seed=args.seed, budget=args.budget, plans=args.plans
    )
    out = {"schema": "quadmod-verify/1"}
    out.update(report)
    print(canonical_json(out))
    return 0 if report["pass"] else 3


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _NUMERIC_ERRORS as exc:
        print(f"numeric error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
