"""Deterministic, tile-parallel rasterization of parameter and dynamical planes.

Pixel-to-plane mapping (exact, documented contract): images are row-major
with the top row carrying the largest imaginary part, and pixels sample the
plane at their centers:

    re[j] = center.re + ((2 j + 1 - W) * width)  / (2 W)      j = 0..W-1
    im[i] = center.im + ((H - 1 - 2 i) * height) / (2 H)      i = 0..H-1

Both formulas are single exact integer expressions scaled once, so a window
symmetric about the real axis samples exactly conjugate points in mirrored
rows — the conjugation symmetry of the parameter plane then holds bitwise.

Determinism: every pixel's color is a pure elementwise function of its
sample point, so tiling, tile size, and thread count cannot change output
bytes. Tiles write into disjoint slices of one preallocated buffer.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .batch import ladder_batch, lambda_basin_batch, per1_orbit_batch
from .classify import _normalize_tiers
from .errors import InvalidForm, UnsupportedForm
from .moduli import Conjugated, LambdaForm, MapForm, MobiusMap, PerOneForm

__all__ = [
    "Window",
    "ImageBuffer",
    "RasterJob",
    "DEFAULT_PARAMETER_WINDOW",
    "DEFAULT_DYNAMICAL_WINDOW",
    "default_parameter_job",
    "raster_parameter_plane",
    "raster_dynamical_plane",
    "mobius_conjugate_symmetric",
    "encode_ppm",
    "form_to_dict",
    "form_from_dict",
    "job_to_dict",
    "job_from_dict",
    "resolve_thread_count",
]

THREADS_ENV_VAR = "QUADMOD_THREADS"


@dataclass(frozen=True)
class Window:
    """A rectangle of the complex plane sampled on a pixel grid."""

    center: complex
    width: float
    height: float
    res_x: int
    res_y: int

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise InvalidForm("window extents must be positive")
        if not (self.res_x >= 1 and self.res_y >= 1):
            raise InvalidForm("resolution must be at least 1x1")

    @classmethod
    def from_extents(
        cls, re_min: float, re_max: float, im_min: float, im_max: float, res_x: int, res_y: int
    ) -> "Window":
        if not (re_max > re_min and im_max > im_min):
            raise InvalidForm("window extents must be increasing")
        return cls(
            center=complex((re_min + re_max) / 2.0, (im_min + im_max) / 2.0),
            width=re_max - re_min,
            height=im_max - im_min,
            res_x=res_x,
            res_y=res_y,
        )

    def re_axis(self) -> np.ndarray:
        j = np.arange(self.res_x, dtype=np.float64)
        return self.center.real + ((2.0 * j + (1 - self.res_x)) * self.width) / (2.0 * self.res_x)

    def im_axis(self) -> np.ndarray:
        i = np.arange(self.res_y, dtype=np.float64)
        return self.center.imag + (((self.res_y - 1) - 2.0 * i) * self.height) / (2.0 * self.res_y)


@dataclass(frozen=True)
class ImageBuffer:
    width: int
    height: int
    rgb: bytes  # len == 3 * width * height, row-major
    counts: dict[str, int] = field(compare=False)


@dataclass(frozen=True)
class RasterJob:
    mode: str  # "parameter" | "dynamical"
    window: Window
    tiers: tuple[str, ...]
    budget: int
    tile: int
    color_scheme: str = "default"
    form: Optional[MapForm] = None

    def __post_init__(self) -> None:
        if self.mode not in ("parameter", "dynamical"):
            raise InvalidForm(f"unknown raster mode {self.mode!r}")
        if self.budget < 1:
            raise InvalidForm("budget must be at least 1")
        if self.tile < 1:
            raise InvalidForm("tile size must be at least 1")
        if self.color_scheme != "default":
            raise InvalidForm(f"unknown color scheme {self.color_scheme!r}")


DEFAULT_PARAMETER_WINDOW = Window(center=1 + 0j, width=20.0, height=20.0, res_x=400, res_y=400)
DEFAULT_DYNAMICAL_WINDOW = Window(center=0j, width=4.0, height=4.0, res_x=400, res_y=400)


def default_parameter_job(
    res: int = 400, budget: int = 10_000, tiers: Optional[tuple[str, ...]] = None, tile: int = 64
) -> RasterJob:
    """The standard parameter-plane job: eigenvalue window [-9,11] x [-10,10]."""
    window = Window(center=1 + 0j, width=20.0, height=20.0, res_x=res, res_y=res)
    return RasterJob(
        mode="parameter",
        window=window,
        tiers=_normalize_tiers(tiers),
        budget=budget,
        tile=tile,
    )


# ---------------------------------------------------------------------------
# palettes (fixed integer tables so goldens are bit-exact)

def _gray_lut() -> tuple[tuple[int, int, int], ...]:
    # index 0 (zero steps / theorem shortcut) is pure white; deeper = darker
    return tuple((255 - (i * 140) // 255,) * 3 for i in range(256))


def _basin_zero_lut() -> tuple[tuple[int, int, int], ...]:
    return tuple((0, 40 + (i * 110) // 255, 255 - (i * 135) // 255) for i in range(256))


def _basin_inf_lut() -> tuple[tuple[int, int, int], ...]:
    return tuple((255 - (i * 135) // 255, 170 - (i * 120) // 255, 0) for i in range(256))


_GRAY = np.array(_gray_lut(), dtype=np.uint8)
_BASIN0 = np.array(_basin_zero_lut(), dtype=np.uint8)
_BASININF = np.array(_basin_inf_lut(), dtype=np.uint8)
_CONNECTED_RGB = (0, 0, 0)
_UNDETERMINED_RGB = (255, 0, 0)


def _shade_index(steps: np.ndarray, scale: float) -> np.ndarray:
    idx = np.floor(scale * np.log1p(steps.astype(np.float64))).astype(np.int64)
    return np.clip(idx, 0, 255)


def resolve_thread_count(threads: Optional[int] = None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def _run_tiles(window: Window, tile: int, threads: Optional[int], render_tile) -> np.ndarray:
    """Call render_tile(re_slice, im_slice) per tile; assemble into one image.

    render_tile returns a (th, tw, 3) uint8 block; blocks land in disjoint
    slices of the output, so scheduling order cannot affect the bytes.
    """
    w, h = window.res_x, window.res_y
    re = window.re_axis()
    im = window.im_axis()
    out = np.zeros((h, w, 3), dtype=np.uint8)
    spans = [
        (y0, min(y0 + tile, h), x0, min(x0 + tile, w))
        for y0 in range(0, h, tile)
        for x0 in range(0, w, tile)
    ]

    def work(span):
        y0, y1, x0, x1 = span
        out[y0:y1, x0:x1] = render_tile(re[x0:x1], im[y0:y1])

    n_threads = resolve_thread_count(threads)
    if n_threads == 1 or len(spans) == 1:
        for span in spans:
            work(span)
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(work, spans))
    return out


def raster_parameter_plane(job: RasterJob, threads: Optional[int] = None) -> ImageBuffer:
    """Render the connectivity picture of the eigenvalue plane.

    Per pixel eigenvalue: connected -> black, Cantor -> white shaded darker by
    log(1 + escape steps) (theorem shortcuts report zero steps, hence pure
    white), undetermined -> red.
    """
    if job.mode != "parameter":
        raise InvalidForm("job mode must be 'parameter'")
    tiers = _normalize_tiers(job.tiers)

    def render_tile(re_slice: np.ndarray, im_slice: np.ndarray) -> np.ndarray:
        lams = (re_slice[None, :] + 1j * im_slice[:, None]).ravel()
        verdict, _tier, steps = ladder_batch(lams, tiers, job.budget)
        rgb = np.zeros((lams.size, 3), dtype=np.uint8)
        cant = verdict == 2
        rgb[cant] = _GRAY[_shade_index(steps[cant], 16.0)]
        rgb[verdict == 0] = _UNDETERMINED_RGB
        # connected rows stay (0, 0, 0)
        return rgb.reshape(im_slice.size, re_slice.size, 3)

    out = _run_tiles(job.window, job.tile, threads, render_tile)
    flat_count = _parameter_counts(out)
    return ImageBuffer(
        width=job.window.res_x, height=job.window.res_y, rgb=out.tobytes(), counts=flat_count
    )


def _parameter_counts(out: np.ndarray) -> dict[str, int]:
    r = out[..., 0].astype(np.int64)
    g = out[..., 1].astype(np.int64)
    b = out[..., 2].astype(np.int64)
    undetermined = int(np.count_nonzero((r == 255) & (g == 0) & (b == 0)))
    connected = int(np.count_nonzero((r == 0) & (g == 0) & (b == 0)))
    total = out.shape[0] * out.shape[1]
    return {
        "connected": connected,
        "cantor": total - connected - undetermined,
        "undetermined": undetermined,
    }


def raster_dynamical_plane(
    job: RasterJob, form: Optional[MapForm] = None, threads: Optional[int] = None
) -> ImageBuffer:
    """Render a dynamical plane.

    Supported forms: a two-eigenvalue form with both eigenvalues attracting
    (two basins: blue for the basin of the fixed point 0, gold for infinity,
    shaded by time to enter a certified capture disk; black = unresolved),
    a Moebius conjugate of one (colors follow the conjugated basins), and the
    parabolic normal form (gray shading by time to certified escape;
    non-escaping pixels black). Anything else raises UnsupportedForm.
    """
    if job.mode != "dynamical":
        raise InvalidForm("job mode must be 'dynamical'")
    if form is None:
        form = job.form
    if form is None:
        raise InvalidForm("dynamical raster needs a map form")

    base = form
    mob: Optional[MobiusMap] = None
    if isinstance(base, Conjugated):
        mob = base.mobius
        base = base.base
    if isinstance(base, LambdaForm):
        l1, l2 = complex(base.lambda1), complex(base.lambda2)
        if not (abs(l1) < 1.0 and abs(l2) < 1.0):
            raise UnsupportedForm(
                "dynamical raster of a two-eigenvalue form needs both eigenvalues attracting"
            )
        return _raster_basins(job, l1, l2, mob, threads)
    if isinstance(base, PerOneForm) and mob is None:
        return _raster_parabolic(job, complex(base.offset), threads)
    raise UnsupportedForm(f"unsupported form for dynamical raster: {type(form).__name__}")


def _raster_basins(
    job: RasterJob, l1: complex, l2: complex, mob: Optional[MobiusMap], threads: Optional[int]
) -> ImageBuffer:
    inv = mob.inverse() if mob is not None else None

    def render_tile(re_slice: np.ndarray, im_slice: np.ndarray) -> np.ndarray:
        grid = (re_slice[None, :] + 1j * im_slice[:, None]).ravel()
        if inv is not None:
            num = inv.a * grid + inv.b
            den = inv.c * grid + inv.d
            with np.errstate(divide="ignore", invalid="ignore"):
                grid = num / den  # den == 0 -> inf -> captured by infinity
        code, steps = lambda_basin_batch(l1, l2, grid, job.budget)
        rgb = np.zeros((grid.size, 3), dtype=np.uint8)
        idx = _shade_index(steps, 32.0)
        m0 = code == 1
        minf = code == 2
        rgb[m0] = _BASIN0[idx[m0]]
        rgb[minf] = _BASININF[idx[minf]]
        return rgb.reshape(im_slice.size, re_slice.size, 3)

    out = _run_tiles(job.window, job.tile, threads, render_tile)
    b = out[..., 2].astype(np.int64)
    r = out[..., 0].astype(np.int64)
    g = out[..., 1].astype(np.int64)
    black = int(np.count_nonzero((r == 0) & (g == 0) & (b == 0)))
    zero_basin = int(np.count_nonzero((r == 0) & ~((g == 0) & (b == 0))))
    total = out.shape[0] * out.shape[1]
    counts = {
        "basin_zero": zero_basin,
        "basin_infinity": total - zero_basin - black,
        "unresolved": black,
    }
    return ImageBuffer(width=job.window.res_x, height=job.window.res_y, rgb=out.tobytes(), counts=counts)


def _raster_parabolic(job: RasterJob, offset: complex, threads: Optional[int]) -> ImageBuffer:
    def render_tile(re_slice: np.ndarray, im_slice: np.ndarray) -> np.ndarray:
        grid = (re_slice[None, :] + 1j * im_slice[:, None]).ravel()
        code, steps = per1_orbit_batch(np.full(grid.shape, offset), grid, job.budget)
        rgb = np.zeros((grid.size, 3), dtype=np.uint8)
        esc = code == 1
        rgb[esc] = _GRAY[_shade_index(steps[esc], 16.0)]
        return rgb.reshape(im_slice.size, re_slice.size, 3)

    out = _run_tiles(job.window, job.tile, threads, render_tile)
    r = out[..., 0].astype(np.int64)
    escaped = int(np.count_nonzero(r != 0))
    total = out.shape[0] * out.shape[1]
    counts = {"escaped": escaped, "bounded": total - escaped}
    return ImageBuffer(width=job.window.res_x, height=job.window.res_y, rgb=out.tobytes(), counts=counts)


def mobius_conjugate_symmetric(form: LambdaForm, r: float) -> Conjugated:
    """Conjugate a symmetric two-eigenvalue class to its real normal position.

    For a class with conjugate eigenvalue pair the natural representative has
    fixed points at -r, -1/r and 1 (r the shared eigenvalue modulus); the
    Moebius map is the three-point correspondence (0, inf, z3) -> (-r, -1/r, 1).
    """
    if not isinstance(form, LambdaForm):
        raise InvalidForm("symmetric conjugation expects a two-eigenvalue form")
    from .sphere import SpherePoint, as_sphere

    l1, l2 = complex(form.lambda1), complex(form.lambda2)
    z3 = SpherePoint(1.0 - l1, 1.0 - l2)
    source = (SpherePoint.zero(), SpherePoint.infinity(), z3)
    target = (as_sphere(complex(-r)), as_sphere(complex(-1.0 / r)), as_sphere(1.0 + 0j))
    m = MobiusMap.taking(source, target)
    return Conjugated(base=form, mobius=m)


def encode_ppm(image: ImageBuffer) -> bytes:
    """Binary P6 bytes: header then row-major RGB triples, bit-exact."""
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    expected = 3 * image.width * image.height
    if len(image.rgb) != expected:
        raise InvalidForm(f"pixel payload is {len(image.rgb)} bytes, expected {expected}")
    return header + image.rgb


# ---------------------------------------------------------------------------
# job / form serialization (CLI round trip)

def _c2pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def form_to_dict(form: MapForm) -> dict:
    if isinstance(form, LambdaForm):
        return {"kind": "lambda", "lambda1": _c2pair(form.lambda1), "lambda2": _c2pair(form.lambda2)}
    if isinstance(form, PerOneForm):
        return {"kind": "per1", "offset": _c2pair(form.offset)}
    if isinstance(form, Conjugated):
        m = form.mobius
        return {
            "kind": "conjugated",
            "base": form_to_dict(form.base),
            "mobius": [_c2pair(m.a), _c2pair(m.b), _c2pair(m.c), _c2pair(m.d)],
        }
    raise InvalidForm(f"unserializable form {type(form).__name__}")


def _pair2c(p) -> complex:
    return complex(float(p[0]), float(p[1]))


def form_from_dict(d: dict) -> MapForm:
    kind = d.get("kind")
    if kind == "lambda":
        return LambdaForm(_pair2c(d["lambda1"]), _pair2c(d["lambda2"]))
    if kind == "per1":
        return PerOneForm(_pair2c(d["offset"]))
    if kind == "conjugated":
        a, b, c, dd = (_pair2c(x) for x in d["mobius"])
        return Conjugated(base=form_from_dict(d["base"]), mobius=MobiusMap(a, b, c, dd))
    raise InvalidForm(f"unknown form kind {kind!r}")


def job_to_dict(job: RasterJob) -> dict:
    w = job.window
    out = {
        "mode": job.mode,
        "window": {
            "center": _c2pair(w.center),
            "width": w.width,
            "height": w.height,
            "res_x": w.res_x,
            "res_y": w.res_y,
        },
        "tiers": list(job.tiers),
        "budget": job.budget,
        "tile": job.tile,
        "color_scheme": job.color_scheme,
    }
    if job.form is not None:
        out["form"] = form_to_dict(job.form)
    return out


def job_from_dict(d: dict) -> RasterJob:
    w = d["window"]
    window = Window(
        center=_pair2c(w["center"]),
        width=float(w["width"]),
        height=float(w["height"]),
        res_x=int(w["res_x"]),
        res_y=int(w["res_y"]),
    )
    return RasterJob(
        mode=d["mode"],
        window=window,
        tiers=tuple(d["tiers"]),
        budget=int(d["budget"]),
        tile=int(d["tile"]),
        color_scheme=d.get("color_scheme", "default"),
        form=form_from_dict(d["form"]) if "form" in d else None,
    )
