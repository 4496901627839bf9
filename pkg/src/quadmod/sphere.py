"""Points on the Riemann sphere in homogeneous coordinates.

A point is a ratio [u : v] with z = u/v; v = 0 is the point at infinity.
Every SpherePoint is stored in a canonical form in which the coordinate of
larger modulus is exactly 1 (ties prefer u). That gives three properties the
rest of the package relies on:

  * no overflow: both coordinates stay in the closed unit disk,
  * well-defined float equality: equal points have identical coordinates,
    so exact orbit landings are detectable with ==,
  * a deterministic chart choice: |u| >= |v| means the point lives in the
    w = 1/z chart, otherwise in the z chart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union


def _is_finite_complex(x: complex) -> bool:
    return math.isfinite(x.real) and math.isfinite(x.imag)


@dataclass(frozen=True)
class SpherePoint:
    u: complex
    v: complex

    def __post_init__(self) -> None:
        u = complex(self.u)
        v = complex(self.v)
        if not (_is_finite_complex(u) and _is_finite_complex(v)):
            raise ValueError("sphere point coordinates must be finite")
        if u == 0 and v == 0:
            raise ValueError("[0 : 0] is not a point")
        if abs(u) >= abs(v):
            u, v = complex(1.0), v / u
        else:
            u, v = u / v, complex(1.0)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_complex(cls, z: complex) -> "SpherePoint":
        return cls(complex(z), complex(1.0))

    @classmethod
    def zero(cls) -> "SpherePoint":
        return cls(complex(0.0), complex(1.0))

    @classmethod
    def infinity(cls) -> "SpherePoint":
        return cls(complex(1.0), complex(0.0))

    @property
    def is_infinity(self) -> bool:
        return self.v == 0

    @property
    def far_chart(self) -> bool:
        """True when the point is represented in the w = 1/z chart (|u| >= |v|)."""
        return abs(self.u) >= abs(self.v)

    def to_complex(self) -> complex:
        if self.v == 0:
            raise ValueError("the point at infinity has no finite coordinate")
        return self.u / self.v

    def __repr__(self) -> str:  # keep short: points show up in fate reports
        if self.is_infinity:
            return "SpherePoint(inf)"
        return f"SpherePoint({self.to_complex()!r})"


PointLike = Union[SpherePoint, complex, float, int]


def as_sphere(x: PointLike) -> SpherePoint:
    if isinstance(x, SpherePoint):
        return x
    return SpherePoint.from_complex(complex(x))


def chordal(p: PointLike, q: PointLike) -> float:
    """Chordal-type metric |u_p v_q - u_q v_p| / (|p| |q|), bounded by 1."""
    a = as_sphere(p)
    b = as_sphere(q)
    num = abs(a.u * b.v - b.u * a.v)
    na = math.hypot(abs(a.u), abs(a.v))
    nb = math.hypot(abs(b.u), abs(b.v))
    return num / (na * nb)
