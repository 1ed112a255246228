"""Points, arcs and elementary maps on the unit circle.

Angles are the primary representation: a point is stored as its argument
reduced to [0, 2*pi), and the complex coordinate exp(i*theta) is derived on
demand.  Keeping angles primary means long flow traces cannot drift off the
circle.  Intervals are proper open counterclockwise arcs; endpoint membership
is resolved strictly, with a small tolerance.

The point at infinity (the Cayley image of z = -1) is a tagged singleton,
never a large float.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

TAU = 2.0 * math.pi


class _PointAtInfinity:
    """Tagged point at infinity on the extended real line / Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "POINT_AT_INFINITY"


POINT_AT_INFINITY = _PointAtInfinity()

ExtendedReal = Union[float, _PointAtInfinity]
ExtendedComplex = Union[complex, _PointAtInfinity]


def canonical_angle(theta: float) -> float:
    """Reduce an angle to the canonical range [0, 2*pi)."""
    theta = math.fmod(theta, TAU)
    if theta < 0.0:
        theta += TAU
    if theta >= TAU:  # fmod can land exactly on 2*pi after the correction
        theta -= TAU
    return theta


def scaled_angle(theta: float, n: int) -> float:
    """canonical(n * theta) with the product rounding compensated.

    The naive product n*theta loses ~n ulps before reduction; near the flow
    fixpoints that loss is amplified exponentially by the dilation, so the
    covering maps reduce the angle with an exact two-product (Dekker split;
    n is an exact small integer).
    """
    return power_chart(theta, n)[0]


def power_chart(sigma: float, n: int) -> tuple[float, int]:
    """Consistent decomposition n*sigma = 2*pi*k + rho with rho in [0, 2*pi).

    Returns (rho, k) computed from one compensated product, so the sheet
    index k and the covered angle rho can never disagree by a whole turn
    even when n*sigma sits within rounding noise of a multiple of 2*pi.
    Requires 0 <= sigma < 2*pi (canonical input) and a small integer n.
    """
    if n == 1:
        return canonical_angle(sigma), 0
    p = n * sigma
    c = 134217729.0 * sigma  # 2^27 + 1, Dekker split of the product
    hi = c - (c - sigma)
    lo = sigma - hi
    err = (n * hi - p) + n * lo
    red = math.fmod(p, TAU)  # fmod is exact: p = TAU*m + red
    m = int(round((p - red) / TAU))
    rho = red + err
    if rho < 0.0:
        rho += TAU
        m -= 1
    elif rho >= TAU:
        rho -= TAU
        m += 1
    return rho, m


@dataclass(frozen=True)
class CirclePoint:
    """A point of the unit circle, stored as its angle in [0, 2*pi)."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", canonical_angle(float(self.theta)))

    @classmethod
    def from_complex(cls, z: complex) -> "CirclePoint":
        if z == 0:
            raise ValueError("cannot project z=0 onto the circle")
        return cls(cmath.phase(z))

    @property
    def z(self) -> complex:
        return cmath.exp(1j * self.theta)

    def rotated(self, delta: float) -> "CirclePoint":
        return CirclePoint(self.theta + delta)

    def __repr__(self):
        return f"CirclePoint({self.theta!r})"


@dataclass(frozen=True)
class CircleInterval:
    """A proper open arc, running counterclockwise from ``start``."""

    start: CirclePoint
    length: float

    def __post_init__(self):
        if not 0.0 < self.length < TAU:
            raise ValueError(f"interval length must lie in (0, 2*pi), got {self.length}")

    @classmethod
    def from_angles(cls, start: float, length: float) -> "CircleInterval":
        return cls(CirclePoint(start), float(length))

    @property
    def end(self) -> CirclePoint:
        return CirclePoint(self.start.theta + self.length)

    @property
    def midpoint(self) -> CirclePoint:
        return CirclePoint(self.start.theta + 0.5 * self.length)

    def relative_angle(self, p: CirclePoint) -> float:
        """Counterclockwise angle from ``start`` to ``p``, in [0, 2*pi)."""
        return canonical_angle(p.theta - self.start.theta)

    def contains(self, p: CirclePoint, tol: float = 1e-12) -> bool:
        """Strict interior membership, endpoints excluded within ``tol``."""
        rel = self.relative_angle(p)
        return tol < rel < self.length - tol

    def sample(self, fraction: float) -> CirclePoint:
        """Point at the given fraction (in (0,1)) of the arc length."""
        return CirclePoint(self.start.theta + fraction * self.length)

    def __repr__(self):
        return f"CircleInterval(start={self.start.theta!r}, length={self.length!r})"


UPPER_SEMICIRCLE = CircleInterval.from_angles(0.0, math.pi)
LOWER_SEMICIRCLE = CircleInterval.from_angles(math.pi, math.pi)


def cayley(z: Union[CirclePoint, complex, _PointAtInfinity]) -> ExtendedComplex:
    """Stereographic map z -> -i(z-1)/(z+1); sends the circle minus {-1} to the reals.

    ``z = -1`` maps to the tagged point at infinity (not an error).  For a
    ``CirclePoint`` the result is returned as a real float.
    """
    if isinstance(z, _PointAtInfinity):
        return complex(0.0, -1.0)  # limit of -i(z-1)/(z+1) as z -> infinity
    if isinstance(z, CirclePoint):
        if z.theta == math.pi:
            return POINT_AT_INFINITY
        # tan(theta/2) is the exact real form of -i(z-1)/(z+1) on the circle
        return math.tan(0.5 * z.theta)
    z = complex(z)
    if abs(z + 1.0) == 0.0:
        return POINT_AT_INFINITY
    return -1j * (z - 1.0) / (z + 1.0)


def inverse_cayley(x: Union[float, complex, _PointAtInfinity]) -> complex:
    """Inverse of :func:`cayley`: x -> (1+ix)/(1-ix), with infinity -> -1."""
    if isinstance(x, _PointAtInfinity):
        return complex(-1.0, 0.0)
    x = complex(x)
    denom = 1.0 - 1j * x
    if denom == 0:
        raise ValueError("inverse Cayley transform has a pole at x = -i")
    return (1.0 + 1j * x) / denom


def inverse_cayley_point(x: ExtendedReal) -> CirclePoint:
    """Inverse Cayley transform of a real (or infinite) value, as a circle point."""
    if isinstance(x, _PointAtInfinity):
        return CirclePoint(math.pi)
    return CirclePoint(2.0 * math.atan(float(x)))


def preimage_intervals(interval: CircleInterval, n: int) -> list[CircleInterval]:
    """The n disjoint arcs mapped bijectively onto ``interval`` by z -> z^n.

    Each arc has length ``interval.length / n``; arcs are returned ordered by
    start angle.
    """
    if n < 1:
        raise ValueError(f"covering order must be a positive integer, got {n}")
    arcs = [
        CircleInterval.from_angles(
            (interval.start.theta + TAU * k) / n, interval.length / n
        )
        for k in range(n)
    ]
    return sorted(arcs, key=lambda arc: arc.start.theta)


def has_opposite_points(interval: CircleInterval, n: int) -> bool:
    """Whether the arc contains two points with equal argument mod 2*pi/n.

    For an open arc this happens exactly when its length exceeds 2*pi/n: any
    shorter arc meets each residue class mod 2*pi/n at most once.  (A
    sampling double-grid scan is kept in the test suite as an oracle.)
    """
    if n < 1:
        raise ValueError(f"covering order must be a positive integer, got {n}")
    return interval.length > TAU / n


def rotated_tcp(p: CirclePoint) -> CirclePoint:
    """The reflection z -> -conj(z), i.e. theta -> pi - theta; an involution.

    Exchanges the first and second quarter-circles and the third and fourth.
    Implemented on angles only (no trigonometric round trip).
    """
    return CirclePoint(math.pi - p.theta)


def quarter_circle(i: int) -> CircleInterval:
    """Quarter arc number i in {1,2,3,4}: theta in ((i-1)*pi/2, i*pi/2)."""
    if i not in (1, 2, 3, 4):
        raise ValueError(f"quarter-circle index must be in 1..4, got {i}")
    return CircleInterval.from_angles((i - 1) * 0.5 * math.pi, 0.5 * math.pi)
