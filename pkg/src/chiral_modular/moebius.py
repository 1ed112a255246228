"""The Moebius group PSU(1,1) of the circle and its covering flows.

Group elements are stored as the first row (alpha, beta) of the matrix

    [ alpha        beta  ]
    [ conj(beta)  conj(alpha) ],      |alpha|^2 - |beta|^2 = 1,

acting by z -> (alpha*z + beta) / (conj(beta)*z + conj(alpha)).  Two elements
are the same group element when they agree up to an overall sign.

The dilation subgroup Dil(t) (alpha = cosh(pi t), beta = sinh(pi t)) fixes
{1, -1} and maps the upper and lower semicircle onto themselves.  Its n-fold
covers

    Dil_n(t) z = (Dil(t) z^n)^(1/n)

need a branch convention for the n-th root.  We take the *sheet-preserving*
branch: the output is the unique n-th root lying in the same fundamental
sector [2*pi*k/n, 2*pi*(k+1)/n) as the input, the sector index being computed
from the input before the map.  This is the unique choice with Dil_n(0) = id
and a continuous flow, and it gives each of the 2n points with z^n = +-1 as a
fixpoint.  For covering flows adapted to a general base interval the sheets
are anchored at the interval's start instead (the two rules coincide for the
standard dilation flows); see :func:`covering_flow_anchored`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Union

from chiral_modular.circle_geometry import (
    TAU,
    CircleInterval,
    CirclePoint,
    POINT_AT_INFINITY,
    _PointAtInfinity,
    canonical_angle,
    power_chart,
)
from chiral_modular.errors import SingularPointError

_SU11_TOL = 1e-9


@dataclass(frozen=True)
class MoebiusElement:
    """An element of SU(1,1), representing its class in PSU(1,1)."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        # relative defect: the raw difference of squares cancels
        # catastrophically at large rapidity even for exact group elements
        scale = abs(self.alpha) ** 2 + abs(self.beta) ** 2 + 1.0
        if abs(self.su11_defect) > _SU11_TOL * scale:
            raise ValueError(
                f"not an SU(1,1) matrix: |alpha|^2-|beta|^2 = {1 + self.su11_defect}"
            )

    @property
    def su11_defect(self) -> float:
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2 - 1.0

    @classmethod
    def identity(cls) -> "MoebiusElement":
        return cls(1.0, 0.0)

    def is_identity(self, tol: float = 1e-12) -> bool:
        return (
            min(abs(self.alpha - 1.0), abs(self.alpha + 1.0)) < tol
            and abs(self.beta) < tol
        )

    def approx_equal(self, other: "MoebiusElement", tol: float = 1e-10) -> bool:
        """Equality in PSU(1,1), i.e. up to an overall sign."""
        same = abs(self.alpha - other.alpha) + abs(self.beta - other.beta)
        flipped = abs(self.alpha + other.alpha) + abs(self.beta + other.beta)
        return min(same, flipped) <= tol

    def inverse(self) -> "MoebiusElement":
        return MoebiusElement(self.alpha.conjugate(), -self.beta)

    def __repr__(self):
        return f"MoebiusElement(alpha={self.alpha!r}, beta={self.beta!r})"


def compose(g: MoebiusElement, h: MoebiusElement) -> MoebiusElement:
    """Matrix product; act(compose(g, h), z) == act(g, act(h, z))."""
    alpha = g.alpha * h.alpha + g.beta * h.beta.conjugate()
    beta = g.alpha * h.beta + g.beta * h.alpha.conjugate()
    # keep long composition chains exactly on the group manifold
    norm = math.sqrt(abs(alpha) ** 2 - abs(beta) ** 2)
    return MoebiusElement(alpha / norm, beta / norm)


def act(
    g: MoebiusElement, z: Union[complex, CirclePoint, _PointAtInfinity]
) -> Union[complex, _PointAtInfinity]:
    """Apply the fractional-linear action to a general point."""
    if isinstance(z, CirclePoint):
        z = z.z
    bc = g.beta.conjugate()
    ac = g.alpha.conjugate()
    if isinstance(z, _PointAtInfinity):
        if bc == 0:
            return POINT_AT_INFINITY
        return g.alpha / bc
    z = complex(z)
    denom = bc * z + ac
    # a denominator cancelled down to rounding noise is a pole hit
    if abs(denom) <= 1e-15 * (abs(bc * z) + abs(ac)):
        return POINT_AT_INFINITY
    return (g.alpha * z + g.beta) / denom


def act_point(g: MoebiusElement, p: CirclePoint) -> CirclePoint:
    """Circle-to-circle action, returned as an angle (no modulus drift)."""
    w = act(g, p.z)
    return CirclePoint(cmath.phase(w))


def moebius_derivative(g: MoebiusElement, z: complex) -> complex:
    """d/dz of the action; equals 1/(conj(beta)*z + conj(alpha))^2 (det = 1)."""
    if isinstance(z, CirclePoint):
        z = z.z
    denom = g.beta.conjugate() * z + g.alpha.conjugate()
    if denom == 0:
        raise SingularPointError(f"Moebius derivative at the pole z={z}")
    return 1.0 / (denom * denom)


def dilation(t: float) -> MoebiusElement:
    """The one-parameter dilation subgroup fixing 1 and -1."""
    return MoebiusElement(math.cosh(math.pi * t), math.sinh(math.pi * t))


@dataclass(frozen=True)
class ComplexDilation:
    """Dilation at complexified flow time tau = t + i*s.

    Kept separate from :class:`MoebiusElement` because for complex tau the
    matrix entries no longer satisfy the (conj(beta), conj(alpha)) pairing,
    so the SU(1,1) constraint is meaningless; the coefficients obey the
    analytic identity a^2 - b^2 = 1 instead.
    """

    tau: complex

    @property
    def a(self) -> complex:
        return cmath.cosh(cmath.pi * self.tau)

    @property
    def b(self) -> complex:
        return cmath.sinh(cmath.pi * self.tau)


def complex_dilation_act(
    d: ComplexDilation, z: Union[complex, CirclePoint, _PointAtInfinity]
) -> Union[complex, _PointAtInfinity]:
    """(a z + b)/(b z + a) with a = cosh(pi tau), b = sinh(pi tau).

    For Im(tau) not a multiple of 1 the image of the circle leaves the
    circle; at Im(tau) = 1 the coefficients negate and the map returns to
    Dil(Re tau) as a Moebius map.
    """
    a, b = d.a, d.b
    if isinstance(z, CirclePoint):
        z = z.z
    if isinstance(z, _PointAtInfinity):
        if b == 0:
            return POINT_AT_INFINITY
        return a / b
    z = complex(z)
    denom = b * z + a
    if abs(denom) <= 1e-15 * (abs(b * z) + abs(a)):
        return POINT_AT_INFINITY
    return (a * z + b) / denom


def complex_dilation_derivative(d: ComplexDilation, z: complex) -> complex:
    """d/dz of the complexified dilation; 1/(b z + a)^2 by a^2 - b^2 = 1."""
    if isinstance(z, CirclePoint):
        z = z.z
    denom = d.b * z + d.a
    if denom == 0:
        raise SingularPointError(f"complex dilation derivative at the pole z={z}")
    return 1.0 / (denom * denom)


def interval_adapter(interval: CircleInterval) -> MoebiusElement:
    """The PSU(1,1) element sending (start, midpoint, end) of the arc to (1, i, -1).

    The image of the arc is the upper semicircle.  Mapping the arc onto the
    upper semicircle only fixes the element up to a residual dilation; the
    midpoint normalization pins that freedom, and the induced interval
    dilations g^-1 Dil(t) g do not depend on it.
    """
    p = interval.start.z
    q = interval.midpoint.z
    r = interval.end.z
    # matrix of the unique Moebius map (p, q, r) -> (0, 1, infinity)
    m = _three_point_matrix(p, q, r)
    # matrix of (1, i, -1) -> (0, 1, infinity), inverted via the adjugate
    nmat = _three_point_matrix(1.0 + 0j, 1j, -1.0 + 0j)
    ninv = (nmat[3], -nmat[1], -nmat[2], nmat[0])
    a = ninv[0] * m[0] + ninv[1] * m[2]
    b = ninv[0] * m[1] + ninv[1] * m[3]
    c = ninv[2] * m[0] + ninv[3] * m[2]
    d = ninv[2] * m[1] + ninv[3] * m[3]
    det = a * d - b * c
    scale = cmath.sqrt(det)
    a, b, c, d = a / scale, b / scale, c / scale, d / scale
    if abs(d - a.conjugate()) > 1e-8 or abs(c - b.conjugate()) > 1e-8:
        raise ValueError("interval adapter did not land in SU(1,1)")
    norm = math.sqrt(abs(a) ** 2 - abs(b) ** 2)
    return MoebiusElement(a / norm, b / norm)


def _three_point_matrix(p: complex, q: complex, r: complex):
    """Matrix of the Moebius map sending (p, q, r) to (0, 1, infinity)."""
    return (q - r, -p * (q - r), q - p, -r * (q - p))


def interval_dilation(interval: CircleInterval, t: float) -> MoebiusElement:
    """The dilation flow adapted to an arc: g^-1 Dil(t) g, mapping the arc onto itself."""
    g = interval_adapter(interval)
    return compose(g.inverse(), compose(dilation(t), g))


@dataclass(frozen=True)
class CoveringMap:
    """The n-fold cover g_n(z) = (g(z^n))^(1/n) of a Moebius element."""

    n: int
    base: MoebiusElement

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"covering order must be a positive integer, got {self.n}")


def sector_index(theta: float, n: int, anchor: float = 0.0) -> int:
    """Index k of the sector [anchor + 2*pi*k/n, anchor + 2*pi*(k+1)/n) containing theta."""
    rel = canonical_angle(theta - anchor)
    k = int(rel // (TAU / n))
    return min(k, n - 1)  # guard the half-open boundary against float fuzz


def covering_flow_anchored(
    n: int,
    base: MoebiusElement,
    z: CirclePoint,
    anchor: float = 0.0,
    invariant_split: Optional[float] = None,
) -> CirclePoint:
    """(base(z^n))^(1/n) with the root on the same anchored sheet as the input.

    With anchor 0 this is the fixed-sector branch rule; anchoring at the
    start of a base interval makes the flow adapted to that interval
    preserve each of the n preimage arcs even when they straddle the fixed
    sectors.

    ``invariant_split`` is for flow bases that fix the anchor direction and
    the direction at chart angle L (interval dilations fix both endpoints of
    their arc; L = pi for the plain dilations): orbits of the covered point
    then stay inside (0, L) or (L, 2*pi), and images that rounding pushed
    across the anchor boundary are unwrapped back to the orbit's side, which
    keeps the flow continuous and its fixpoints fixed to full precision.
    """
    if n == 1:
        return act_point(base, z)
    sigma = canonical_angle(z.theta - anchor / n)
    rho0, k = power_chart(sigma, n)
    if invariant_split is not None:
        # the covered point sits on a fixpoint of the base up to rounding
        # noise of its representation: the flow fixes it exactly (points a
        # genuine 1e-12 off a fixpoint barely move on desk-scale flow times)
        if (
            min(rho0, TAU - rho0, abs(rho0 - invariant_split)) < 1e-12
        ):
            return z
    w = act_point(base, CirclePoint(anchor + rho0))
    phi = canonical_angle(w.theta - anchor)
    if invariant_split is not None:
        split = invariant_split
        if rho0 < split:
            if phi > split + 0.5 * (TAU - split):
                phi -= TAU
        else:
            if phi < 0.5 * split:
                phi += TAU
    return CirclePoint((anchor + phi) / n + TAU * k / n)


def covering_transform(c: CoveringMap, z: CirclePoint) -> CirclePoint:
    """Apply the covering transformation with the sector-preserving branch."""
    if c.base.is_identity():
        return z
    return covering_flow_anchored(c.n, c.base, z)


def dilation_n(n: int, t: float, z: CirclePoint) -> CirclePoint:
    """The modified dilation (Dil(t) z^n)^(1/n), sector-preserving branch."""
    if n < 1:
        raise ValueError(f"covering order must be a positive integer, got {n}")
    if t == 0.0:
        return z
    return covering_flow_anchored(n, dilation(t), z, invariant_split=math.pi)


def covering_derivative(c: CoveringMap, z: CirclePoint) -> complex:
    """Closed-form complex derivative of the covering transformation at z.

    Chain rule through z^n and the n-th root:
        d/dz (g(z^n))^(1/n) = z^(n-1) * w^(1-n) * g'(z^n),   w = g_n(z).
    Raises at a sector boundary for n > 1, where the realized branch jumps.
    """
    n = c.n
    if n > 1:
        rel = canonical_angle(z.theta)
        width = TAU / n
        offset = math.fmod(rel, width)
        if min(offset, width - offset) < 1e-12:
            raise SingularPointError(
                f"covering derivative at a root branch boundary, theta={z.theta}"
            )
    return _covering_derivative_at(n, c.base, z, covering_transform(c, z))


def dilation_n_derivative(n: int, t: float, z: CirclePoint) -> complex:
    """Closed-form derivative of the modified dilation flow at z.

    Well defined everywhere on the circle, including the 2n fixpoints (the
    sector boundaries are fixpoints of this flow, where both adjacent
    branches agree).
    """
    return _covering_derivative_at(n, dilation(t), z, dilation_n(n, t, z))


def covering_flow_derivative(
    n: int,
    base: MoebiusElement,
    z: CirclePoint,
    anchor: float = 0.0,
    invariant_split: Optional[float] = None,
) -> complex:
    """Derivative of the anchored covering flow (base(z^n))^(1/n) at z."""
    w = covering_flow_anchored(n, base, z, anchor, invariant_split)
    return _covering_derivative_at(n, base, z, w)


def _covering_derivative_at(
    n: int, base: MoebiusElement, z: CirclePoint, w: CirclePoint
) -> complex:
    zc = z.z
    zn = zc**n
    gprime = moebius_derivative(base, zn)
    if n == 1:
        return gprime
    return zc ** (n - 1) * w.z ** (1 - n) * gprime


def fixpoints_of_dilation_n(n: int) -> list[CirclePoint]:
    """The 2n fixpoints of the modified dilation: the solutions of z^n = +-1."""
    if n < 1:
        raise ValueError(f"covering order must be a positive integer, got {n}")
    return [CirclePoint(k * math.pi / n) for k in range(2 * n)]
