"""Modified states realized as pullbacks of vacuum correlators.

A modified state of covering order n evaluates a correlator by sending every
insertion point through z -> z^n, evaluating the vacuum correlator there, and
multiplying by the Jacobian weight (n z^(n-1))^Delta per insertion:

    omega_n( prod_k phi_k(z_k) ) = prod_s (n z_s^(n-1))^Delta_s
                                   * omega_0( prod_k phi_k(z_k^n) ).

Order n = 1 is the vacuum itself.  The construction degenerates when two
insertions collide after the covering map (z_i^n = z_j^n, i.e. the points are
"opposite" mod 2*pi/n); such configurations are rejected with the offending
pair named, which is the correlator-level shadow of the state losing
faithfulness on regions containing opposite points.

For non-chiral fields both sectors are transformed (state ``OmegaNN``).  On a
pair of arcs that are the two square-root preimages of a common base arc, the
faithful option is the product state ``ProductOmega2``: insertions are split
by membership, each group is evaluated in the order-2 state separately, and
the results multiply; dropping the cross-arc correlations is the defining
property of the product, not an approximation.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from chiral_modular.circle_geometry import (
    TAU,
    CircleInterval,
    CirclePoint,
    canonical_angle,
)
from chiral_modular.correlators import (
    DEFAULT_EPS_MIN,
    CurrentAlgebraSpec,
    PrimaryFieldSpec,
    current_npoint,
    primary_two_point,
)
from chiral_modular.continuation import principal_power
from chiral_modular.errors import (
    LocalizationError,
    OppositePointError,
    SingularConfigurationError,
)


@dataclass(frozen=True)
class Vacuum:
    """The unmodified vacuum: covering order 1."""

    @property
    def n(self) -> int:
        return 1


@dataclass(frozen=True)
class OmegaN:
    """Chiral modified state of covering order n; n = 1 reduces to the vacuum."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"covering order must be a positive integer, got {self.n}")


@dataclass(frozen=True)
class OmegaNN:
    """Non-chiral modified state: both sectors pulled back through z -> z^n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"covering order must be a positive integer, got {self.n}")


@dataclass(frozen=True)
class ProductOmega2:
    """Product of two order-2 states on the two square-root preimages of a base arc."""

    interval1: CircleInterval
    interval2: CircleInterval

    def __post_init__(self):
        gap = canonical_angle(
            self.interval2.start.theta - self.interval1.start.theta
        )
        if abs(self.interval1.length - self.interval2.length) > 1e-9 or not (
            abs(gap - cmath.pi) < 1e-9
        ):
            raise ValueError(
                "the two arcs must be the two square-root preimages of a common "
                "base arc (equal length, starts differing by pi)"
            )

    @classmethod
    def from_base(cls, base: CircleInterval) -> "ProductOmega2":
        from chiral_modular.circle_geometry import preimage_intervals

        first, second = preimage_intervals(base, 2)
        return cls(first, second)

    @property
    def base_interval(self) -> CircleInterval:
        return CircleInterval.from_angles(
            2.0 * self.interval1.start.theta, 2.0 * self.interval1.length
        )


StateSpec = Union[Vacuum, OmegaN, OmegaNN, ProductOmega2]


@dataclass(frozen=True)
class CurrentInsertion:
    """A current insertion; weight one."""

    color: int = 0

    @property
    def delta(self) -> float:
        return 1.0


@dataclass(frozen=True)
class PrimaryInsertion:
    """A primary-field insertion with chiral (and optionally anti-chiral) weight."""

    delta: float
    delta_bar: Optional[float] = None


Insertion = Union[CurrentInsertion, PrimaryInsertion]


def _as_angle_points(points: Sequence) -> list[CirclePoint]:
    out = []
    for p in points:
        if isinstance(p, CirclePoint):
            out.append(p)
        else:
            out.append(CirclePoint.from_complex(complex(p)))
    return out


def _reject_opposite(points: list[CirclePoint], n: int, eps_min: float):
    """Reject coincident points and points colliding after z -> z^n."""
    zs = [p.z for p in points]
    powers = [CirclePoint(n * p.theta).z for p in points]
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(zs[i] - zs[j]) < eps_min:
                raise SingularConfigurationError(
                    f"insertions {i} and {j} closer than eps_min={eps_min}"
                )
            if abs(powers[i] - powers[j]) < eps_min:
                raise OppositePointError(i, j, zs[i], zs[j], n)
    return powers


def _covering_prefactor(points: list[CirclePoint], deltas: Sequence[float], n: int) -> complex:
    """prod_i (n z_i^(n-1))^Delta_i, principal branch per insertion."""
    out = 1.0 + 0.0j
    for p, delta in zip(points, deltas):
        base = n * cmath.exp(1j * (n - 1) * p.theta)
        out *= principal_power(base, delta)
    return out


def evaluate_chiral(
    state: Union[Vacuum, OmegaN],
    fields: Sequence[Insertion],
    points: Sequence,
    algebra: Optional[CurrentAlgebraSpec] = None,
    normalization: float = 1.0,
    eps_min: float = DEFAULT_EPS_MIN,
) -> complex:
    """Evaluate a chiral correlator in the vacuum or a modified state.

    Supports current insertions (any number, needs ``algebra``) and pairs of
    chiral primary insertions of equal weight.  Insertion points must be on
    the circle; they are rejected if any two collide after z -> z^n.
    """
    if isinstance(state, Vacuum):
        n = 1
    elif isinstance(state, OmegaN):
        n = state.n
    else:
        raise TypeError(f"evaluate_chiral cannot handle state {state!r}")
    pts = _as_angle_points(points)
    if len(fields) != len(pts):
        raise ValueError("need one field descriptor per point")
    powers = _reject_opposite(pts, n, eps_min)

    if all(isinstance(fld, CurrentInsertion) for fld in fields):
        if algebra is None:
            raise ValueError("current correlators need a CurrentAlgebraSpec")
        colors = [fld.color for fld in fields]
        vacuum_value = current_npoint(algebra, colors, powers, eps_min=eps_min)
        prefactor = _covering_prefactor(pts, [1.0] * len(pts), n)
        return prefactor * vacuum_value

    if all(isinstance(fld, PrimaryInsertion) for fld in fields):
        if len(fields) != 2:
            raise ValueError("chiral primary correlators are closed-form for 2 points only")
        d1, d2 = fields[0].delta, fields[1].delta
        if d1 != d2:
            raise ValueError("the two-point function needs equal chiral weights")
        vacuum_value = normalization * principal_power(
            powers[0] - powers[1], -(d1 + d2)
        )
        prefactor = _covering_prefactor(pts, [d1, d2], n)
        return prefactor * vacuum_value

    raise ValueError("insertions must be all currents or all primaries")


def evaluate_nonchiral(
    state: Union[Vacuum, OmegaNN],
    fields: Sequence[PrimaryInsertion],
    points: Sequence,
    normalization: float = 1.0,
    eps_min: float = DEFAULT_EPS_MIN,
) -> complex:
    """Two-point function of non-chiral primaries, both sectors transformed.

    The anti-chiral arguments are the conjugate circle points; each sector
    carries its own (n z^(n-1))^Delta prefactor, and for equal weights the
    fractional-power phases of the two sectors cancel, leaving a positive
    value.
    """
    if isinstance(state, Vacuum):
        n = 1
    elif isinstance(state, OmegaNN):
        n = state.n
    else:
        raise TypeError(f"evaluate_nonchiral cannot handle state {state!r}")
    pts = _as_angle_points(points)
    if len(fields) != 2 or len(pts) != 2:
        raise ValueError("non-chiral correlators are closed-form for 2 points only")
    if any(fld.delta_bar is None for fld in fields):
        raise ValueError("non-chiral insertions need both weights")
    if fields[0].delta != fields[1].delta or fields[0].delta_bar != fields[1].delta_bar:
        raise ValueError("the two-point function needs matching weights")
    powers = _reject_opposite(pts, n, eps_min)
    conj_powers = [w.conjugate() for w in powers]
    spec = PrimaryFieldSpec(fields[0].delta, fields[0].delta_bar, normalization)
    vacuum_value = primary_two_point(
        powers[0], conj_powers[0], powers[1], conj_powers[1], spec, eps_min=eps_min
    )
    chiral_pref = _covering_prefactor(pts, [spec.delta, spec.delta], n)
    conj_pts = [CirclePoint(-p.theta) for p in pts]
    anti_pref = _covering_prefactor(conj_pts, [spec.delta_bar, spec.delta_bar], n)
    return chiral_pref * anti_pref * vacuum_value


def evaluate_product(
    state: ProductOmega2,
    fields: Sequence[Insertion],
    points: Sequence,
    algebra: Optional[CurrentAlgebraSpec] = None,
    normalization: float = 1.0,
    eps_min: float = DEFAULT_EPS_MIN,
) -> complex:
    """Product-state correlator: split insertions by arc, evaluate each group
    in the order-2 state, and multiply.  Cross-arc correlations are dropped
    by construction.  A point in neither arc is a localization error.
    """
    pts = _as_angle_points(points)
    if len(fields) != len(pts):
        raise ValueError("need one field descriptor per point")
    groups: dict[int, list[int]] = {1: [], 2: []}
    for idx, p in enumerate(pts):
        if state.interval1.contains(p):
            groups[1].append(idx)
        elif state.interval2.contains(p):
            groups[2].append(idx)
        else:
            raise LocalizationError(
                f"insertion {idx} at theta={p.theta:.12g} lies in neither arc"
            )
    value = 1.0 + 0.0j
    omega2 = OmegaN(2)
    for which in (1, 2):
        idxs = groups[which]
        if not idxs:
            continue
        value *= evaluate_chiral(
            omega2,
            [fields[i] for i in idxs],
            [pts[i] for i in idxs],
            algebra=algebra,
            normalization=normalization,
            eps_min=eps_min,
        )
    return value


def evaluate_state(
    state: StateSpec,
    fields: Sequence[Insertion],
    points: Sequence,
    algebra: Optional[CurrentAlgebraSpec] = None,
    normalization: float = 1.0,
    eps_min: float = DEFAULT_EPS_MIN,
) -> complex:
    """Dispatch a correlator evaluation on the state variant."""
    if isinstance(state, ProductOmega2):
        return evaluate_product(
            state, fields, points, algebra=algebra, normalization=normalization, eps_min=eps_min
        )
    if isinstance(state, OmegaNN):
        return evaluate_nonchiral(
            state, list(fields), points, normalization=normalization, eps_min=eps_min
        )
    return evaluate_chiral(
        state, fields, points, algebra=algebra, normalization=normalization, eps_min=eps_min
    )
