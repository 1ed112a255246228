"""Closed-form vacuum correlation functions.

Two families are implemented:

* the conformal primary two-point function, with the chiral and anti-chiral
  factors kept separate (they carry independent branch data under analytic
  continuation and must never be collapsed into a real modulus), and
* current m-point functions of a level-k current algebra, computed by
  peeling the first insertion: each contraction with a later insertion
  contributes a k*delta/(z_1-z_j)^2 term times an (m-2)-point function, and
  each structure-constant term contributes i*f/(z_1-z_j) times an
  (m-1)-point function with the rotated color inserted at position j.

A sum over perfect matchings is kept as an independent oracle for the
abelian (quasifree) case.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Optional, Sequence

from chiral_modular.continuation import continued_power_discrete, principal_power
from chiral_modular.errors import SingularConfigurationError

DEFAULT_EPS_MIN = 1e-6


@dataclass(frozen=True)
class PrimaryFieldSpec:
    """Chiral/anti-chiral weights and normalization of a primary two-point pair."""

    delta: float
    delta_bar: float
    normalization: float = 1.0

    def __post_init__(self):
        if self.delta < 0 or self.delta_bar < 0:
            raise ValueError("conformal weights must be non-negative")
        if self.normalization <= 0:
            raise ValueError("two-point normalization must be positive")

    @property
    def is_local(self) -> bool:
        """The scalar locality condition: equal chiral and anti-chiral weight."""
        return self.delta == self.delta_bar

    @classmethod
    def local(cls, delta: float, normalization: float = 1.0) -> "PrimaryFieldSpec":
        return cls(delta, delta, normalization)


@dataclass(frozen=True)
class CurrentAlgebraSpec:
    """Structure constants and level defining a current algebra.

    ``f[a][b][c]`` must be antisymmetric in (a, b) and satisfy the Jacobi
    identity; both are validated at construction.  Colors are 0-based.
    """

    dim: int
    level: float
    f: tuple = field(default=None)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("algebra dimension must be positive")
        if self.level <= 0:
            raise ValueError("level must be positive")
        f = self.f
        if f is None:
            f = tuple(
                tuple((0.0,) * self.dim for _ in range(self.dim))
                for _ in range(self.dim)
            )
        else:
            f = tuple(tuple(tuple(float(x) for x in row) for row in plane) for plane in f)
        if len(f) != self.dim or any(
            len(plane) != self.dim or any(len(row) != self.dim for row in plane)
            for plane in f
        ):
            raise ValueError("structure constant table must be dim x dim x dim")
        object.__setattr__(self, "f", f)
        self._validate_antisymmetry()
        self._validate_jacobi()

    def _validate_antisymmetry(self, tol: float = 1e-12):
        for a in range(self.dim):
            for b in range(self.dim):
                for c in range(self.dim):
                    if abs(self.f[a][b][c] + self.f[b][a][c]) > tol:
                        raise ValueError(
                            f"structure constants not antisymmetric at ({a},{b},{c})"
                        )

    def _validate_jacobi(self, tol: float = 1e-12):
        rng = range(self.dim)
        for a in rng:
            for b in rng:
                for c in rng:
                    for d in rng:
                        total = sum(
                            self.f[a][b][e] * self.f[e][c][d]
                            + self.f[b][c][e] * self.f[e][a][d]
                            + self.f[c][a][e] * self.f[e][b][d]
                            for e in rng
                        )
                        if abs(total) > tol:
                            raise ValueError(
                                f"structure constants violate the Jacobi identity "
                                f"at ({a},{b},{c},{d}): {total}"
                            )

    @classmethod
    def abelian(cls, dim: int = 1, level: float = 1.0) -> "CurrentAlgebraSpec":
        """dim commuting currents (all structure constants zero)."""
        return cls(dim=dim, level=level)

    @classmethod
    def su2(cls, level: float = 1.0) -> "CurrentAlgebraSpec":
        """Three currents with f[a][b][c] the Levi-Civita symbol."""
        eps = [[[0.0] * 3 for _ in range(3)] for _ in range(3)]
        for a, b, c, sign in (
            (0, 1, 2, 1.0),
            (1, 2, 0, 1.0),
            (2, 0, 1, 1.0),
            (1, 0, 2, -1.0),
            (2, 1, 0, -1.0),
            (0, 2, 1, -1.0),
        ):
            eps[a][b][c] = sign
        return cls(dim=3, level=level, f=eps)

    @property
    def is_abelian(self) -> bool:
        return all(
            x == 0.0 for plane in self.f for row in plane for x in row
        )


@dataclass(frozen=True)
class CorrelatorResult:
    """A correlator value together with the data that produced it."""

    value: complex
    metadata: dict = field(default_factory=dict)


def _check_separations(points: Sequence[complex], eps_min: float):
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(points[i] - points[j]) < eps_min:
                raise SingularConfigurationError(
                    f"points {i} and {j} closer than eps_min={eps_min}: "
                    f"{points[i]:.12g}, {points[j]:.12g}"
                )


def primary_two_point(
    z1: complex,
    z1_bar: complex,
    z2: complex,
    z2_bar: complex,
    spec: PrimaryFieldSpec,
    eps_min: float = DEFAULT_EPS_MIN,
) -> complex:
    """The conformal two-point function with separate chiral factors:

        normalization * (z1 - z2)^(-2*delta) * (z1_bar - z2_bar)^(-2*delta_bar).

    On the circle with conjugate anti-chiral arguments and equal weights this
    is the positive value normalization / |z1 - z2|^(4*delta).
    """
    _check_separations([z1, z2], eps_min)
    _check_separations([z1_bar, z2_bar], eps_min)
    chiral = principal_power(z1 - z2, -2.0 * spec.delta)
    anti = principal_power(z1_bar - z2_bar, -2.0 * spec.delta_bar)
    return spec.normalization * chiral * anti


def current_npoint(
    spec: CurrentAlgebraSpec,
    colors: Sequence[int],
    points: Sequence[complex],
    eps_min: float = DEFAULT_EPS_MIN,
) -> complex:
    """Vacuum m-point function of currents, by peeling the first insertion.

    Base cases: the empty product is 1, a single current averages to 0.
    Within one evaluation, sub-correlators are memoized on the surviving
    (color, point-index) pairs.
    """
    m = len(colors)
    if m != len(points):
        raise ValueError("need one color per point")
    for a in colors:
        if not 0 <= a < spec.dim:
            raise ValueError(f"color index {a} out of range 0..{spec.dim - 1}")
    pts = [complex(z) for z in points]
    _check_separations(pts, eps_min)

    memo: dict = {}

    def recurse(entries: tuple) -> complex:
        if len(entries) == 0:
            return 1.0 + 0.0j
        if len(entries) == 1:
            return 0.0 + 0.0j
        cached = memo.get(entries)
        if cached is not None:
            return cached
        a1, i1 = entries[0]
        z1c = pts[i1]
        total = 0.0 + 0.0j
        for j in range(1, len(entries)):
            aj, ij = entries[j]
            dz = z1c - pts[ij]
            if spec.level != 0.0 and a1 == aj:
                rest = entries[1:j] + entries[j + 1 :]
                total += spec.level / (dz * dz) * recurse(rest)
            for d in range(spec.dim):
                fval = spec.f[a1][aj][d]
                if fval != 0.0:
                    replaced = entries[1:j] + ((d, ij),) + entries[j + 1 :]
                    total += 1j * fval / dz * recurse(replaced)
        memo[entries] = total
        return total

    return recurse(tuple((int(a), i) for i, a in enumerate(colors)))


def wick_oracle_abelian(
    level: float, points: Sequence[complex], eps_min: float = DEFAULT_EPS_MIN
) -> complex:
    """Independent oracle for the abelian case: sum over perfect matchings of
    prod level/(z_i - z_j)^2.  Odd counts give 0, the empty product gives 1.
    """
    pts = [complex(z) for z in points]
    _check_separations(pts, eps_min)
    if len(pts) % 2 == 1:
        return 0.0 + 0.0j

    def pairings(indices: tuple) -> complex:
        if not indices:
            return 1.0 + 0.0j
        first = indices[0]
        total = 0.0 + 0.0j
        for pos in range(1, len(indices)):
            partner = indices[pos]
            rest = indices[1:pos] + indices[pos + 1 :]
            dz = pts[first] - pts[partner]
            total += level / (dz * dz) * pairings(rest)
        return total

    return pairings(tuple(range(len(pts))))


def jacobian_factor(
    derivative: complex,
    delta: float,
    path: Optional[Sequence[complex]] = None,
) -> complex:
    """(derivative)**delta, the transformation weight of a primary field.

    Integer weights are exact powers.  For non-integer weights the branch is
    read from ``path`` when given: a dense sequence of derivative samples
    along the declared parameter path, ending at ``derivative``, whose
    winding fixes the sheet.  Without a path the principal branch is used.
    """
    if derivative == 0:
        raise SingularConfigurationError("vanishing transformation derivative")
    if path is None or delta == int(delta):
        return principal_power(derivative, delta)
    samples = list(path)
    if not samples or abs(samples[-1] - derivative) > 1e-9 * max(1.0, abs(derivative)):
        raise ValueError("continuation path must end at the requested derivative")
    return continued_power_discrete(samples, delta)
