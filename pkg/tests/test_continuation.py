import cmath
import math

import pytest

from chiral_modular.continuation import (
    PathWalker,
    continued_power,
    continued_power_discrete,
    monitored_endpoint,
    principal_power,
)
from chiral_modular.errors import PathSingularityError


def test_principal_power_integer_is_exact():
    z = 0.3 + 0.4j
    assert principal_power(z, 3) == z**3
    assert principal_power(z, -2) == z**-2
    with pytest.raises(ZeroDivisionError):
        principal_power(0.0, 0.5)


def test_full_loop_winding_flips_square_root():
    # base runs once around the origin; sqrt lands on the other sheet
    f = lambda s: cmath.exp(2j * math.pi * s)
    assert abs(continued_power(f, 0.5) + 1.0) < 1e-12
    assert abs(principal_power(f(1.0), 0.5) - 1.0) < 1e-12
    # integer powers are single-valued whatever the winding
    assert abs(continued_power(f, 2.0) - 1.0) < 1e-12


def test_half_loop_matches_principal():
    f = lambda s: cmath.exp(1j * math.pi * 0.9 * s)
    got = continued_power(f, 0.5)
    assert abs(got - principal_power(f(1.0), 0.5)) < 1e-12


def test_winding_with_varying_modulus():
    f = lambda s: (1.0 + s) * cmath.exp(-4j * math.pi * s)  # two clockwise turns
    got = continued_power(f, 0.25)
    expected = 2.0**0.25 * cmath.exp(1j * 0.25 * (-4 * math.pi))
    assert abs(got - expected) < 1e-12


def test_singularity_detection():
    f = lambda s: s - 0.5 + 0j
    with pytest.raises(PathSingularityError) as err:
        PathWalker(f, steps=100, singular_threshold=1e-7).log_increment()
    assert abs(err.value.s - 0.5) < 0.02


def test_near_miss_is_resolved_by_refinement():
    # passes within 1e-3 of the origin: fine at default threshold, and the
    # adaptive bisection keeps every tracked turn under control
    f = lambda s: (s - 0.5) + 1e-3j
    inc = PathWalker(f, steps=50).log_increment()
    direct = cmath.log(f(1.0)) - cmath.log(f(0.0))
    assert abs(inc - direct) < 1e-9  # no net winding for this path


def test_step_halving_stability():
    f = lambda s: cmath.exp((0.7 + 2.3j) * s) + 0.2
    a = continued_power(f, 0.35, steps=200)
    b = continued_power(f, 0.35, steps=100)
    assert abs(a - b) < 1e-12 * abs(a)


def test_monitored_endpoint_returns_value():
    f = lambda s: 2.0 + s + 0j
    assert monitored_endpoint(f) == 3.0


def test_discrete_path_winding():
    path = [cmath.exp(2j * math.pi * k / 40) for k in range(41)]
    assert abs(continued_power_discrete(path, 0.5) + 1.0) < 1e-12
    with pytest.raises(PathSingularityError):
        continued_power_discrete([1.0, -1.0 + 1e-9j, 1.0], 0.5)  # too coarse
    with pytest.raises(ValueError):
        continued_power_discrete([], 0.5)
