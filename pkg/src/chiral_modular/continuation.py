"""Analytic continuation of complex powers along parameter paths.

A fractional power of a quantity that moves along a path must not be read
from a fixed principal branch: the branch is carried along the path by
tracking the accumulated argument of the base.  The walker below refines its
steps adaptively whenever the base turns or shrinks too fast, and raises
:class:`~chiral_modular.errors.PathSingularityError` when the path passes
too close to a zero of the base.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Sequence

from chiral_modular.errors import PathSingularityError

# largest argument turn accepted in a single step before refining
_MAX_TURN = 0.8
# largest log-magnitude jump accepted in a single step before refining
_MAX_STRETCH = 1.2
_MAX_DEPTH = 48


def principal_power(base: complex, exponent: float) -> complex:
    """base**exponent on the principal branch; exact integer powers when possible."""
    if base == 0:
        raise ZeroDivisionError("power of zero base")
    if exponent == int(exponent):
        return complex(base) ** int(exponent)
    return cmath.exp(exponent * cmath.log(base))


class PathWalker:
    """Walks s in [0, 1], tracking the continued logarithm of f(s).

    ``steps`` is the initial uniform resolution; steps are bisected whenever
    the base turns by more than ~0.8 rad or its magnitude jumps by more than
    a factor e^1.2, so the tracked winding cannot skip a sheet.
    """

    def __init__(
        self,
        f: Callable[[float], complex],
        steps: int = 200,
        singular_threshold: float = 1e-7,
    ):
        if steps < 1:
            raise ValueError("need at least one continuation step")
        self.f = f
        self.steps = steps
        self.singular_threshold = singular_threshold

    def _check(self, s: float, v: complex) -> complex:
        if abs(v) < self.singular_threshold:
            raise PathSingularityError(s, f"|base|={abs(v):.3g}")
        return v

    def log_increment(self, s0: float = 0.0, s1: float = 1.0) -> complex:
        """Continued log f(s1) - log f(s0), winding included."""
        v0 = self._check(s0, self.f(s0))
        total_arg = 0.0
        prev_s, prev_v = s0, v0
        for k in range(1, self.steps + 1):
            s = s0 + (s1 - s0) * k / self.steps
            v = self._check(s, self.f(s))
            total_arg += self._segment_arg(prev_s, prev_v, s, v, 0)
            prev_s, prev_v = s, v
        return complex(math.log(abs(prev_v)) - math.log(abs(v0)), total_arg)

    def _segment_arg(
        self, sa: float, va: complex, sb: float, vb: complex, depth: int
    ) -> float:
        ratio = vb / va
        turn = abs(cmath.phase(ratio))
        stretch = abs(math.log(abs(ratio)))
        if turn <= _MAX_TURN and stretch <= _MAX_STRETCH:
            return cmath.phase(ratio)
        if depth >= _MAX_DEPTH:
            raise PathSingularityError(
                0.5 * (sa + sb), "cannot resolve branch turn by refinement"
            )
        sm = 0.5 * (sa + sb)
        vm = self._check(sm, self.f(sm))
        return self._segment_arg(sa, va, sm, vm, depth + 1) + self._segment_arg(
            sm, vm, sb, vb, depth + 1
        )


def continued_power(
    f: Callable[[float], complex],
    exponent: float,
    steps: int = 200,
    singular_threshold: float = 1e-7,
) -> complex:
    """(f(1))**exponent, branch continued from the principal branch at f(0)."""
    walker = PathWalker(f, steps=steps, singular_threshold=singular_threshold)
    anchor = principal_power(f(0.0), exponent)
    return anchor * cmath.exp(exponent * walker.log_increment())


def continued_power_discrete(
    values: Sequence[complex], exponent: float
) -> complex:
    """Continued power along an explicit list of base samples.

    The first entry anchors the principal branch.  Consecutive samples must
    be dense enough that the base never turns by pi or more within one step;
    steps turning by more than 2.8 rad are rejected as unresolvable.
    """
    if not values:
        raise ValueError("empty continuation path")
    if any(v == 0 for v in values):
        raise ZeroDivisionError("continuation path passes through zero")
    total_arg = cmath.phase(values[0])
    for a, b in zip(values, values[1:]):
        step = cmath.phase(b / a)
        if abs(step) > 2.8:
            raise PathSingularityError(
                0.0, "discrete continuation path is too coarse to track the branch"
            )
        total_arg += step
    return abs(values[-1]) ** exponent * cmath.exp(1j * exponent * total_arg)


def monitored_endpoint(
    f: Callable[[float], complex],
    steps: int = 200,
    singular_threshold: float = 1e-7,
) -> complex:
    """f(1), after walking the path only to monitor singularity proximity.

    Used for single-valued (integer-power, rational) factors, where the
    continuation cannot change the value but the path may still pass near a
    pole of the correlator.
    """
    walker = PathWalker(f, steps=steps, singular_threshold=singular_threshold)
    walker.log_increment()
    return f(1.0)
