"""Exact symbolic Virasoro algebra over the rationals.

Elements are finite rational linear combinations of the modes L_k plus a
central part.  The central charge c stays formal: the coefficient of the
central element is a degree-one polynomial a*c + b with exact rational a, b,
so identities involving the central shift are verified identically in c
rather than at a sampled value.

The bracket is

    [L_n, L_m] = (n - m) L_{n+m} + (c/12) (n^3 - n) delta_{n+m,0}

extended bilinearly; the central part commutes with everything.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class VirasoroElement:
    """A finite combination sum_k modes[k] * L_k + (central_c * c + central_1)."""

    modes: Mapping[int, Fraction] = field(default_factory=dict)
    central_c: Fraction = Fraction(0)
    central_1: Fraction = Fraction(0)

    def __post_init__(self):
        cleaned = {
            int(k): Fraction(v) for k, v in self.modes.items() if Fraction(v) != 0
        }
        object.__setattr__(self, "modes", cleaned)
        object.__setattr__(self, "central_c", Fraction(self.central_c))
        object.__setattr__(self, "central_1", Fraction(self.central_1))

    @classmethod
    def mode(cls, k: int, coeff: Rational = 1) -> "VirasoroElement":
        return cls({k: Fraction(coeff)})

    @classmethod
    def central(cls, c_coeff: Rational = 0, const: Rational = 0) -> "VirasoroElement":
        return cls({}, Fraction(c_coeff), Fraction(const))

    @classmethod
    def zero(cls) -> "VirasoroElement":
        return cls({})

    def is_zero(self) -> bool:
        return not self.modes and self.central_c == 0 and self.central_1 == 0

    def __add__(self, other: "VirasoroElement") -> "VirasoroElement":
        modes = dict(self.modes)
        for k, v in other.modes.items():
            modes[k] = modes.get(k, Fraction(0)) + v
        return VirasoroElement(
            modes, self.central_c + other.central_c, self.central_1 + other.central_1
        )

    def __sub__(self, other: "VirasoroElement") -> "VirasoroElement":
        return self + (-other)

    def __neg__(self) -> "VirasoroElement":
        return self.scale(-1)

    def scale(self, factor: Rational) -> "VirasoroElement":
        f = Fraction(factor)
        return VirasoroElement(
            {k: f * v for k, v in self.modes.items()},
            f * self.central_c,
            f * self.central_1,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, VirasoroElement):
            return NotImplemented
        return (
            self.modes == other.modes
            and self.central_c == other.central_c
            and self.central_1 == other.central_1
        )

    def __hash__(self):
        return hash(
            (frozenset(self.modes.items()), self.central_c, self.central_1)
        )

    def __repr__(self):
        parts = [f"{v}*L[{k}]" for k, v in sorted(self.modes.items())]
        if self.central_c:
            parts.append(f"{self.central_c}*c")
        if self.central_1:
            parts.append(f"{self.central_1}")
        return "VirasoroElement(" + (" + ".join(parts) if parts else "0") + ")"


def commutator(x: VirasoroElement, y: VirasoroElement) -> VirasoroElement:
    """Exact bilinear extension of the Virasoro bracket; central parts drop out."""
    modes: dict[int, Fraction] = {}
    central_c = Fraction(0)
    for n, xn in x.modes.items():
        for m, ym in y.modes.items():
            coeff = xn * ym
            structure = Fraction(n - m)
            if structure != 0:
                key = n + m
                modes[key] = modes.get(key, Fraction(0)) + coeff * structure
            if n + m == 0:
                central_c += coeff * Fraction(n**3 - n, 12)
    return VirasoroElement(modes, central_c, Fraction(0))


def tilde_generators(
    n: int,
) -> tuple[VirasoroElement, VirasoroElement, VirasoroElement]:
    """The rescaled sl(2) triple built from the modes {L_-n, L_0, L_n}.

    Returns (lower, middle, upper):
        lower  = L_{-n} / n
        middle = L_0 / n + (n^2 - 1)/(24 n) * c
        upper  = L_{+n} / n
    For n = 1 this is (L_{-1}, L_0, L_1) unchanged.
    """
    if n < 1:
        raise ValueError(f"mode index must be a positive integer, got {n}")
    inv = Fraction(1, n)
    lower = VirasoroElement.mode(-n, inv)
    upper = VirasoroElement.mode(n, inv)
    middle = VirasoroElement.mode(0, inv) + VirasoroElement.central(
        Fraction(n * n - 1, 24 * n)
    )
    return lower, middle, upper


def check_sl2(n: int) -> tuple[bool, dict[str, VirasoroElement]]:
    """Verify the sl(2) relations of the rescaled triple, exactly.

    Checks [upper, lower] = 2*middle, [upper, middle] = +upper and
    [lower, middle] = -lower.  Returns (ok, witnesses); each witness is the
    difference element of a failed relation (all zero elements when ok).
    """
    lower, middle, upper = tilde_generators(n)
    witnesses = {
        "[+,-] - 2*mid": commutator(upper, lower) - middle.scale(2),
        "[+,mid] - (+)": commutator(upper, middle) - upper,
        "[-,mid] + (-)": commutator(lower, middle) + lower,
    }
    ok = all(w.is_zero() for w in witnesses.values())
    return ok, witnesses
