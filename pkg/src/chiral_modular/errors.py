"""Exception types shared across the package."""


class SingularConfigurationError(ValueError):
    """Points too close together (or coincident) for a correlator evaluation."""


class OppositePointError(SingularConfigurationError):
    """Two insertion points collide after the covering map z -> z^n.

    Carries the offending pair so callers can report which insertions
    break the state's faithfulness precondition.
    """

    def __init__(self, i: int, j: int, zi: complex, zj: complex, n: int):
        self.pair = (i, j)
        self.points = (zi, zj)
        self.n = n
        super().__init__(
            f"insertions {i} and {j} collide under z -> z^{n}: "
            f"z_{i}={zi:.12g}, z_{j}={zj:.12g}"
        )


class LocalizationError(ValueError):
    """An insertion point lies outside the region a state is defined on."""


class PathSingularityError(RuntimeError):
    """The analytic-continuation path passed too close to a singularity."""

    def __init__(self, s: float, detail: str = ""):
        self.s = s
        msg = f"continuation path singular near s={s:.6g}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class SingularPointError(ValueError):
    """Derivative requested at a pole or a root branch-cut boundary."""
