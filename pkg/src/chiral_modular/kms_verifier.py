"""Residual-based certification of the thermal and invariance identities.

Every check evaluates the two sides of an identity from scratch (no shared
subexpressions) over a grid of flow times and configurations, and reports a
symmetric relative residual per case:

    residual = |lhs - rhs| / max(|lhs|, |rhs|, 1e-300).

Thermal (KMS) identities relate two operator orderings across the unit strip
in complexified flow time.  The certified relation is:

    [flowed correlator, analytically continued along tau = t + i*s,
     s: 0 -> 1, every fractional power branch-tracked]
  =
    [order-swapped correlator, evaluated directly at the landing point
     (the landing Moebius map of Dil(t + i) equals Dil(t)), principal
     branches].

The anti-chiral sector is carried at the conjugate parameter t - i*s, so the
two arguments of a non-chiral field stay conjugate-paired along the strip;
this is the pairing for which the chiral and anti-chiral monodromy phases
cancel for every weight (verified down to machine precision), and it pins
the half-strip convention the source equations leave open.  Dropping the
anti-chiral factor exposes the bare chiral monodromy: for weights with
2*Delta not an integer the chiral-only check fails by an O(1) phase, which
is the built-in negative control.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from chiral_modular.circle_geometry import (
    CircleInterval,
    CirclePoint,
    UPPER_SEMICIRCLE,
    preimage_intervals,
)
from chiral_modular.continuation import PathWalker, continued_power, principal_power
from chiral_modular.correlators import (
    DEFAULT_EPS_MIN,
    CurrentAlgebraSpec,
    current_npoint,
)
from chiral_modular.errors import LocalizationError
from chiral_modular.moebius import (
    ComplexDilation,
    CoveringMap,
    MoebiusElement,
    act,
    complex_dilation_act,
    complex_dilation_derivative,
    covering_derivative,
    covering_flow_anchored,
    covering_flow_derivative,
    covering_transform,
    dilation,
    dilation_n,
    dilation_n_derivative,
    interval_dilation,
    moebius_derivative,
)
from chiral_modular.states import (
    CurrentInsertion,
    OmegaN,
    ProductOmega2,
    evaluate_chiral,
    evaluate_product,
)

RESIDUAL_FLOOR = 1e-300

IDENTITIES = (
    "vacuum-kms",
    "general-field-kms",
    "omega-n-kms",
    "omega-n-invariance",
    "product-invariance",
)


def residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), RESIDUAL_FLOOR)


@dataclass(frozen=True)
class VacuumKmsConfig:
    """A primary two-point configuration for the strip-crossing check."""

    theta1: float
    theta2: float
    delta: float
    delta_bar: float
    normalization: float = 1.0
    chiral_only: bool = False


@dataclass(frozen=True)
class CurrentKmsConfig:
    """A current m-point configuration; the last insertion is flowed."""

    thetas: tuple
    colors: tuple


@dataclass(frozen=True)
class InvarianceConfig:
    """A current configuration plus the group element of the covering action."""

    thetas: tuple
    colors: tuple
    g: MoebiusElement


@dataclass(frozen=True)
class ProductInvarianceConfig:
    """Current insertions split across the two arcs of a product state."""

    thetas: tuple
    colors: tuple


Configuration = Union[
    VacuumKmsConfig, CurrentKmsConfig, InvarianceConfig, ProductInvarianceConfig
]


@dataclass(frozen=True)
class KmsCheckSpec:
    """What to verify: identity, flow-time grid, configurations, tolerances."""

    identity: str
    t_grid: tuple
    configurations: tuple
    tolerance: float = 1e-8
    continuation_steps: int = 200
    n: int = 1
    algebra: Optional[CurrentAlgebraSpec] = None
    base_interval: Optional[CircleInterval] = None
    eps_min: float = DEFAULT_EPS_MIN
    seed: Optional[int] = None

    def __post_init__(self):
        if self.identity not in IDENTITIES:
            raise ValueError(f"unknown identity {self.identity!r}")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if not self.t_grid:
            raise ValueError("t_grid must be nonempty")
        if not self.configurations:
            raise ValueError("need at least one configuration")
        if self.continuation_steps < 1:
            raise ValueError("continuation_steps must be positive")
        object.__setattr__(self, "t_grid", tuple(float(t) for t in self.t_grid))
        object.__setattr__(self, "configurations", tuple(self.configurations))


@dataclass(frozen=True)
class KmsCase:
    t: float
    config_id: str
    lhs: complex
    rhs: complex
    residual: float
    passed: bool


@dataclass(frozen=True)
class KmsReport:
    """Per-case values and verdicts of one identity check.

    ``lhs`` of a thermal case is the strip-continued flowed correlator,
    ``rhs`` the order-swapped correlator at the landing point.  Chain cases
    (config ids containing ``chain:``) compare intermediate reduction lines
    at real flow time.
    """

    identity: str
    seed: Optional[int]
    tolerance: float
    cases: tuple

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.cases), default=0.0)

    @property
    def verdict(self) -> str:
        return "pass" if all(c.passed for c in self.cases) else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json_dict(self) -> dict:
        return {
            "identity": self.identity,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "cases": [
                {
                    "t": c.t,
                    "config_id": c.config_id,
                    "lhs": [c.lhs.real, c.lhs.imag],
                    "rhs": [c.rhs.real, c.rhs.imag],
                    "residual": c.residual,
                    "pass": c.passed,
                }
                for c in self.cases
            ],
            "max_residual": self.max_residual,
            "verdict": self.verdict,
        }


def _report(spec: KmsCheckSpec, cases: list) -> KmsReport:
    return KmsReport(
        identity=spec.identity,
        seed=spec.seed,
        tolerance=spec.tolerance,
        cases=tuple(cases),
    )


# ---------------------------------------------------------------------------
# vacuum / general-field KMS for the primary two-point function


def _vacuum_kms_sides(
    cfg: VacuumKmsConfig, t: float, steps: int, singular_threshold: float
) -> tuple[complex, complex]:
    z1 = cmath.exp(1j * cfg.theta1)
    z2 = cmath.exp(1j * cfg.theta2)
    z1b, z2b = z1.conjugate(), z2.conjugate()

    def chiral_map(s: float):
        return ComplexDilation(t + 1j * s)

    def anti_map(s: float):
        return ComplexDilation(t - 1j * s)

    def w(s: float) -> complex:
        return complex_dilation_act(chiral_map(s), z2)

    def wb(s: float) -> complex:
        return complex_dilation_act(anti_map(s), z2b)

    def pre_c(s: float) -> complex:
        return complex_dilation_derivative(chiral_map(s), z2)

    def pre_a(s: float) -> complex:
        return complex_dilation_derivative(anti_map(s), z2b)

    kw = {"steps": steps, "singular_threshold": singular_threshold}
    lhs = cfg.normalization
    lhs *= continued_power(pre_c, cfg.delta, **kw)
    lhs *= continued_power(lambda s: z1 - w(s), -2.0 * cfg.delta, **kw)
    rhs = cfg.normalization
    rhs *= principal_power(pre_c(0.0), cfg.delta)
    rhs *= principal_power(w(1.0) - z1, -2.0 * cfg.delta)
    if not cfg.chiral_only:
        lhs *= continued_power(pre_a, cfg.delta_bar, **kw)
        lhs *= continued_power(lambda s: z1b - wb(s), -2.0 * cfg.delta_bar, **kw)
        rhs *= principal_power(pre_a(0.0), cfg.delta_bar)
        rhs *= principal_power(wb(1.0) - z1b, -2.0 * cfg.delta_bar)
    return lhs, rhs


def check_vacuum_kms(spec: KmsCheckSpec) -> KmsReport:
    """Strip-crossing check for the primary two-point function under Dil(t).

    Both weights appear with their own sector; configurations flagged
    ``chiral_only`` drop the anti-chiral factor from both sides and are
    expected to fail for weights with 2*Delta not an integer (the monodromy
    control).
    """
    threshold = spec.eps_min / 10.0
    cases = []
    for idx, cfg in enumerate(spec.configurations):
        for t in spec.t_grid:
            lhs, rhs = _vacuum_kms_sides(
                cfg, t, spec.continuation_steps, threshold
            )
            r = residual(lhs, rhs)
            cases.append(
                KmsCase(t, f"cfg{idx}", lhs, rhs, r, r <= spec.tolerance)
            )
    return _report(spec, cases)


# ---------------------------------------------------------------------------
# omega_n KMS under the modified dilations, for current correlators


def _omega_n_kms_cases(
    cfg: CurrentKmsConfig,
    t: float,
    n: int,
    algebra: CurrentAlgebraSpec,
    steps: int,
    singular_threshold: float,
    eps_min: float,
    tolerance: float,
    config_id: str,
) -> list:
    pts = [CirclePoint(th) for th in cfg.thetas]
    colors = list(cfg.colors)
    m = len(pts)
    zn = [CirclePoint(n * p.theta).z for p in pts]
    last = pts[-1]
    zn_last = zn[-1]
    fields = [CurrentInsertion(c) for c in colors]

    def chiral_map(s: float):
        return ComplexDilation(t + 1j * s)

    def radicand(s: float) -> complex:
        return complex_dilation_act(chiral_map(s), zn_last)

    # state precondition first: insertions colliding under z -> z^n are
    # rejected before any path is walked
    evaluate_chiral(OmegaN(n), fields, pts, algebra=algebra, eps_min=eps_min)

    # monitor the continuation path against every correlator singularity
    for other in zn[:-1]:
        PathWalker(
            lambda s, o=other: radicand(s) - o,
            steps=steps,
            singular_threshold=singular_threshold,
        ).log_increment()

    # the n-th root carried along the strip, anchored at the sheet-preserving
    # root of the real-time flow
    root_increment = PathWalker(
        radicand, steps=steps, singular_threshold=singular_threshold
    ).log_increment()
    w0 = dilation_n(n, t, last)
    w_end = w0.z * cmath.exp(root_increment / n)
    r_end = radicand(1.0)

    # continued flowed correlator, assembled exactly as the state definition
    # writes it: flow derivative, per-insertion jacobians, vacuum correlator
    pre_end = (
        last.z ** (n - 1)
        * w_end ** (1 - n)
        * complex_dilation_derivative(chiral_map(1.0), zn_last)
    )
    jac = 1.0 + 0.0j
    for p in pts[:-1]:
        jac *= n * cmath.exp(1j * (n - 1) * p.theta)
    jac *= n * w_end ** (n - 1)
    corr = current_npoint(algebra, colors, zn[:-1] + [r_end], eps_min=eps_min)
    lhs = pre_end * jac * corr

    # order-swapped correlator at the landing point (Dil_n(t+i) = Dil_n(t))
    w_point = dilation_n(n, t, last)
    swapped_fields = [fields[-1]] + fields[:-1]
    swapped_points = [w_point] + pts[:-1]
    rhs = dilation_n_derivative(n, t, last) * evaluate_chiral(
        OmegaN(n), swapped_fields, swapped_points, algebra=algebra, eps_min=eps_min
    )
    r_main = residual(lhs, rhs)
    cases = [KmsCase(t, config_id, lhs, rhs, r_main, r_main <= tolerance)]

    # intermediate reduction lines at real flow time, each computed on its own
    line1 = dilation_n_derivative(n, t, last) * evaluate_chiral(
        OmegaN(n), fields, pts[:-1] + [w_point], algebra=algebra, eps_min=eps_min
    )
    flowed_zn = act(dilation(t), zn_last)
    vac = current_npoint(algebra, colors, zn[:-1] + [flowed_zn], eps_min=eps_min)
    static = 1.0 + 0.0j
    for p in pts[:-1]:
        static *= n * cmath.exp(1j * (n - 1) * p.theta)
    line2 = (
        static
        * dilation_n_derivative(n, t, last)
        * (n * w_point.z ** (n - 1))
        * vac
    )
    line3 = (
        static
        * (n * last.z ** (n - 1))
        * moebius_derivative(dilation(t), zn_last)
        * vac
    )
    for label, a, b in (("chain:1=2", line1, line2), ("chain:2=3", line2, line3)):
        r = residual(a, b)
        cases.append(KmsCase(t, f"{config_id}/{label}", a, b, r, r <= tolerance))
    return cases


def check_omega_n_kms(spec: KmsCheckSpec, n: Optional[int] = None) -> KmsReport:
    """KMS of the order-n state with respect to the modified dilation flow.

    Current correlators only; n = 1 is the plain vacuum/dilation case.  The
    main case per (configuration, t) compares the strip-continued flowed
    correlator with the order-swapped one; two chain cases verify the
    reduction through the covering map at real flow time.
    """
    n = spec.n if n is None else n
    algebra = spec.algebra or CurrentAlgebraSpec.abelian()
    threshold = spec.eps_min / 10.0
    cases = []
    for idx, cfg in enumerate(spec.configurations):
        for t in spec.t_grid:
            cases.extend(
                _omega_n_kms_cases(
                    cfg,
                    t,
                    n,
                    algebra,
                    spec.continuation_steps,
                    threshold,
                    spec.eps_min,
                    spec.tolerance,
                    f"cfg{idx}",
                )
            )
    return _report(spec, cases)


# ---------------------------------------------------------------------------
# invariance of omega_n under covering transformations


def check_omega_n_invariance(spec: KmsCheckSpec, n: Optional[int] = None) -> KmsReport:
    """Invariance of the order-n state under the n-fold cover of PSU(1,1):

        prod_i (d g_n(z_i))^Delta_i * omega_n(prod phi(g_n(z_i)))
            = omega_n(prod phi(z_i)).
    """
    n = spec.n if n is None else n
    algebra = spec.algebra or CurrentAlgebraSpec.abelian()
    cases = []
    for idx, cfg in enumerate(spec.configurations):
        pts = [CirclePoint(th) for th in cfg.thetas]
        fields = [CurrentInsertion(c) for c in cfg.colors]
        cov = CoveringMap(n, cfg.g)
        moved = [covering_transform(cov, p) for p in pts]
        prefactor = 1.0 + 0.0j
        for p in pts:
            prefactor *= covering_derivative(cov, p)
        lhs = prefactor * evaluate_chiral(
            OmegaN(n), fields, moved, algebra=algebra, eps_min=spec.eps_min
        )
        rhs = evaluate_chiral(
            OmegaN(n), fields, pts, algebra=algebra, eps_min=spec.eps_min
        )
        r = residual(lhs, rhs)
        cases.append(KmsCase(0.0, f"cfg{idx}", lhs, rhs, r, r <= spec.tolerance))
    return _report(spec, cases)


# ---------------------------------------------------------------------------
# invariance of the product state under the order-2 modified dilations


def check_product_invariance(spec: KmsCheckSpec) -> KmsReport:
    """Invariance of the split product state under the order-2 dilation flow.

    Per (configuration, t) the four lines of the factorization chain are
    computed independently:  transformed product value; transformed groups
    evaluated separately; per-group invariance reduction; untransformed
    product value.  The main case compares the first and last lines.
    """
    base = spec.base_interval or UPPER_SEMICIRCLE
    state = ProductOmega2.from_base(base)
    algebra = spec.algebra or CurrentAlgebraSpec.abelian()
    default_base = (
        abs(base.start.theta - UPPER_SEMICIRCLE.start.theta) < 1e-15
        and abs(base.length - UPPER_SEMICIRCLE.length) < 1e-15
    )
    anchor = base.start.theta
    cases = []
    for idx, cfg in enumerate(spec.configurations):
        pts = [CirclePoint(th) for th in cfg.thetas]
        fields = [CurrentInsertion(c) for c in cfg.colors]
        group1 = [i for i, p in enumerate(pts) if state.interval1.contains(p)]
        group2 = [i for i, p in enumerate(pts) if state.interval2.contains(p)]
        if sorted(group1 + group2) != list(range(len(pts))):
            raise LocalizationError(
                "every product-state insertion must lie in one of the two arcs"
            )
        for t in spec.t_grid:
            flow = dilation(t) if default_base else interval_dilation(base, t)
            moved = [
                covering_flow_anchored(2, flow, p, anchor, base.length)
                for p in pts
            ]
            derivs = [
                covering_flow_derivative(2, flow, p, anchor, base.length)
                for p in pts
            ]
            for i, q in enumerate(moved):
                if not (state.interval1.contains(q) or state.interval2.contains(q)):
                    raise RuntimeError(
                        "internal geometry failure: transformed insertion "
                        f"{i} left both arcs (theta={q.theta:.12g})"
                    )
            prefactor = 1.0 + 0.0j
            for d in derivs:
                prefactor *= d

            line1 = prefactor * evaluate_product(
                state, fields, moved, algebra=algebra, eps_min=spec.eps_min
            )
            line2 = 1.0 + 0.0j
            line3 = 1.0 + 0.0j
            for group in (group1, group2):
                if not group:
                    continue
                gpre = 1.0 + 0.0j
                for i in group:
                    gpre *= derivs[i]
                line2 *= gpre * evaluate_chiral(
                    OmegaN(2),
                    [fields[i] for i in group],
                    [moved[i] for i in group],
                    algebra=algebra,
                    eps_min=spec.eps_min,
                )
                line3 *= evaluate_chiral(
                    OmegaN(2),
                    [fields[i] for i in group],
                    [pts[i] for i in group],
                    algebra=algebra,
                    eps_min=spec.eps_min,
                )
            line4 = evaluate_product(
                state, fields, pts, algebra=algebra, eps_min=spec.eps_min
            )
            main = residual(line1, line4)
            cid = f"cfg{idx}"
            cases.append(KmsCase(t, cid, line1, line4, main, main <= spec.tolerance))
            for label, a, b in (
                ("chain:1=2", line1, line2),
                ("chain:2=3", line2, line3),
                ("chain:3=4", line3, line4),
            ):
                r = residual(a, b)
                cases.append(
                    KmsCase(t, f"{cid}/{label}", a, b, r, r <= spec.tolerance)
                )
    return _report(spec, cases)


# ---------------------------------------------------------------------------
# seeded configuration samplers (seed is recorded in the resulting spec)


def _sample_angles(
    rng: random.Random,
    count: int,
    interval: CircleInterval,
    margin: float,
    min_sep: float,
) -> list[float]:
    lo = interval.start.theta + margin * interval.length
    hi = interval.start.theta + (1.0 - margin) * interval.length
    for _ in range(10_000):
        thetas = sorted(rng.uniform(lo, hi) for _ in range(count))
        zs = [cmath.exp(1j * th) for th in thetas]
        ok = all(
            abs(zs[i] - zs[j]) >= min_sep
            for i in range(count)
            for j in range(i + 1, count)
        )
        if ok:
            return thetas
    raise RuntimeError("could not sample a well-separated configuration")


def random_psu11(rng: random.Random, max_rapidity: float = 1.2) -> MoebiusElement:
    """A random element of SU(1,1): phases times a hyperbolic stretch."""
    r = rng.uniform(0.0, max_rapidity)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    psi = rng.uniform(0.0, 2.0 * math.pi)
    return MoebiusElement(
        cmath.exp(1j * phi) * math.cosh(r), cmath.exp(1j * psi) * math.sinh(r)
    )


def sample_vacuum_kms_spec(
    seed: int,
    t_grid: Sequence[float] = (-2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 2.0),
    deltas: Sequence[float] = (0.5, 1.0, 1.5),
    configs_per_delta: int = 20,
    chiral_only: bool = False,
    tolerance: float = 1e-8,
    continuation_steps: int = 200,
    identity: str = "vacuum-kms",
) -> KmsCheckSpec:
    """Random primary two-point configurations in the upper semicircle.

    Configurations keep every grid flow time away from the landing-point
    singularity z1 = Dil(t) z2.  For the chiral-only monodromy control use
    ``chiral_only=True`` with a weight whose doubled value is not an integer
    (default control weight: 1/4).
    """
    rng = random.Random(seed)
    if chiral_only and tuple(deltas) == (0.5, 1.0, 1.5):
        deltas = (0.25,)
    configs = []
    for delta in deltas:
        made = 0
        while made < configs_per_delta:
            th1, th2 = _sample_angles(rng, 2, UPPER_SEMICIRCLE, 0.05, 0.08)
            if rng.random() < 0.5:
                th1, th2 = th2, th1
            z1 = cmath.exp(1j * th1)
            if any(
                abs(z1 - act(dilation(t), cmath.exp(1j * th2))) < 0.03
                for t in t_grid
            ):
                continue
            configs.append(
                VacuumKmsConfig(th1, th2, delta, delta, 1.0, chiral_only)
            )
            made += 1
    return KmsCheckSpec(
        identity=identity,
        t_grid=tuple(t_grid),
        configurations=tuple(configs),
        tolerance=tolerance,
        continuation_steps=continuation_steps,
        seed=seed,
    )


def sample_omega_n_kms_spec(
    seed: int,
    n: int = 2,
    t_grid: Sequence[float] = (-2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 2.0),
    n_configs: int = 20,
    sizes: Sequence[int] = (2, 4),
    algebra: Optional[CurrentAlgebraSpec] = None,
    tolerance: float = 1e-8,
    continuation_steps: int = 200,
) -> KmsCheckSpec:
    """Current configurations confined to one preimage arc of the upper semicircle."""
    rng = random.Random(seed)
    algebra = algebra or CurrentAlgebraSpec.abelian()
    arc = preimage_intervals(UPPER_SEMICIRCLE, n)[0]
    configs = []
    for k in range(n_configs):
        size = sizes[k % len(sizes)]
        made = False
        while not made:
            thetas = _sample_angles(rng, size, arc, 0.08, 0.05 / n)
            pts = [CirclePoint(th) for th in thetas]
            zn = [CirclePoint(n * p.theta).z for p in pts]
            last = zn[-1]
            # keep the flowed covering image clear of the other insertions
            if any(
                abs(act(dilation(t), last) - other) < 0.03
                for t in t_grid
                for other in zn[:-1]
            ):
                continue
            colors = tuple(rng.randrange(algebra.dim) for _ in range(size))
            configs.append(CurrentKmsConfig(tuple(thetas), colors))
            made = True
    return KmsCheckSpec(
        identity="omega-n-kms",
        t_grid=tuple(t_grid),
        configurations=tuple(configs),
        tolerance=tolerance,
        continuation_steps=continuation_steps,
        n=n,
        algebra=algebra,
        seed=seed,
    )


def sample_invariance_spec(
    seed: int,
    n: int = 2,
    n_configs: int = 100,
    sizes: Sequence[int] = (2, 4),
    algebra: Optional[CurrentAlgebraSpec] = None,
    tolerance: float = 1e-8,
) -> KmsCheckSpec:
    """Random group elements and current configurations within one sector."""
    rng = random.Random(seed)
    algebra = algebra or CurrentAlgebraSpec.abelian()
    width = 2.0 * math.pi / n if n > 1 else 2.0 * math.pi - 1e-9
    sector = CircleInterval.from_angles(0.0, width)
    configs = []
    for k in range(n_configs):
        size = sizes[k % len(sizes)]
        thetas = _sample_angles(rng, size, sector, 0.05, 0.04 / n)
        colors = tuple(rng.randrange(algebra.dim) for _ in range(size))
        configs.append(InvarianceConfig(tuple(thetas), colors, random_psu11(rng)))
    return KmsCheckSpec(
        identity="omega-n-invariance",
        t_grid=(0.0,),
        configurations=tuple(configs),
        tolerance=tolerance,
        n=n,
        algebra=algebra,
        seed=seed,
    )


def sample_product_invariance_spec(
    seed: int,
    t_grid: Sequence[float] = (-2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 2.0),
    n_configs: int = 10,
    per_side: int = 2,
    algebra: Optional[CurrentAlgebraSpec] = None,
    tolerance: float = 1e-8,
) -> KmsCheckSpec:
    """Insertions split across the two preimage arcs of the upper semicircle."""
    rng = random.Random(seed)
    algebra = algebra or CurrentAlgebraSpec.abelian()
    arcs = preimage_intervals(UPPER_SEMICIRCLE, 2)
    min_flowed_sep = 3e-6
    configs = []
    for _ in range(n_configs):
        for _attempt in range(10_000):
            groups = [
                _sample_angles(rng, per_side, arc, 0.12, 0.04) for arc in arcs
            ]
            # the flow contracts each arc toward an endpoint exponentially in
            # |t|; keep every same-arc pair separated across the whole grid
            ok = True
            for t in t_grid:
                for thetas in groups:
                    moved = [dilation_n(2, t, CirclePoint(th)).z for th in thetas]
                    if any(
                        abs(moved[i] - moved[j]) < min_flowed_sep
                        for i in range(len(moved))
                        for j in range(i + 1, len(moved))
                    ):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                break
        else:
            raise RuntimeError("could not sample a flow-separated configuration")
        thetas = [th for group in groups for th in group]
        colors = tuple(rng.randrange(algebra.dim) for _ in range(len(thetas)))
        configs.append(ProductInvarianceConfig(tuple(thetas), colors))
    return KmsCheckSpec(
        identity="product-invariance",
        t_grid=tuple(t_grid),
        configurations=tuple(configs),
        tolerance=tolerance,
        algebra=algebra,
        seed=seed,
    )


def run_check(spec: KmsCheckSpec) -> KmsReport:
    """Dispatch a check spec to the matching verifier."""
    if spec.identity in ("vacuum-kms", "general-field-kms"):
        return check_vacuum_kms(spec)
    if spec.identity == "omega-n-kms":
        return check_omega_n_kms(spec)
    if spec.identity == "omega-n-invariance":
        return check_omega_n_invariance(spec)
    if spec.identity == "product-invariance":
        return check_product_invariance(spec)
    raise ValueError(f"unknown identity {spec.identity!r}")
