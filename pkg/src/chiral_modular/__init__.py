"""Geometric flows, states and correlators of a chiral theory on the unit circle.

The package certifies, at double precision, the structural identities tying
together three layers:

* exact circle geometry and the Moebius group PSU(1,1), including the
  n-fold covering flows with their sector-preserving root branches,
* the Virasoro algebra over exact rationals and its embedded sl(2)
  triples built from the modes {L_-n, L_0, L_n},
* closed-form vacuum correlators (primary two-point functions, current
  n-point functions) pulled back through z -> z^n to modified states,
  together with the thermal (KMS) and invariance identities they satisfy
  under the matching dilation flows.

All numerical checks report symmetric relative residuals; analytic
continuation of fractional powers is tracked pathwise, never taken from a
fixed principal branch.
"""

from chiral_modular.circle_geometry import (
    CirclePoint,
    CircleInterval,
    POINT_AT_INFINITY,
    cayley,
    inverse_cayley,
    preimage_intervals,
    has_opposite_points,
    rotated_tcp,
    quarter_circle,
)
from chiral_modular.moebius import (
    MoebiusElement,
    ComplexDilation,
    CoveringMap,
    dilation,
    interval_adapter,
    interval_dilation,
    covering_transform,
    dilation_n,
    complex_dilation_act,
    fixpoints_of_dilation_n,
)
from chiral_modular.virasoro import VirasoroElement, commutator, tilde_generators, check_sl2
from chiral_modular.correlators import (
    PrimaryFieldSpec,
    CurrentAlgebraSpec,
    CorrelatorResult,
    primary_two_point,
    current_npoint,
    wick_oracle_abelian,
    jacobian_factor,
)
from chiral_modular.states import StateSpec, Vacuum, OmegaN, OmegaNN, ProductOmega2
from chiral_modular.kms_verifier import (
    KmsCheckSpec,
    KmsReport,
    check_vacuum_kms,
    check_omega_n_kms,
    check_omega_n_invariance,
    check_product_invariance,
)

__all__ = [
    "CirclePoint",
    "CircleInterval",
    "POINT_AT_INFINITY",
    "cayley",
    "inverse_cayley",
    "preimage_intervals",
    "has_opposite_points",
    "rotated_tcp",
    "quarter_circle",
    "MoebiusElement",
    "ComplexDilation",
    "CoveringMap",
    "dilation",
    "interval_adapter",
    "interval_dilation",
    "covering_transform",
    "dilation_n",
    "complex_dilation_act",
    "fixpoints_of_dilation_n",
    "VirasoroElement",
    "commutator",
    "tilde_generators",
    "check_sl2",
    "PrimaryFieldSpec",
    "CurrentAlgebraSpec",
    "CorrelatorResult",
    "primary_two_point",
    "current_npoint",
    "wick_oracle_abelian",
    "jacobian_factor",
    "StateSpec",
    "Vacuum",
    "OmegaN",
    "OmegaNN",
    "ProductOmega2",
    "KmsCheckSpec",
    "KmsReport",
    "check_vacuum_kms",
    "check_omega_n_kms",
    "check_omega_n_invariance",
    "check_product_invariance",
]

__version__ = "0.1.0"
