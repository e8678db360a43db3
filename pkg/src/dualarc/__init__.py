"""Generalised dual arcs over finite fields: construction, verification and secret sharing."""

from __future__ import annotations

from .gf import FieldElement, FieldSpec, field_of_order, make_field
from .linalg import Subspace, count_superspaces, meet, perp, points, random_superspace, span
from .arcs import (
    DualArcFamily,
    VerificationReport,
    classify_pair_spans,
    contact_points,
    dualize,
    extend_deficient,
    verify,
    verify_t_d1_hypotheses,
)
from .veronese import VeroneseContext, build_arc, build_dual_arc, dual_element, arc_element, nucleus, theta, zeta
from .sharing import (
    SchemeParams,
    ShareBundle,
    attack_probability,
    deal,
    reconstruct,
    simulate_attack,
    twisted_cubic_secret,
)

__version__ = "0.1.0"
