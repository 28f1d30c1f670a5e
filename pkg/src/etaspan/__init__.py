"""Eta-quotients on Gamma0(N): enumeration, spanning checks and cuspidal groups."""

from .cuspgroup import closed_form_Ik, cuspidal_group, divisor_of_unit, unit_lattice
from .enumeration import (
    EnumerationSpec,
    count_eta_quotients,
    count_genus_zero,
    enumerate_eta_quotients,
    eta_quotients,
    exponent_bound,
    iter_eta_quotients,
)
from .errors import (
    EtaSpanError,
    FractionalValuationError,
    InvalidArgument,
    InvariantViolation,
    PreconditionViolation,
    RecognitionFailure,
)
from .etaquot import (
    EtaQuotient,
    apply_V,
    cusp_orders,
    existence_weight,
    is_holomorphic,
    ligozat_order,
    newman_is_valid,
    q_expansion,
    recognize,
)
from .gamma0 import dim_modular_forms, level_invariants, sturm_bound
from .magic import MagicEta, magic_eta, magic_weight
from .qseries import QSeries, eta_body
from .span import graded_ring_check, prime_level_obstruction, span_check, weak_span_check

__version__ = "0.1.0"
