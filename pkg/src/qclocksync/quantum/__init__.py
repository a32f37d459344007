"""Statevector construction and exact measurement sampling."""

from .measurement import (
    MeasurementAngles,
    OutcomeString,
    outcome_distribution,
    outcome_signs,
    product_expectation,
    sample_outcome,
    sample_outcomes,
)
from .samplers import (
    dicke_pair_correlation,
    dicke_visibility,
    ghz_closed_form_distribution,
    ghz_phase,
    pair_law,
    sample_bell_pair_outcomes,
    sample_dicke_pair,
    sample_ghz_closed_form,
)
from .states import (
    DEFAULT_STATEVECTOR_LIMIT,
    PureState,
    build_bell_pair,
    build_dicke_state,
    build_ghz_state,
    build_product_plus_state,
    evolve_free,
)

__all__ = [
    "DEFAULT_STATEVECTOR_LIMIT",
    "MeasurementAngles",
    "OutcomeString",
    "PureState",
    "build_bell_pair",
    "build_dicke_state",
    "build_ghz_state",
    "build_product_plus_state",
    "dicke_pair_correlation",
    "dicke_visibility",
    "evolve_free",
    "ghz_closed_form_distribution",
    "ghz_phase",
    "outcome_distribution",
    "outcome_signs",
    "pair_law",
    "product_expectation",
    "sample_bell_pair_outcomes",
    "sample_dicke_pair",
    "sample_ghz_closed_form",
    "sample_outcome",
    "sample_outcomes",
]
