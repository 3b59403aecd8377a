"""Diagonal Z-factor state preparation circuits."""

import json

from ._srbb_qsp import (
    Circuit,
    ValidationError,
    exact_prepare,
    fidelity,
    haar_random_state,
    hellinger,
    modulus_template,
    parse_qasm,
    phase_template,
    predicted_counts,
    trace_distance,
    train,
)
from ._srbb_qsp import state_from_spec as _state_from_spec


def state_from_spec(spec):
    """Realizes a state spec given as a dict or a JSON string."""
    return _state_from_spec(spec if isinstance(spec, str) else json.dumps(spec))


__all__ = [
    "Circuit",
    "ValidationError",
    "exact_prepare",
    "fidelity",
    "haar_random_state",
    "hellinger",
    "modulus_template",
    "parse_qasm",
    "phase_template",
    "predicted_counts",
    "state_from_spec",
    "trace_distance",
    "train",
]
