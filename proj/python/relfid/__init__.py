"""Relative-fidelity bounds for quantum channel discrimination."""

from ._relfid import (
    ChannelPair,
    NumericalError,
    ValidationError,
    adaptivity_envelope,
    certify,
    eb_fcon,
    eb_fopt,
    eb_relfid_min0,
    fcon_min,
    fidelity,
    nuse_quadratic_bound,
    optimize_protocol,
    pauli_relfid_min,
    perr_lower,
    relfid_min,
    run_cli,
    trace_norm,
    unitary_fn_bound,
    unitary_relfid_min,
)

__all__ = [
    "ChannelPair",
    "NumericalError",
    "ValidationError",
    "adaptivity_envelope",
    "certify",
    "eb_fcon",
    "eb_fopt",
    "eb_relfid_min0",
    "fcon_min",
    "fidelity",
    "nuse_quadratic_bound",
    "optimize_protocol",
    "pauli_relfid_min",
    "perr_lower",
    "relfid_min",
    "run_cli",
    "trace_norm",
    "unitary_fn_bound",
    "unitary_relfid_min",
]
