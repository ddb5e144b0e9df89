"""QHFM: a hash function driven by a controlled quantum walk with memory."""

from .hashing import (
    INSTANCES,
    Digest,
    digest_bytes_for_collision,
    digest_from_distribution,
    hex_encode,
    instance,
    message_bits,
    qhfm_hash,
    qhfm_hash_bits,
)
from .walk import (
    AmplitudeState,
    CoinCoefficients,
    InvalidParams,
    WalkParams,
    coin_coefficients,
    evolve,
    init_state,
    position_distribution,
    step_qw1m,
    step_qw2m,
)

__version__ = "0.1.0"

__all__ = [
    "INSTANCES",
    "AmplitudeState",
    "CoinCoefficients",
    "Digest",
    "InvalidParams",
    "WalkParams",
    "coin_coefficients",
    "digest_bytes_for_collision",
    "digest_from_distribution",
    "evolve",
    "hex_encode",
    "init_state",
    "instance",
    "message_bits",
    "position_distribution",
    "qhfm_hash",
    "qhfm_hash_bits",
    "step_qw1m",
    "step_qw2m",
]
