"""QHFM digests: message bits in, quantised walker distribution out."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .walk import WalkParams, as_bits, evolve, position_distribution

# Shared by every published instance: l, theta0, theta1, alpha.
DEFAULT_L = 8
DEFAULT_THETA0 = math.pi / 4
DEFAULT_THETA1 = math.pi / 3
DEFAULT_ALPHA = math.pi / 4

# output bits -> (n, m)
INSTANCES = {
    296: (37, 8),
    264: (33, 8),
    221: (17, 13),
    200: (25, 8),
    195: (15, 13),
    136: (17, 8),
    120: (15, 8),
}


def instance(length: int) -> WalkParams:
    """Parameters of the published instance producing ``length``-bit digests."""
    try:
        n, m = INSTANCES[int(length)]
    except (KeyError, ValueError, TypeError):
        supported = ", ".join(str(k) for k in INSTANCES)
        raise ValueError(
            f"unsupported instance length {length!r}; supported: {supported}"
        ) from None
    return WalkParams(n, m, DEFAULT_L, DEFAULT_THETA0, DEFAULT_THETA1, DEFAULT_ALPHA)


@dataclass(frozen=True)
class Digest:
    """``n`` blocks of ``m`` bits, most significant block (node 0) first."""

    blocks: tuple
    m: int

    def __post_init__(self):
        blocks = tuple(int(b) for b in self.blocks)
        limit = 1 << self.m
        for b in blocks:
            if not 0 <= b < limit:
                raise ValueError(f"block {b} does not fit in {self.m} bits")
        object.__setattr__(self, "blocks", blocks)

    @property
    def bit_length(self) -> int:
        return len(self.blocks) * self.m

    def to_int(self) -> int:
        value = 0
        for b in self.blocks:
            value = (value << self.m) | b
        return value

    def to_bits(self) -> np.ndarray:
        """Big-endian bit array of length ``n*m``."""
        shifts = np.arange(self.m - 1, -1, -1, dtype=np.int64)
        blocks = np.array(self.blocks, dtype=np.int64)
        return ((blocks[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)

    @classmethod
    def from_bits(cls, bits, m: int) -> "Digest":
        bits = as_bits(bits)
        if bits.size % m:
            raise ValueError(f"{bits.size} bits is not a multiple of m={m}")
        weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
        blocks = bits.reshape(-1, m).astype(np.int64) @ weights
        return cls(tuple(int(b) for b in blocks), m)

    def hex(self) -> str:
        return hex_encode(self)

    def collision_bytes(self) -> bytes:
        return digest_bytes_for_collision(self)

    def __str__(self):
        return self.hex()


def message_bits(data: bytes) -> np.ndarray:
    """Bits of ``data``, most significant bit of each byte first."""
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))


def digest_from_distribution(probs, m: int, l: int) -> Digest:
    """Block ``x`` is ``floor(p_x * 10**l) mod 2**m``.

    The product is a single binary64 multiply; no decimal arithmetic.
    """
    scale = float(10**l)
    mask = (1 << m) - 1
    blocks = tuple(math.floor(float(p) * scale) & mask for p in probs)
    return Digest(blocks, m)


def qhfm_hash_bits(bits, params: WalkParams) -> Digest:
    """Digest of an arbitrary bit sequence (lengths need not be byte multiples)."""
    probs = position_distribution(evolve(params, bits))
    return digest_from_distribution(probs, params.m, params.l)


def qhfm_hash(data: bytes, params: WalkParams) -> Digest:
    return qhfm_hash_bits(message_bits(data), params)


def hex_encode(digest: Digest) -> str:
    """Upper-case hex, ``ceil(L/4)`` digits, right-aligned on nibble boundaries.

    When ``L`` is not a multiple of 4 the leading digit carries only the
    ``L mod 4`` most significant bits.
    """
    width = -(-digest.bit_length // 4)
    return format(digest.to_int(), f"0{width}X")


def hex_decode(text: str, params: WalkParams) -> Digest:
    value = int(text.strip(), 16)
    if value >> params.bit_length:
        raise ValueError(f"hex value exceeds {params.bit_length} bits")
    m = params.m
    blocks = [(value >> (m * (params.n - 1 - i))) & ((1 << m) - 1) for i in range(params.n)]
    return Digest(tuple(blocks), m)


def digest_bytes_for_collision(digest: Digest) -> bytes:
    """``ceil(L/8)`` big-endian bytes; leading zero bits pad ``L`` up to a multiple of 8."""
    g = -(-digest.bit_length // 8)
    return digest.to_int().to_bytes(g, "big")
