"""Reproducible message corpora for the statistical battery.

Messages come either from a seeded SplitMix64 stream or from the lines of a
text file.  Every random decision (message length, message bits, which line
to draw, mutation position) is taken from one generator in a fixed order, so
a corpus is fully determined by ``(source, N, seed)``.

SplitMix64, as used here::

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    output z ^ (z >> 31)

``below(k)`` draws words until one is ``>= 2**64 mod k`` and returns it
``mod k`` (unbiased).  ``bits(k)`` concatenates ``ceil(k/64)`` words, most
significant bit first, and keeps the first ``k`` bits.

Per draw, the PRNG source takes: length ``256 + below(3841)``, the message
bits, then the flip position ``below(length)``.  The file source takes the
line index ``below(lines)`` then the flip position.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..hashing import message_bits
from ..walk import as_bits

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

MIN_MESSAGE_BITS = 256
MAX_MESSAGE_BITS = 4096

MUTATIONS = ("flip", "insert", "delete")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        if bound < 1:
            raise ValueError(f"bound must be positive, got {bound}")
        threshold = (1 << 64) % bound
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % bound

    def bits(self, count: int) -> np.ndarray:
        words = -(-count // 64)
        raw = b"".join(self.next_u64().to_bytes(8, "big") for _ in range(words))
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:count]


def perturb(message, mutation: str, position: int, bit: int = 0) -> np.ndarray:
    """Apply a single-bit edit and return the new bit array.

    ``flip`` and ``delete`` need ``0 <= position < len``; ``insert`` accepts
    ``position == len`` (append) and places ``bit`` there.
    """
    message = as_bits(message)
    size = message.size
    if mutation == "insert":
        if not 0 <= position <= size:
            raise IndexError(f"insert position {position} outside 0..{size}")
        if bit not in (0, 1):
            raise ValueError(f"inserted bit must be 0 or 1, got {bit!r}")
        return np.insert(message, position, np.uint8(bit))
    if mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}; expected one of {MUTATIONS}")
    if not 0 <= position < size:
        raise IndexError(f"{mutation} position {position} outside 0..{size - 1}")
    if mutation == "flip":
        out = message.copy()
        out[position] ^= 1
        return out
    return np.delete(message, position)


@dataclass(frozen=True, eq=False)
class DrawPair:
    original: np.ndarray
    modified: np.ndarray
    mutation: str
    position: int
    draw_index: int


def load_lines(path) -> list[np.ndarray]:
    """Non-empty lines of a UTF-8 text file as bit arrays (newline excluded)."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [message_bits(line.encode("utf-8")) for line in text.splitlines() if line]
    if not lines:
        raise ValueError(f"corpus file {os.fspath(path)!r} contains no non-empty lines")
    return lines


def generate_corpus(
    n_draws: int,
    seed: int,
    source: str = "prng",
    path=None,
    lines: list | None = None,
) -> list[DrawPair]:
    """``n_draws`` original/flipped message pairs.

    ``source`` is ``"prng"`` or ``"file"``; for ``"file"`` pass ``path`` or
    pre-loaded ``lines`` (bit arrays).  File lines are drawn with replacement.
    """
    if n_draws < 1:
        raise ValueError(f"need at least one draw, got {n_draws}")
    rng = SplitMix64(seed)
    if source == "file":
        if lines is None:
            if path is None:
                raise ValueError("file source needs a path")
            lines = load_lines(path)
        elif not lines:
            raise ValueError("file source is empty")
        lines = [as_bits(line) for line in lines]
        if any(line.size == 0 for line in lines):
            raise ValueError("file source contains an empty message")
    elif source != "prng":
        raise ValueError(f"unknown corpus source {source!r}")

    corpus = []
    span = MAX_MESSAGE_BITS - MIN_MESSAGE_BITS + 1
    for index in range(n_draws):
        if source == "prng":
            original = rng.bits(MIN_MESSAGE_BITS + rng.below(span))
        else:
            original = lines[rng.below(len(lines))]
        position = rng.below(original.size)
        modified = perturb(original, "flip", position)
        corpus.append(DrawPair(original, modified, "flip", position, index))
    return corpus
