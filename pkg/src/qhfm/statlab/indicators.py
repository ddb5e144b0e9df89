"""Avalanche, uniformity and collision indicators over a shared corpus."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.stats import binom

from ..hashing import Digest, digest_bytes_for_collision, qhfm_hash_bits
from ..walk import WalkParams
from .corpus import DrawPair

D_BYTE_THEORETICAL = 85.33
HIT_PROBABILITY = 1 / 256
DISPLAY_BUCKETS = 5  # 0, 1, 2, 3, 4+


@dataclass(eq=False)
class DrawDigests:
    """Digests of every (original, modified) pair, in draw order."""

    params: WalkParams
    original: list
    modified: list

    @property
    def n_draws(self) -> int:
        return len(self.original)

    @cached_property
    def flipped(self) -> np.ndarray:
        """``(N, n*m)`` boolean matrix of differing digest bits."""
        a = np.stack([d.to_bits() for d in self.original])
        b = np.stack([d.to_bits() for d in self.modified])
        return a != b

    @cached_property
    def byte_forms(self) -> tuple[np.ndarray, np.ndarray]:
        def to_matrix(digests):
            raw = b"".join(digest_bytes_for_collision(d) for d in digests)
            return np.frombuffer(raw, dtype=np.uint8).reshape(len(digests), -1)

        return to_matrix(self.original), to_matrix(self.modified)


def hash_corpus(corpus: list[DrawPair], params: WalkParams, workers: int = 1) -> DrawDigests:
    """Hash both sides of every pair; results keep ``draw_index`` order."""

    def work(pair):
        return qhfm_hash_bits(pair.original, params), qhfm_hash_bits(pair.modified, params)

    ordered = sorted(corpus, key=lambda p: p.draw_index)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, ordered))
    else:
        results = [work(pair) for pair in ordered]
    return DrawDigests(params, [r[0] for r in results], [r[1] for r in results])


def _percent(total: int, n_draws: int, bit_length: int) -> float:
    # Shared by P and Q so the two agree exactly on the same draws.
    return 100.0 * total / (n_draws * bit_length)


def _sample_std(values: np.ndarray, centre: float) -> float:
    return math.sqrt(float(np.sum((values - centre) ** 2)) / (values.size - 1))


@dataclass
class AvalancheReport:
    N: int
    bit_length: int
    B_mean: float
    P: float
    dB: float
    dP: float
    I_DC: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class UniformityReport:
    N: int
    bit_length: int
    T: list
    T_mean: float
    Q: float
    dT: float
    dQ: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class HitHistogram:
    g: int
    N: int
    W_e: list
    W_t: list
    P_t: list

    @property
    def W_e_display(self) -> list:
        return _bucket(self.W_e)

    @property
    def W_t_display(self) -> list:
        return _bucket(self.W_t)

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "N": self.N,
            "W_e": self.W_e,
            "W_t": self.W_t,
            "P_t": self.P_t,
            "W_e_display": self.W_e_display,
            "W_t_display": self.W_t_display,
        }


@dataclass
class CollisionReport:
    hist: HitHistogram
    kl: float
    kl_display: float
    d_byte_mean: float
    d_byte_theoretical: float = D_BYTE_THEORETICAL
    delta_d: float = field(init=False)

    def __post_init__(self):
        self.delta_d = abs(self.d_byte_mean - self.d_byte_theoretical)

    def to_dict(self) -> dict:
        return {
            "hist": self.hist.to_dict(),
            "kl": self.kl,
            "kl_display": self.kl_display,
            "d_byte_mean": self.d_byte_mean,
            "d_byte_theoretical": self.d_byte_theoretical,
            "delta_d": self.delta_d,
        }


def _bucket(counts) -> list:
    """Collapse a 0..g histogram into the 0, 1, 2, 3, 4+ display buckets."""
    counts = list(counts)
    head = counts[: DISPLAY_BUCKETS - 1]
    head += [0] * (DISPLAY_BUCKETS - 1 - len(head))
    return head + [sum(counts[DISPLAY_BUCKETS - 1 :])]


def avalanche_from_digests(draws: DrawDigests) -> AvalancheReport:
    N = draws.n_draws
    if N < 2:
        raise ValueError("avalanche statistics need at least 2 draws")
    L = draws.params.bit_length
    changed = draws.flipped.sum(axis=1).astype(np.int64)
    total = int(changed.sum())
    B_mean = total / N
    P = _percent(total, N, L)
    dB = _sample_std(changed.astype(float), B_mean)
    dP = _sample_std(changed / L, P / 100.0) * 100.0
    return AvalancheReport(N, L, B_mean, P, dB, dP, (dP + abs(P - 50.0)) / 2)


def uniformity_from_digests(draws: DrawDigests) -> UniformityReport:
    N = draws.n_draws
    if N < 1:
        raise ValueError("uniformity statistics need at least 1 draw")
    L = draws.params.bit_length
    counts = draws.flipped.sum(axis=0).astype(np.int64)
    total = int(counts.sum())
    T_mean = total / L
    Q = _percent(total, N, L)
    dT = _sample_std(counts.astype(float), T_mean)
    dQ = _sample_std(counts / N, Q / 100.0) * 100.0
    return UniformityReport(N, L, [int(t) for t in counts], T_mean, Q, dT, dQ)


def hits(h, h2) -> int:
    """Number of byte positions at which two collision-byte forms agree."""
    a, b = _as_bytes(h), _as_bytes(h2)
    if a.size != b.size:
        raise ValueError(f"digest byte lengths differ: {a.size} vs {b.size}")
    return int(np.count_nonzero(a == b))


def byte_distance(h, h2) -> float:
    """Mean absolute difference per byte."""
    a, b = _as_bytes(h), _as_bytes(h2)
    if a.size != b.size:
        raise ValueError(f"digest byte lengths differ: {a.size} vs {b.size}")
    return float(np.abs(a.astype(np.int64) - b.astype(np.int64)).mean())


def _as_bytes(h) -> np.ndarray:
    if isinstance(h, Digest):
        h = digest_bytes_for_collision(h)
    if isinstance(h, (bytes, bytearray)):
        return np.frombuffer(bytes(h), dtype=np.uint8)
    return np.asarray(h, dtype=np.int64)


def hit_probabilities(g: int) -> np.ndarray:
    """Binomial(g, 1/256) pmf over 0..g."""
    if g < 1:
        raise ValueError(f"g must be positive, got {g}")
    return binom.pmf(np.arange(g + 1), g, HIT_PROBABILITY)


def theoretical_hit_distribution(g: int, n_draws: int) -> list[int]:
    """Expected hit counts, each rounded to the nearest integer (halves up)."""
    return [math.floor(n_draws * p + 0.5) for p in hit_probabilities(g)]


def kl_divergence(W_e, P_t, n_draws: int) -> float:
    """``D_KL(W_e/N || P_t)`` in bits; empty observed buckets contribute 0."""
    W_e = np.asarray(W_e, dtype=np.int64)
    P_t = np.asarray(P_t, dtype=float)
    if W_e.shape != P_t.shape:
        raise ValueError(f"histogram shapes differ: {W_e.shape} vs {P_t.shape}")
    if int(W_e.sum()) != n_draws:
        raise ValueError(f"histogram sums to {int(W_e.sum())}, expected {n_draws}")
    observed = W_e > 0
    if np.any(observed & (P_t <= 0)):
        raise ValueError("observed counts where the reference probability is zero")
    p_e = W_e[observed] / n_draws
    return float(np.sum(p_e * np.log2(p_e / P_t[observed])))


def collision_from_digests(draws: DrawDigests) -> CollisionReport:
    N = draws.n_draws
    if N < 1:
        raise ValueError("collision statistics need at least 1 draw")
    a, b = draws.byte_forms
    g = a.shape[1]
    omega = np.count_nonzero(a == b, axis=1)
    W_e = np.bincount(omega, minlength=g + 1)
    P_t = hit_probabilities(g)
    hist = HitHistogram(
        g,
        N,
        [int(w) for w in W_e],
        theoretical_hit_distribution(g, N),
        [float(p) for p in P_t],
    )
    kl = kl_divergence(W_e, P_t, N)
    P_t_display = np.array(_bucket(P_t))
    kl_display = kl_divergence(_bucket(W_e), P_t_display, N)
    per_draw = np.abs(a.astype(np.int64) - b.astype(np.int64)).mean(axis=1)
    return CollisionReport(hist, kl, kl_display, float(per_draw.mean()))


def avalanche_test(corpus, params: WalkParams, workers: int = 1) -> AvalancheReport:
    return avalanche_from_digests(hash_corpus(corpus, params, workers))


def uniformity_test(corpus, params: WalkParams, workers: int = 1) -> UniformityReport:
    return uniformity_from_digests(hash_corpus(corpus, params, workers))


def collision_test(corpus, params: WalkParams, workers: int = 1) -> CollisionReport:
    return collision_from_digests(hash_corpus(corpus, params, workers))
