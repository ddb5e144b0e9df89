"""Timing of full hashing against message length and cycle size."""

from __future__ import annotations

import math
import time

import numpy as np

from .hashing import DEFAULT_ALPHA, DEFAULT_L, DEFAULT_THETA0, DEFAULT_THETA1, digest_from_distribution
from .statlab.corpus import SplitMix64
from .walk import WalkParams, evolve, position_distribution

DEFAULT_LENGTHS = tuple(2**k for k in range(12, 18))
DEFAULT_SIZES = (15, 17, 25, 33, 37)


def _params(n: int, m: int = 8) -> WalkParams:
    return WalkParams(n, m, DEFAULT_L, DEFAULT_THETA0, DEFAULT_THETA1, DEFAULT_ALPHA)


def time_hash(params: WalkParams, bits: np.ndarray, repeats: int) -> tuple[float, dict]:
    """Best-of-``repeats`` wall time of one full hash, plus buffer accounting."""
    best = math.inf
    stats = {}
    for _ in range(repeats):
        start = time.perf_counter()
        state = evolve(params, bits, stats)
        digest_from_distribution(position_distribution(state), params.m, params.l)
        best = min(best, time.perf_counter() - start)
    return best, stats


def _slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def run_bench(
    lengths=DEFAULT_LENGTHS,
    sizes=DEFAULT_SIZES,
    fixed_n: int = 25,
    fixed_length: int = 2**14,
    repeats: int = 5,
    seed: int = 1,
) -> dict:
    rng = SplitMix64(seed)
    longest = max(max(lengths), fixed_length)
    pool = rng.bits(longest)
    # First call compiles the kernel; keep it out of the measurements.
    evolve(_params(fixed_n), pool[:64])

    by_length = []
    params = _params(fixed_n)
    for length in lengths:
        seconds, stats = time_hash(params, pool[:length], repeats)
        by_length.append(
            {
                "n": fixed_n,
                "M": int(length),
                "seconds": seconds,
                "ns_per_step": seconds / length * 1e9,
                "buffer_slots": stats["buffer_slots"],
            }
        )
    by_size = []
    for n in sizes:
        seconds, stats = time_hash(_params(n), pool[:fixed_length], repeats)
        by_size.append(
            {
                "n": int(n),
                "M": fixed_length,
                "seconds": seconds,
                "ns_per_step": seconds / fixed_length * 1e9,
                "buffer_slots": stats["buffer_slots"],
            }
        )
    ratios = [b["seconds"] / a["seconds"] for a, b in zip(by_length, by_length[1:])]
    return {
        "by_length": by_length,
        "by_size": by_size,
        "doubling_ratios": ratios,
        "length_exponent": _slope([r["M"] for r in by_length], [r["seconds"] for r in by_length]),
        "size_exponent": _slope([r["n"] for r in by_size], [r["seconds"] for r in by_size]),
        "size_ratio": by_size[-1]["seconds"] / by_size[0]["seconds"],
    }


def format_bench(result: dict) -> str:
    lines = [f"{'n':>4}{'M':>9}{'seconds':>12}{'ns/step':>10}{'slots':>7}"]
    for row in result["by_length"] + result["by_size"]:
        lines.append(
            f"{row['n']:>4}{row['M']:>9}{row['seconds']:>12.6f}"
            f"{row['ns_per_step']:>10.1f}{row['buffer_slots']:>7}"
        )
    ratios = ", ".join(f"{r:.2f}" for r in result["doubling_ratios"])
    lines.append(f"time(2M)/time(M): {ratios}")
    lines.append(f"fitted exponent in M: {result['length_exponent']:.3f}")
    lines.append(
        f"fitted exponent in n: {result['size_exponent']:.3f} "
        f"(time ratio n={result['by_size'][-1]['n']} vs n={result['by_size'][0]['n']}: {result['size_ratio']:.2f})"
    )
    return "\n".join(lines)
