"""Controlled alternate quantum walk with one- and two-step memory on a cycle.

The walker lives on ``n`` nodes and carries three internal qubits (penultimate
direction, last direction, coin).  Each node therefore holds 8 amplitudes,
stored flat at index ``8*x + j`` with ``j = 4*dr1 + 2*dr2 + c``.

A message bit of 0 applies one step of the one-step-memory walk (QW1M) with
coin angle ``theta0``; a bit of 1 applies one step of the two-step-memory walk
(QW2M) with coin angle ``theta1``.  Both steps are evaluated with the
closed-form neighbour recurrences, so a step costs ``O(n)`` and the whole walk
needs two ``8n`` buffers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

__all__ = [
    "InvalidParams",
    "WalkParams",
    "CoinCoefficients",
    "AmplitudeState",
    "coin_coefficients",
    "init_state",
    "step_qw1m",
    "step_qw2m",
    "evolve",
    "position_distribution",
    "SOURCES",
]


class InvalidParams(ValueError):
    """Raised when a parameter tuple violates the walk/hash constraints."""


@dataclass(frozen=True)
class WalkParams:
    """Configuration ``(n, m, l, theta0, theta1, alpha)`` of one hash instance.

    ``n`` is the cycle size, ``m`` the bits each node contributes to the digest
    and ``l`` the decimal scale exponent used when quantising probabilities.
    """

    n: int
    m: int
    l: int
    theta0: float
    theta1: float
    alpha: float

    def __post_init__(self):
        for name in ("n", "m", "l"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidParams(f"{name} must be an integer, got {value!r}")
        if self.n < 3 or self.n % 2 == 0:
            raise InvalidParams(f"n must be an odd integer >= 3, got {self.n}")
        if self.m < 1:
            raise InvalidParams(f"m must be positive, got {self.m}")
        if self.l < 1:
            raise InvalidParams(f"l must be positive, got {self.l}")
        if 10**self.l <= 2**self.m:
            raise InvalidParams(
                f"10**l must exceed 2**m (l={self.l}, m={self.m})"
            )
        for name in ("theta0", "theta1", "alpha"):
            value = float(getattr(self, name))
            if not 0.0 < value < math.pi / 2:
                raise InvalidParams(f"{name} must lie in (0, pi/2), got {value!r}")

    @property
    def bit_length(self) -> int:
        return self.n * self.m

    @property
    def dim(self) -> int:
        return 8 * self.n


class CoinCoefficients(NamedTuple):
    """Entries of the 2x2 coin ``((a, b), (c, d))``."""

    a: float
    b: float
    c: float
    d: float


def coin_coefficients(theta: float) -> CoinCoefficients:
    """Return ``(cos t, sin t, sin t, -cos t)`` for ``t`` in ``(0, pi/2)``."""
    theta = float(theta)
    if not 0.0 < theta < math.pi / 2:
        raise InvalidParams(f"coin angle must lie in (0, pi/2), got {theta!r}")
    cos, sin = math.cos(theta), math.sin(theta)
    return CoinCoefficients(cos, sin, sin, -cos)


# Source-index table of the recurrences.  SOURCES[bit, j] = (u, v) means
#   A_t[x, j] = k0 * A_{t-1}[y, u] + k1 * A_{t-1}[y, v]
# with (k0, k1) = (a, b) for even j and (c, d) for odd j, and y = x + 1 for
# j < 4, y = x - 1 for j >= 4 (mod n).
SOURCES = np.array(
    [
        # QW1M
        [[4, 5], [0, 1], [6, 7], [2, 3], [0, 1], [4, 5], [2, 3], [6, 7]],
        # QW2M
        [[2, 3], [0, 1], [6, 7], [4, 5], [0, 1], [2, 3], [4, 5], [6, 7]],
    ],
    dtype=np.int64,
)


@dataclass(frozen=True, eq=False)
class AmplitudeState:
    """The ``8n`` complex amplitudes of the walker at one instant.

    ``amps`` is made read-only on construction; steps return new states.
    """

    params: WalkParams
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != self.params.dim:
            raise ValueError(
                f"expected {self.params.dim} amplitudes, got {amps.size}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def grid(self) -> np.ndarray:
        """Amplitudes viewed as an ``(n, 8)`` array."""
        return self.amps.reshape(self.params.n, 8)

    def norm_squared(self) -> float:
        return float(np.sum(self.amps.real**2 + self.amps.imag**2))

    def amplitude(self, x: int, j: int) -> complex:
        return complex(self.amps[8 * x + j])


def init_state(params: WalkParams) -> AmplitudeState:
    amps = np.zeros(params.dim, dtype=np.complex128)
    amps[2] = math.cos(params.alpha)
    amps[3] = math.sin(params.alpha)
    return AmplitudeState(params, amps)


def _step(state: AmplitudeState, coin: CoinCoefficients, bit: int) -> AmplitudeState:
    old = state.grid
    up = np.roll(old, -1, axis=0)  # up[x] = old[x + 1]
    down = np.roll(old, 1, axis=0)  # down[x] = old[x - 1]
    new = np.empty_like(old)
    for j in range(8):
        u, v = SOURCES[bit, j]
        k0, k1 = (coin.a, coin.b) if j % 2 == 0 else (coin.c, coin.d)
        nb = up if j < 4 else down
        new[:, j] = k0 * nb[:, u] + k1 * nb[:, v]
    return AmplitudeState(state.params, new)


def step_qw1m(state: AmplitudeState, coin: CoinCoefficients) -> AmplitudeState:
    """One QW1M step (message bit 0)."""
    return _step(state, coin, 0)


def step_qw2m(state: AmplitudeState, coin: CoinCoefficients) -> AmplitudeState:
    """One QW2M step (message bit 1)."""
    return _step(state, coin, 1)


@numba.njit(cache=True, nogil=True)
def _walk_kernel(front, back, bits, coefs):  # pragma: no cover - jitted
    # Literal-index form of SOURCES; coefs[bit] = (a, b, c, d).
    # Returns whichever buffer holds the final state.
    n = front.size // 8
    last = n - 1
    for t in range(bits.size):
        bit = bits[t]
        a = coefs[bit, 0]
        b = coefs[bit, 1]
        c = coefs[bit, 2]
        d = coefs[bit, 3]
        for x in range(n):
            up = 8 * (x + 1) if x < last else 0
            down = 8 * (x - 1) if x > 0 else 8 * last
            o = 8 * x
            if bit == 0:
                back[o + 0] = a * front[up + 4] + b * front[up + 5]
                back[o + 1] = c * front[up + 0] + d * front[up + 1]
                back[o + 2] = a * front[up + 6] + b * front[up + 7]
                back[o + 3] = c * front[up + 2] + d * front[up + 3]
                back[o + 4] = a * front[down + 0] + b * front[down + 1]
                back[o + 5] = c * front[down + 4] + d * front[down + 5]
                back[o + 6] = a * front[down + 2] + b * front[down + 3]
                back[o + 7] = c * front[down + 6] + d * front[down + 7]
            else:
                back[o + 0] = a * front[up + 2] + b * front[up + 3]
                back[o + 1] = c * front[up + 0] + d * front[up + 1]
                back[o + 2] = a * front[up + 6] + b * front[up + 7]
                back[o + 3] = c * front[up + 4] + d * front[up + 5]
                back[o + 4] = a * front[down + 0] + b * front[down + 1]
                back[o + 5] = c * front[down + 2] + d * front[down + 3]
                back[o + 6] = a * front[down + 4] + b * front[down + 5]
                back[o + 7] = c * front[down + 6] + d * front[down + 7]
        front, back = back, front
    return front


def _coin_table(params: WalkParams) -> np.ndarray:
    return np.array(
        [coin_coefficients(params.theta0), coin_coefficients(params.theta1)],
        dtype=np.float64,
    )


def as_bits(message) -> np.ndarray:
    """Coerce a bit sequence to a contiguous ``uint8`` array of 0/1 values."""
    bits = np.ascontiguousarray(message, dtype=np.uint8).reshape(-1)
    if bits.size and bits.max() > 1:
        raise ValueError("bit sequence must contain only 0 and 1")
    return bits


def run_walk(
    start: AmplitudeState,
    message,
    stats: dict | None = None,
    coin_table: np.ndarray | None = None,
) -> AmplitudeState:
    """Advance ``start`` by one step per message bit.

    The real and imaginary parts are propagated separately (the coins are
    real), and the imaginary pass is skipped while it is identically zero.
    When ``stats`` is given it receives the step count and the number of
    float slots held by the double buffers.  ``coin_table`` replaces the
    ``(2, 4)`` coefficient table derived from the parameters; it is a hook for
    negative-control checks.
    """
    params = start.params
    bits = as_bits(message)
    if coin_table is None:
        coefs = _coin_table(params)
    else:
        coefs = np.ascontiguousarray(coin_table, dtype=np.float64)
    parts = []
    slots = 0
    for component in (start.amps.real, start.amps.imag):
        if not component.any():
            parts.append(np.zeros(params.dim))
            continue
        front = np.array(component, dtype=np.float64)
        back = np.empty_like(front)
        slots = max(slots, front.size + back.size)
        parts.append(_walk_kernel(front, back, bits, coefs).copy())
    if stats is not None:
        stats["steps"] = int(bits.size)
        stats["buffer_slots"] = slots
    amps = np.empty(params.dim, dtype=np.complex128)
    amps.real = parts[0]
    amps.imag = parts[1]
    return AmplitudeState(params, amps)


def evolve(params: WalkParams, message, stats: dict | None = None) -> AmplitudeState:
    """Initial state followed by one controlled step per message bit."""
    return run_walk(init_state(params), message, stats)


def position_distribution(state: AmplitudeState) -> np.ndarray:
    """Probability of finding the walker at each node.

    The 8 internal probabilities are accumulated in ascending ``j`` order so
    the result does not depend on numpy's reduction strategy.
    """
    grid = state.grid
    squared = grid.real * grid.real + grid.imag * grid.imag
    probs = squared[:, 0].copy()
    for j in range(1, 8):
        probs += squared[:, j]
    return probs
