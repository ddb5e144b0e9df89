"""Dense-matrix construction of the walk operators.

Everything here is built from the operator definitions (coin on the last
qubit, direction-determine permutation on the three internal qubits,
conditional shift on the position) and composed by explicit matrix products.
It is slow, ``O((8n)^2)`` per step, and exists only to check the recurrences in
:mod:`qhfm.walk` independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .walk import (
    AmplitudeState,
    WalkParams,
    as_bits,
    init_state,
    run_walk,
)

MAX_ORACLE_N = 9


class BasisLabel(NamedTuple):
    x: int
    dr2: int
    dr1: int
    c: int


def encode_basis(label: BasisLabel, n: int) -> int:
    """Flat index ``8x + 4*dr1 + 2*dr2 + c`` of a four-register basis state."""
    x, dr2, dr1, c = label
    if not 0 <= x < n:
        raise ValueError(f"position {x} outside 0..{n - 1}")
    for name, bit in (("dr2", dr2), ("dr1", dr1), ("c", c)):
        if bit not in (0, 1):
            raise ValueError(f"{name} must be 0 or 1, got {bit!r}")
    return 8 * x + 4 * dr1 + 2 * dr2 + c


def decode_basis(index: int, n: int) -> BasisLabel:
    if not 0 <= index < 8 * n:
        raise ValueError(f"basis index {index} outside 0..{8 * n - 1}")
    x, j = divmod(index, 8)
    c = j % 2
    dr2 = (j % 4 - j % 2) // 2
    dr1 = (j - j % 4) // 4
    return BasisLabel(x, dr2, dr1, c)


def direction_image(bit: int, j: int) -> int:
    """Image of the internal index ``j`` under the direction-determine map."""
    if bit == 0:
        # dr1 <- dr1 xor not c
        return 4 * (((j - j % 4) // 4) ^ (j % 2) ^ 1) + j % 4
    if bit == 1:
        # (dr2, dr1) <- (dr1, dr2 xor not c)
        return 4 * (((j % 4 - j % 2) // 2) ^ (j % 2) ^ 1) + (j - j % 4) // 2 + j % 2
    raise ValueError(f"control bit must be 0 or 1, got {bit!r}")


def direction_matrix(bit: int) -> np.ndarray:
    """8x8 permutation matrix sending ``|j>`` to ``|direction_image(bit, j)>``."""
    mat = np.zeros((8, 8))
    for j in range(8):
        mat[direction_image(bit, j), j] = 1.0
    return mat


def coin_matrix(theta: float) -> np.ndarray:
    return np.array(
        [[math.cos(theta), math.sin(theta)], [math.sin(theta), -math.cos(theta)]]
    )


def shift_matrix(n: int) -> np.ndarray:
    """Conditional shift: ``|x, j> -> |x + 2*dr1 - 1 mod n, j>``."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be an odd integer >= 3, got {n}")
    dim = 8 * n
    mat = np.zeros((dim, dim))
    for x in range(n):
        for j in range(8):
            target = (x + (j - j % 4) // 2 - 1) % n
            mat[8 * target + j, 8 * x + j] = 1.0
    return mat


def build_step_unitary(bit: int, params: WalkParams, coin: np.ndarray | None = None) -> np.ndarray:
    """``S (I_n x D) (I_4n x C)`` for the given control bit."""
    if coin is None:
        coin = coin_matrix(params.theta1 if bit else params.theta0)
    n = params.n
    coin_layer = np.kron(np.eye(4 * n), coin)
    direction_layer = np.kron(np.eye(n), direction_matrix(bit))
    return shift_matrix(n) @ direction_layer @ coin_layer


def apply_dense(unitary: np.ndarray, vector: np.ndarray) -> np.ndarray:
    unitary = np.asarray(unitary)
    vector = np.asarray(vector)
    if unitary.ndim != 2 or unitary.shape[1] != vector.shape[0]:
        raise ValueError(
            f"dimension mismatch: operator {unitary.shape} vs vector {vector.shape}"
        )
    return unitary @ vector


def orthogonality_error(mat: np.ndarray) -> float:
    """``max |M^T M - I|``."""
    return float(np.max(np.abs(mat.T @ mat - np.eye(mat.shape[0]))))


def dense_evolve(params: WalkParams, message, unitaries=None) -> np.ndarray:
    if params.n > MAX_ORACLE_N:
        raise ValueError(f"dense oracle limited to n <= {MAX_ORACLE_N}, got {params.n}")
    if unitaries is None:
        unitaries = (build_step_unitary(0, params), build_step_unitary(1, params))
    vec = np.array(init_state(params).amps)
    for bit in as_bits(message):
        vec = apply_dense(unitaries[bit], vec)
    return vec


@dataclass
class OracleReport:
    n: int
    max_orthogonality_error: float
    max_amplitude_deviation: float
    messages: int
    tolerance: float
    worst: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (
            self.max_orthogonality_error < self.tolerance
            and self.max_amplitude_deviation < self.tolerance
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "messages": self.messages,
            "tolerance": self.tolerance,
            "max_orthogonality_error": self.max_orthogonality_error,
            "max_amplitude_deviation": self.max_amplitude_deviation,
            "worst": self.worst,
            "passed": self.passed,
        }


def check_equivalence(
    params: WalkParams,
    messages,
    tolerance: float = 1e-12,
    coin_table: np.ndarray | None = None,
) -> OracleReport:
    """Compare recurrence evolution with dense evolution on every message.

    Also checks orthogonality of both direction matrices and both step
    unitaries.  ``coin_table`` is forwarded to the recurrence side only.
    """
    if params.n > MAX_ORACLE_N:
        raise ValueError(f"dense oracle limited to n <= {MAX_ORACLE_N}, got {params.n}")
    unitaries = (build_step_unitary(0, params), build_step_unitary(1, params))
    ortho = max(
        orthogonality_error(m)
        for m in (direction_matrix(0), direction_matrix(1), *unitaries)
    )
    worst = {}
    max_dev = 0.0
    count = 0
    for index, message in enumerate(messages):
        count += 1
        dense = dense_evolve(params, message, unitaries)
        fast = run_walk(init_state(params), message, coin_table=coin_table).amps
        diff = np.abs(dense - fast)
        flat = int(np.argmax(diff))
        if diff[flat] > max_dev or not worst:
            max_dev = max(max_dev, float(diff[flat]))
            label = decode_basis(flat, params.n)
            worst = {
                "message_index": index,
                "x": label.x,
                "j": flat % 8,
                "dense": float(dense[flat].real),
                "recurrence": float(fast[flat].real),
            }
    return OracleReport(params.n, ortho, max_dev, count, tolerance, worst)


def random_state(params: WalkParams, rng: np.random.Generator) -> AmplitudeState:
    vec = rng.normal(size=params.dim) + 1j * rng.normal(size=params.dim)
    return AmplitudeState(params, vec / np.linalg.norm(vec))
