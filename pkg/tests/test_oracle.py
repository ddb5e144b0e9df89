import itertools

import numpy as np
import pytest

from conftest import make_params
from qhfm import coin_coefficients, evolve
from qhfm.oracle import (
    BasisLabel,
    apply_dense,
    build_step_unitary,
    check_equivalence,
    decode_basis,
    dense_evolve,
    direction_image,
    direction_matrix,
    encode_basis,
    orthogonality_error,
    random_state,
    shift_matrix,
)


def test_initial_basis_state_index():
    assert encode_basis(BasisLabel(x=0, dr2=1, dr1=0, c=0), 25) == 2


def test_decode_seven():
    assert decode_basis(7, 5) == BasisLabel(0, 1, 1, 1)


def test_basis_round_trip_exhaustive():
    n = 5
    labels = [BasisLabel(x, dr2, dr1, c) for x in range(n) for dr2, dr1, c in itertools.product((0, 1), repeat=3)]
    indices = [encode_basis(label, n) for label in labels]
    assert sorted(indices) == list(range(8 * n))
    assert all(decode_basis(i, n) == label for i, label in zip(indices, labels))


@pytest.mark.parametrize(
    "label, index",
    [(BasisLabel(5, 0, 0, 0), None), (BasisLabel(0, 2, 0, 0), None), (None, 40), (None, -1)],
)
def test_basis_out_of_range(label, index):
    with pytest.raises(ValueError):
        if label is not None:
            encode_basis(label, 5)
        else:
            decode_basis(index, 5)


def test_direction_examples():
    assert direction_image(0, 0) == 4
    assert direction_image(1, 2) == 0
    assert direction_matrix(0)[4, 0] == 1
    assert direction_matrix(1)[0, 2] == 1


@pytest.mark.parametrize("bit", [0, 1])
def test_direction_matrices_are_permutations(bit):
    mat = direction_matrix(bit)
    assert set(np.unique(mat)) == {0.0, 1.0}
    np.testing.assert_array_equal(mat.sum(axis=0), np.ones(8))
    np.testing.assert_array_equal(mat.sum(axis=1), np.ones(8))


@pytest.mark.parametrize("dr2, dr1, c", list(itertools.product((0, 1), repeat=3)))
def test_direction_maps_match_register_rules(dr2, dr1, c):
    j = 4 * dr1 + 2 * dr2 + c
    not_c = 1 ^ c
    # bit 0: dr1 <- dr1 xor not c, dr2 kept
    assert direction_image(0, j) == 4 * (dr1 ^ not_c) + 2 * dr2 + c
    # bit 1: (dr2, dr1) <- (dr1, dr2 xor not c)
    assert direction_image(1, j) == 4 * (dr2 ^ not_c) + 2 * dr1 + c


def test_shift_examples():
    S = shift_matrix(5)
    assert S[8 * 4 + 1, 8 * 0 + 1] == 1
    assert S[8 * 1 + 6, 8 * 0 + 6] == 1


def test_shift_is_permutation():
    S = shift_matrix(5)
    np.testing.assert_array_equal(S.sum(axis=0), np.ones(40))
    np.testing.assert_array_equal(S.sum(axis=1), np.ones(40))


@pytest.mark.parametrize("n", [3, 5, 7, 9])
@pytest.mark.parametrize("bit", [0, 1])
def test_step_unitaries_orthogonal(n, bit):
    assert orthogonality_error(build_step_unitary(bit, make_params(n))) < 1e-12


@pytest.mark.parametrize("bit", [0, 1])
def test_step_unitary_columns_have_two_entries(bit):
    U = build_step_unitary(bit, make_params(5))
    assert np.count_nonzero(np.abs(U) > 0, axis=0).max() <= 2


def test_dense_step_from_init_matches_recurrence():
    params = make_params(5)
    np.testing.assert_allclose(dense_evolve(params, [0]), evolve(params, [0]).amps, atol=1e-12)


def test_apply_dense_identity_and_inverse(rng):
    params = make_params(5)
    v = random_state(params, rng).amps
    np.testing.assert_array_equal(apply_dense(np.eye(40), v), v)
    U = build_step_unitary(1, params)
    np.testing.assert_allclose(apply_dense(U.T, apply_dense(U, v)), v, atol=1e-12)
    assert np.linalg.norm(apply_dense(U, v)) == pytest.approx(1.0, abs=1e-12)


def test_apply_dense_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_dense(np.eye(40), np.zeros(24))


@pytest.mark.parametrize("n", [3, 5, 7])
def test_recurrence_equals_dense_evolution(n, rng):
    params = make_params(n)
    messages = [rng.integers(0, 2, 64) for _ in range(50)]
    report = check_equivalence(params, messages)
    assert report.passed
    assert report.max_amplitude_deviation < 1e-12


def test_corrupted_coin_is_detected(rng):
    params = make_params(5)
    table = np.array([coin_coefficients(params.theta0), coin_coefficients(params.theta1)])
    table[0, 3] = -table[0, 3]
    report = check_equivalence(params, [rng.integers(0, 2, 64) for _ in range(5)], coin_table=table)
    assert not report.passed
    assert {"message_index", "x", "j"} <= report.worst.keys()


def test_oracle_refuses_large_n():
    with pytest.raises(ValueError, match="n <= 9"):
        dense_evolve(make_params(11), [0])
