import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_params
from qhfm import Digest, instance
from qhfm.statlab import (
    DrawDigests,
    avalanche_from_digests,
    avalanche_test,
    byte_distance,
    collision_from_digests,
    generate_corpus,
    hash_corpus,
    hit_probabilities,
    hits,
    kl_divergence,
    theoretical_hit_distribution,
    uniformity_from_digests,
)

# Reference hit rows W_t (omega = 0..3, then 4+), N = 10000.
REFERENCE_HIT_ROWS = {
    37: [8652, 1255, 89, 4, 0],
    33: [8788, 1137, 71, 3, 0],
    28: [8962, 984, 52, 2, 0],
    25: [9068, 889, 42, 1, 0],
    17: [9356, 624, 20, 0, 0],
    15: [9430, 555, 15, 0, 0],
}


def exact_binomial(g):
    return [float(comb(g, w) * Fraction(1, 256) ** w * Fraction(255, 256) ** (g - w)) for w in range(g + 1)]


def zero_digest(params):
    return Digest((0,) * params.n, params.m)


def ones_digest(params):
    return Digest(((1 << params.m) - 1,) * params.n, params.m)


def test_identical_pairs_give_zero_avalanche():
    params = instance(120)
    d = zero_digest(params)
    report = avalanche_from_digests(DrawDigests(params, [d] * 4, [d] * 4))
    assert (report.B_mean, report.P, report.dB) == (0, 0, 0)


def test_two_point_avalanche():
    params = instance(120)
    z, o = zero_digest(params), ones_digest(params)
    report = avalanche_from_digests(DrawDigests(params, [z, z], [z, o]))
    L = params.bit_length
    assert report.B_mean == L / 2
    assert report.P == 50.0
    assert report.dB == pytest.approx(L / math.sqrt(2), rel=1e-14)
    assert report.dP == pytest.approx(100 / math.sqrt(2), rel=1e-14)
    assert report.I_DC == pytest.approx(report.dP / 2, rel=1e-14)


def test_avalanche_needs_two_draws():
    params = instance(120)
    d = zero_digest(params)
    with pytest.raises(ValueError):
        avalanche_from_digests(DrawDigests(params, [d], [d]))


def test_uniformity_concentrated_flips():
    params = instance(120)
    z = zero_digest(params)
    top = Digest((0x80,) + (0,) * 14, 8)
    report = uniformity_from_digests(DrawDigests(params, [z] * 3, [top] * 3))
    assert report.T[0] == 3
    assert sum(report.T[1:]) == 0
    L = params.bit_length
    # all mass in one position maximises the spread for a fixed total
    assert report.dT == pytest.approx(math.sqrt((3 - 3 / L) ** 2 / (L - 1) + (L - 1) * (3 / L) ** 2 / (L - 1)))


def test_shared_draw_identity():
    params = instance(136)
    draws = hash_corpus(generate_corpus(64, 11), params)
    av = avalanche_from_digests(draws)
    un = uniformity_from_digests(draws)
    assert un.Q == av.P
    assert sum(un.T) == round(av.B_mean * av.N)
    assert av.B_mean == pytest.approx(av.P / 100 * params.bit_length, rel=1e-14)
    assert av.I_DC == pytest.approx((av.dP + abs(av.P - 50)) / 2, rel=1e-14)


def test_hits_examples():
    assert hits(bytes([1, 2, 3]), bytes([1, 2, 3])) == 3
    assert hits(bytes([1, 2, 3]), bytes([4, 5, 6])) == 0
    assert hits(bytes([0x01, 0x02, 0x03]), bytes([0x01, 0xFF, 0x03])) == 2
    with pytest.raises(ValueError):
        hits(bytes(3), bytes(4))


def test_hits_on_digests():
    d = Digest(tuple(range(25)), 8)
    assert hits(d, d) == 25


def test_byte_distance_examples():
    assert byte_distance(bytes([7, 8]), bytes([7, 8])) == 0
    assert byte_distance(bytes([0]), bytes([255])) == 255


def test_byte_distance_uniform_expectation():
    # E|U - V| for independent uniform bytes
    values = np.arange(256)
    exact = np.abs(values[:, None] - values[None, :]).mean()
    assert exact == pytest.approx((256**2 - 1) / (3 * 256))
    assert round(exact, 2) == 85.33


@pytest.mark.parametrize("g, row", sorted(REFERENCE_HIT_ROWS.items()))
def test_reference_hit_rows(g, row):
    W_t = theoretical_hit_distribution(g, 10000)
    assert W_t[:4] == row[:4]
    assert sum(W_t[4:]) == row[4]


@pytest.mark.parametrize("g", [1, 2, 15, 25, 37, 200])
def test_hit_probabilities_match_exact_binomial(g):
    np.testing.assert_allclose(hit_probabilities(g), exact_binomial(g), rtol=1e-11, atol=0)


def test_theoretical_rows_need_not_sum_to_n():
    assert sum(theoretical_hit_distribution(33, 10000)) == 9999


def test_kl_identical_distribution_is_zero():
    W_e = [600, 300, 100]
    assert kl_divergence(W_e, [0.6, 0.3, 0.1], 1000) == pytest.approx(0.0, abs=1e-15)


def test_kl_reference_264_row():
    W_e = [8762, 1159, 74, 5] + [0] * 30
    assert kl_divergence(W_e, hit_probabilities(33), 10000) == pytest.approx(0.000146, abs=5e-7)


def test_kl_all_mass_at_zero():
    expected = math.log2(1 / (255 / 256) ** 2)
    assert expected == pytest.approx(0.01129, abs=1e-5)
    assert kl_divergence([5, 0, 0], hit_probabilities(2), 5) == pytest.approx(expected, rel=1e-12)


def test_kl_rejects_bad_input():
    with pytest.raises(ValueError):
        kl_divergence([1, 1], [0.5, 0.5], 3)
    with pytest.raises(ValueError):
        kl_divergence([1, 1], [1.0, 0.0], 2)


@settings(max_examples=100)
@given(st.lists(st.integers(0, 1000), min_size=2, max_size=12), st.data())
def test_kl_non_negative(counts, data):
    if sum(counts) == 0:
        counts[0] = 1
    weights = data.draw(st.lists(st.floats(0.01, 10), min_size=len(counts), max_size=len(counts)))
    P_t = np.array(weights) / sum(weights)
    assert kl_divergence(counts, P_t, sum(counts)) >= -1e-12
    own = np.array(counts) / sum(counts)
    assert abs(kl_divergence(counts, own, sum(counts))) < 1e-12


def test_collision_report_structure():
    params = instance(200)
    corpus = generate_corpus(40, 4)
    report = collision_from_digests(hash_corpus(corpus, params))
    hist = report.hist
    assert hist.g == 25
    assert sum(hist.W_e) == 40
    assert len(hist.W_e) == 26
    assert len(hist.W_e_display) == 5
    assert sum(hist.W_e_display) == 40
    assert report.kl >= 0
    assert report.delta_d == pytest.approx(abs(report.d_byte_mean - 85.33))


def test_identical_digests_collision():
    params = instance(136)
    d = Digest(tuple(range(17)), 8)
    report = collision_from_digests(DrawDigests(params, [d] * 3, [d] * 3))
    assert report.hist.W_e[17] == 3
    assert report.d_byte_mean == 0


def test_parallel_hashing_matches_serial():
    params = make_params(9)
    corpus = generate_corpus(20, 8)
    serial = hash_corpus(corpus, params)
    parallel = hash_corpus(list(reversed(corpus)), params, workers=4)
    assert serial.original == parallel.original
    assert serial.modified == parallel.modified


def test_avalanche_test_entry_point():
    report = avalanche_test(generate_corpus(10, 1), instance(120))
    assert report.N == 10
