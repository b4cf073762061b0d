from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mlcomp.codes import (decode_error_position, encode, err_map, odd_map, parity_length, shortened_hamming)

from oracles import code_words, min_distance


@pytest.mark.parametrize("k,n_hat", [(1, 3), (2, 5), (4, 7), (11, 15), (16, 21)])
def test_block_lengths(k, n_hat):
    assert shortened_hamming(k).n_hat == n_hat


def test_parity_length_is_smallest_fit():
    for k in range(1, 200):
        r = parity_length(k)
        assert 2**r - r - 1 >= k > 2 ** (r - 1) - r


@pytest.mark.parametrize("k", [1, 2, 4, 11])
def test_min_distance_three(k):
    code = shortened_hamming(k)
    assert min_distance(code_words(code.generator.tolist())) == 3
    assert code.min_distance == 3


def test_min_distance_three_k16():
    assert shortened_hamming(16).min_distance == 3


def test_systematic_form():
    code = shortened_hamming(16)
    gen = code.generator
    assert np.array_equal(gen[:, :16], np.eye(16, dtype=gen.dtype))
    rng = np.random.default_rng(1)
    for u in rng.integers(0, 2, (50, 16)):
        assert np.array_equal(encode(code, u)[:16], u)


def test_seven_four_code():
    code = shortened_hamming(4)
    assert code.columns == (3, 5, 6, 7, 1, 2, 4)
    words = {tuple(encode(code, u)) for u in product((0, 1), repeat=4)}
    assert len(words) == 16


def test_single_errors_located_k16():
    code = shortened_hamming(16)
    words = code.codewords()
    assert len(words) == 65536
    assert not np.any(decode_error_position(code, words))
    for j in range(1, code.n_hat + 1):
        corrupted = words.copy()
        corrupted[:, j - 1] ^= 1
        assert np.all(decode_error_position(code, corrupted) == j)


def test_double_errors_are_never_read_as_clean_k4():
    # a weight-2 error is never decoded as "no error"
    code = shortened_hamming(4)
    for u in product((0, 1), repeat=4):
        c = encode(code, u)
        for a, b in combinations(range(7), 2):
            v = c.copy()
            v[a] ^= 1
            v[b] ^= 1
            assert decode_error_position(code, v) != 0


def test_decode_length_mismatch():
    with pytest.raises(ValueError):
        decode_error_position(shortened_hamming(4), [0, 1, 0])


def test_err_and_odd():
    assert [err_map(a, 2) for a in (0, 1)] == [1, 0]
    assert [err_map(a, 3) for a in (0, 1, 2)] == [1, 2, 1]
    assert list(odd_map((2, 1, 0))) == [0, 1, 0]
    for q in range(2, 17):
        for a in range(q):
            assert err_map(a, q) < q
            assert odd_map(err_map(a, q)) == 1 - odd_map(a)


@given(st.integers(1, 40), st.data())
def test_encode_then_flip_round_trip(k, data):
    code = shortened_hamming(k)
    u = data.draw(st.lists(st.integers(0, 1), min_size=k, max_size=k))
    j = data.draw(st.integers(0, code.n_hat))
    v = encode(code, u)
    if j:
        v[j - 1] ^= 1
    assert decode_error_position(code, v) == j
