"""Piece arithmetic, word splitting, Hamming check, and reconstruction."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitindex import (
    ConfigError,
    CorruptListError,
    WordTooShortError,
    hamming_at_most,
    piece_lengths,
    reconstruct,
    split_word,
)


def test_split_table():
    assert split_word(b"table", 1) == (b"tab", b"le")


def test_length_five_splits_three_two():
    assert piece_lengths(5, 1) == (3, 2)


def test_clamp_keeps_last_piece_nonempty():
    # round-half-up would give piece length 2 and leave the 4th piece empty
    assert piece_lengths(6, 3) == (1, 1, 1, 3)
    assert split_word(b"abcdef", 3) == (b"a", b"b", b"c", b"def")


def test_minimal_split():
    assert split_word(b"ab", 1) == (b"a", b"b")


def test_short_word_rejected():
    with pytest.raises(WordTooShortError):
        split_word(b"ab", 2)
    with pytest.raises(WordTooShortError):
        piece_lengths(0, 1)


def test_bad_budget_rejected():
    with pytest.raises(ConfigError):
        piece_lengths(10, 0)


@given(st.integers(1, 400), st.integers(1, 8))
@settings(max_examples=300)
def test_piece_lengths_total_and_positive(length, k):
    if length < k + 1:
        with pytest.raises(WordTooShortError):
            piece_lengths(length, k)
        return
    lens = piece_lengths(length, k)
    assert len(lens) == k + 1
    assert all(n >= 1 for n in lens)
    assert sum(lens) == length
    assert len(set(lens[:k])) <= 1  # first k pieces share a common length


@given(st.binary(min_size=1, max_size=60), st.integers(1, 4))
@settings(max_examples=300)
def test_split_concatenates_back(word, k):
    if len(word) < k + 1:
        return
    pieces = split_word(word, k)
    assert b"".join(pieces) == word
    assert all(pieces)


def test_hamming_examples():
    assert hamming_at_most(b"table", b"table", 0)
    assert hamming_at_most(b"table", b"cable", 1)
    assert not hamming_at_most(b"table", b"cable", 0)
    # five mismatching positions
    assert not hamming_at_most(b"abbac", b"baxcy", 2)


def test_hamming_rejects_unequal_lengths():
    with pytest.raises(ValueError):
        hamming_at_most(b"ab", b"abc", 1)


@given(st.binary(min_size=0, max_size=40), st.integers(0, 5))
@settings(max_examples=200)
def test_hamming_matches_direct_count(a, limit):
    import random

    rng = random.Random(len(a) * 31 + limit)
    b = bytearray(a)
    for i in range(len(b)):
        if rng.random() < 0.3:
            b[i] = rng.randrange(256)
    b = bytes(b)
    direct = sum(x != y for x, y in zip(a, b))
    assert hamming_at_most(a, b, limit) == (direct <= limit)


def test_reconstruct_examples():
    assert reconstruct(b"cd", b"abe", 2, 2, 5) == b"abcde"
    assert reconstruct(b"a", b"bc", 1, 2, 3) == b"abc"


def test_reconstruct_rejects_empty_remainder():
    with pytest.raises(CorruptListError):
        reconstruct(b"abc", b"", 1, 2, 3)


def test_reconstruct_rejects_bad_position_and_totals():
    with pytest.raises(CorruptListError):
        reconstruct(b"ab", b"cde", 4, 2, 5)
    with pytest.raises(CorruptListError):
        reconstruct(b"ab", b"cde", 1, 2, 9)
    with pytest.raises(CorruptListError):
        reconstruct(b"abc", b"de", 2, 2, 5)  # piece 2 of length-5, k=2 is 2 bytes
    with pytest.raises(ConfigError):
        reconstruct(b"a", b"b", 1, 1, 2)


@given(st.binary(min_size=3, max_size=50), st.integers(2, 4))
@settings(max_examples=200)
def test_reconstruct_inverts_splitting(word, k):
    if len(word) < k + 1:
        return
    pieces = split_word(word, k)
    for pos in range(1, k + 2):
        blob = b"".join(p for i, p in enumerate(pieces) if i != pos - 1)
        assert reconstruct(pieces[pos - 1], blob, pos, k, len(word)) == word
