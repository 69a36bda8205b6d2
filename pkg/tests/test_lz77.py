"""Baseline sliding-window encoder: parse correctness and size behaviour."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onepass.lz77 import (
    MIN_MATCH,
    lz77_decode,
    lz77_encode,
    lz77_window_encode,
    token_bits,
)


class TestTokenBits:
    def test_fields_sized_by_window(self):
        # offset and length fields at bit_length(window), one literal byte
        assert token_bits(1) == 2 * 1 + 8
        assert token_bits(255) == 2 * 8 + 8
        assert token_bits(256) == 2 * 9 + 8
        assert token_bits(65536) == 2 * 17 + 8

    def test_monotone_in_window(self):
        sizes = [token_bits(w) for w in (1, 2, 4, 100, 10_000)]
        assert sizes == sorted(sizes)


class TestRoundtrip:
    @given(
        data=st.binary(min_size=0, max_size=600),
        window=st.integers(min_value=1, max_value=700),
    )
    @settings(max_examples=150)
    def test_roundtrip_random(self, data, window):
        assert lz77_decode(lz77_encode(data, window)) == data

    @given(
        body=st.lists(
            st.sampled_from([b"ab", b"abc", b"a", b"bca"]), max_size=80
        ),
        window=st.integers(min_value=1, max_value=64),
    )
    @settings(max_examples=100)
    def test_roundtrip_repetitive(self, body, window):
        data = b"".join(body)
        assert lz77_decode(lz77_encode(data, window)) == data

    def test_self_overlapping_copy(self):
        # run of one symbol forces offset < length copies
        data = b"a" * 500 + b"b"
        tokens = lz77_encode(data, 1 << 16)
        assert lz77_decode(tokens) == data
        assert any(off and off < length for off, length, _ in tokens)

    def test_final_character_is_a_literal(self):
        tokens = lz77_encode(b"xyzxyzxyz", 64)
        assert lz77_decode(tokens) == b"xyzxyzxyz"
        # every triple ends in a literal, so output length is reproducible
        # from the token list alone
        total = sum(length + 1 for _, length, _ in tokens)
        assert total == len(b"xyzxyzxyz")

    def test_decode_rejects_bad_offset(self):
        with pytest.raises(ValueError, match="before the start"):
            lz77_decode([(5, 3, ord("a"))])


class TestSizeBehaviour:
    def test_periodic_input_compresses_hard(self):
        data = b"ab" * 5_000
        bits = lz77_window_encode(data, len(data))
        assert bits <= 0.05 * 8 * len(data)

    def test_tiny_window_cannot_compress_random(self):
        rng = random.Random(9)
        data = bytes(rng.randrange(256) for _ in range(4_096))
        bits = lz77_window_encode(data, 1)
        assert bits >= 8 * len(data)

    def test_window_one_emits_only_literals(self):
        tokens = lz77_encode(b"aaaaaaaa", 1)
        # matches need MIN_MATCH history inside the window; none fits in 1
        assert all(off == 0 and length == 0 for off, length, _ in tokens)
        assert len(tokens) == 8

    def test_wider_window_never_larger_on_text(self):
        data = (b"the quick brown fox jumps over the lazy dog " * 60)[:2_000]
        narrow = lz77_window_encode(data, 16)
        wide = lz77_window_encode(data, 2_048)
        assert wide <= narrow

    def test_match_length_respects_window_cap(self):
        data = b"q" * 300
        for _, length, _ in lz77_encode(data, 10):
            assert length <= 10

    def test_rejects_zero_window(self):
        with pytest.raises(ValueError, match="at least 1"):
            lz77_encode(b"abc", 0)

    def test_min_match_threshold(self):
        # a 2-character repeat is below MIN_MATCH and stays literal
        assert MIN_MATCH == 3
        tokens = lz77_encode(b"ababab", 2)
        assert all(off == 0 for off, _, _ in tokens)
