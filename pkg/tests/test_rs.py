import itertools
from pathlib import Path

import numpy as np
import pytest

from thzlink.gf import get_field
from thzlink.rs import (ReedSolomonCodec, RsCodeword, bits_to_symbols,
                        generator_poly, rs_decode, rs_encode, symbols_to_bits)

VECTORS = Path(__file__).parent / "vectors" / "rs_vectors.txt"


def longdiv_parity(data_syms, s, r):
    """Oracle: schoolbook long division of x^r * M(x) by g(x)."""
    gf = get_field(s)
    g = generator_poly(gf, r)
    work = list(data_syms) + [0] * r
    for i in range(len(data_syms)):
        lead = work[i]
        if lead == 0:
            continue
        for j, gc in enumerate(g):
            work[i + j] ^= gf.mul(lead, gc)
    return work[-r:]


def syms_to_bit_array(syms, s):
    return symbols_to_bits(np.asarray(syms, dtype=np.int64), s)


# -- encoding ---------------------------------------------------------------


def test_parity_matches_frozen_hand_vector():
    # data symbols 1,2,3,4 over GF(16) with two parity symbols
    codec = ReedSolomonCodec(4, 2)
    cw = codec.encode(syms_to_bit_array([1, 2, 3, 4], 4))
    assert list(cw.symbols) == [1, 2, 3, 4, 0xC, 0x3]


def test_parity_matches_fixture_vectors():
    width = {4: 1, 8: 2}
    n_cases = 0
    for line in VECTORS.read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        s_txt, r_txt, data_hex, parity_hex = line.split()
        s, r = int(s_txt), int(r_txt)
        w = width[s]
        data = [int(data_hex[i:i + w], 16) for i in range(0, len(data_hex), w)]
        parity = [int(parity_hex[i:i + w], 16) for i in range(0, len(parity_hex), w)]
        cw = ReedSolomonCodec(s, r).encode(syms_to_bit_array(data, s))
        assert list(cw.symbols) == data + parity, line
        assert longdiv_parity(data, s, r) == parity, line
        n_cases += 1
    assert n_cases >= 10


@pytest.mark.parametrize("s,r,k_symbols", [(3, 2, 4), (4, 2, 10), (4, 4, 9),
                                           (5, 2, 20), (8, 2, 28), (8, 4, 40)])
def test_encode_matches_longdiv_oracle(s, r, k_symbols, rng):
    codec = ReedSolomonCodec(s, r)
    for _ in range(20):
        data = list(int(x) for x in rng.integers(0, 1 << s, k_symbols))
        cw = codec.encode(syms_to_bit_array(data, s))
        assert list(cw.symbols[k_symbols:]) == longdiv_parity(data, s, r)


def test_all_zero_data_gives_all_zero_parity():
    for s, r in [(3, 2), (4, 2), (4, 4), (8, 2)]:
        cw = rs_encode(np.zeros(s * 5, dtype=np.uint8), s, r)
        assert not cw.symbols.any()


def test_paper_geometry_k224_s8():
    cw = rs_encode(np.zeros(224, dtype=np.uint8), 8, 2)
    assert len(cw.symbols) == 30
    assert cw.k_symbols == 28 and cw.r_symbols == 2
    assert cw.zero_pad == 225
    assert cw.k_bits == 224 and cw.r_bits == 16


def test_systematic_prefix_is_the_data(rng):
    data = rng.integers(0, 2, 224).astype(np.uint8)
    cw = rs_encode(data, 8, 2)
    assert np.array_equal(cw.to_bits()[:224], data)


def test_parity_is_linear_in_the_data(rng):
    codec = ReedSolomonCodec(8, 2)
    for _ in range(10):
        d1 = rng.integers(0, 2, 224).astype(np.uint8)
        d2 = rng.integers(0, 2, 224).astype(np.uint8)
        p1 = codec.encode(d1).symbols[28:]
        p2 = codec.encode(d2).symbols[28:]
        p12 = codec.encode(d1 ^ d2).symbols[28:]
        assert np.array_equal(p12, p1 ^ p2)


def test_encode_parameter_errors():
    with pytest.raises(ValueError):
        rs_encode(np.zeros(10, dtype=np.uint8), 4, 2)  # K not divisible by s
    with pytest.raises(ValueError):
        rs_encode(np.zeros(4 * 14, dtype=np.uint8), 4, 2)  # 14 + 2 > 15 symbols
    with pytest.raises(ValueError):
        ReedSolomonCodec(4, 0)


def test_bit_symbol_packing_roundtrip(rng):
    for s in (3, 4, 8, 12):
        bits = rng.integers(0, 2, (5, s * 7)).astype(np.uint8)
        assert np.array_equal(symbols_to_bits(bits_to_symbols(bits, s), s), bits)
    with pytest.raises(ValueError):
        bits_to_symbols(np.zeros(10, dtype=np.uint8), 4)


# -- decoding ---------------------------------------------------------------


@pytest.mark.parametrize("s,r,k_bits", [(2, 2, 2), (3, 2, 9), (4, 2, 40),
                                        (4, 4, 36), (8, 2, 224), (8, 4, 320),
                                        (12, 2, 1200)])
def test_roundtrip_without_errors(s, r, k_bits, rng):
    codec = ReedSolomonCodec(s, r)
    for _ in range(5):
        data = rng.integers(0, 2, k_bits).astype(np.uint8)
        res = codec.decode(codec.encode(data))
        assert res.ok and res.corrected == 0 and res.status == "error-free"
        assert np.array_equal(res.data, data)


@pytest.mark.parametrize("s,r", [(2, 2), (3, 2), (4, 2)])
def test_single_symbol_errors_exhaustive_small_fields(s, r, rng):
    codec = ReedSolomonCodec(s, r)
    k_symbols = (1 << s) - 1 - r  # full-length code
    data = rng.integers(0, 2, s * k_symbols).astype(np.uint8)
    cw = codec.encode(data)
    for pos in range(len(cw.symbols)):
        for val in range(1, 1 << s):
            bad = cw.symbols.copy()
            bad[pos] ^= val
            res = codec.decode(cw.with_symbols(bad))
            assert res.ok and res.corrected == 1
            assert np.array_equal(res.data, data)


def test_two_symbol_errors_randomized_t2_gf256(rng):
    # 10^4 random double errors on a t=2 code over GF(256): all corrected.
    codec = ReedSolomonCodec(8, 4)
    data = rng.integers(0, 2, 8 * 60).astype(np.uint8)
    cw = codec.encode(data)
    n = len(cw.symbols)
    for _ in range(10_000):
        p1, p2 = rng.choice(n, size=2, replace=False)
        bad = cw.symbols.copy()
        bad[p1] ^= int(rng.integers(1, 256))
        bad[p2] ^= int(rng.integers(1, 256))
        res = codec.decode(cw.with_symbols(bad))
        assert res.ok and res.corrected == 2
        assert np.array_equal(res.data, data)


def test_beyond_capability_never_reported_clean(rng):
    # Two errors on a t=1 code: either flagged uncorrectable or misdecoded
    # with corrected == 1; never accepted as an error-free word.
    codec = ReedSolomonCodec(8, 2)
    data = rng.integers(0, 2, 224).astype(np.uint8)
    cw = codec.encode(data)
    outcomes = {"uncorrectable": 0, "misdecode": 0}
    for p1, p2 in itertools.combinations(range(30), 2):
        bad = cw.symbols.copy()
        bad[p1] ^= int(rng.integers(1, 256))
        bad[p2] ^= int(rng.integers(1, 256))
        res = codec.decode(cw.with_symbols(bad))
        if not res.ok:
            outcomes["uncorrectable"] += 1
            continue
        # A t=1 decoder can never return the original word from 2 errors.
        assert res.corrected == 1
        assert not np.array_equal(res.data, data)
        outcomes["misdecode"] += 1
    assert outcomes["uncorrectable"] + outcomes["misdecode"] == 435
    # The 225 implied pad symbols catch most wrong locators.
    assert outcomes["uncorrectable"] > outcomes["misdecode"]


def test_decode_batch_matches_scalar(rng):
    codec = ReedSolomonCodec(8, 2)
    data = rng.integers(0, 2, (400, 224)).astype(np.uint8)
    tx = codec.encode_batch(data)
    noise = rng.integers(0, 256, tx.shape) * (rng.random(tx.shape) < 0.02)
    rx = tx ^ noise
    out, corrected, ok = codec.decode_symbols_batch(rx)
    template = codec.encode(data[0])
    for i in range(400):
        res = codec.decode(template.with_symbols(rx[i]))
        assert res.ok == ok[i]
        assert res.corrected == corrected[i]
        assert np.array_equal(res.data, symbols_to_bits(out[i, :28], 8))


def test_decode_batch_matches_scalar_t2(rng):
    codec = ReedSolomonCodec(4, 4)
    data = rng.integers(0, 2, (200, 36)).astype(np.uint8)
    tx = codec.encode_batch(data)
    noise = rng.integers(0, 16, tx.shape) * (rng.random(tx.shape) < 0.08)
    rx = tx ^ noise
    out, corrected, ok = codec.decode_symbols_batch(rx)
    template = codec.encode(data[0])
    for i in range(200):
        res = codec.decode(template.with_symbols(rx[i]))
        assert (res.ok, res.corrected) == (ok[i], corrected[i])
        assert np.array_equal(res.data, symbols_to_bits(out[i, :9], 4))


def test_module_level_roundtrip(rng):
    data = rng.integers(0, 2, 16).astype(np.uint8)
    word = rs_encode(data, 4, 2)
    res = rs_decode(word)
    assert res.ok and np.array_equal(res.data, data)


def test_codeword_from_bits_roundtrip(rng):
    data = rng.integers(0, 2, 224).astype(np.uint8)
    cw = rs_encode(data, 8, 2)
    rebuilt = RsCodeword.from_bits(cw.to_bits(), 8, cw.k_symbols, cw.r_symbols)
    assert np.array_equal(rebuilt.symbols, cw.symbols)
    assert rebuilt.zero_pad == cw.zero_pad
    with pytest.raises(ValueError):
        RsCodeword.from_bits(cw.to_bits(), 8, 10, 2)


def test_decode_rejects_wrong_length(rng):
    codec = ReedSolomonCodec(4, 2)
    cw = codec.encode(rng.integers(0, 2, 16).astype(np.uint8))
    with pytest.raises(ValueError):
        codec.decode(cw.with_symbols(cw.symbols[:-1]))
