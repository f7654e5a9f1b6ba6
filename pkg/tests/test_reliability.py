import numpy as np
import pytest

from flashvault.errors import ConfigurationError, SizeMismatchError
from flashvault.reliability import (ChannelModel, QcLdpcCode, decode_page, gdbf_decode, inject_errors,
                                    ldpc_encode, page_code, toy_code)


def test_code_dimensions():
    pc = page_code()
    assert (pc.n, pc.k) == (37248, 32768)
    tc = toy_code()
    assert (tc.n, tc.k) == (64, 40)


def test_encode_satisfies_dense_parity_checks():
    code = toy_code()
    H = code.dense_h().astype(np.int64)
    rng = np.random.default_rng(0)
    for _ in range(50):
        d = rng.integers(0, 2, code.k, dtype=np.uint8)
        cw = ldpc_encode(d, code)
        assert np.array_equal(cw[:code.k], d)           # systematic
        assert not np.any(H @ cw % 2)
        assert not code.syndrome(cw).any()


def test_page_code_encode_is_a_codeword():
    code = page_code()
    data = np.random.default_rng(1).integers(0, 256, code.k // 8, dtype=np.uint8).tobytes()
    cw = ldpc_encode(data, code)
    assert not code.syndrome(cw).any()
    res = decode_page(cw)
    assert res.success and res.iterations_used == 0 and res.data == data


def test_toy_single_errors_all_corrected():
    code = toy_code()
    rng = np.random.default_rng(2)
    for _ in range(5):
        cw = ldpc_encode(rng.integers(0, 2, code.k, dtype=np.uint8), code)
        for i in range(code.n):
            y = cw.copy()
            y[i] ^= 1
            r = gdbf_decode(y, code)
            assert r.success and np.array_equal(r.bits, cw) and r.bits_flipped == 1


def test_page_decode_with_noise():
    code = page_code()
    rng = np.random.default_rng(3)
    ok = 0
    for f in range(20):
        data = rng.integers(0, 256, code.k // 8, dtype=np.uint8).tobytes()
        y = inject_errors(ldpc_encode(data, code), ChannelModel(1e-3, seed=11), frame=f)
        r = gdbf_decode(y, code)
        ok += r.success and r.data == data
    assert ok >= 19


def test_decode_failure_is_reported():
    code = toy_code()
    cw = ldpc_encode(np.zeros(code.k, dtype=np.uint8), code)
    y = cw ^ 1                                          # every bit wrong
    r = gdbf_decode(y, code, max_iter=2)
    assert not r.success and r.bits is None and r.data is None


def test_size_checks():
    code = toy_code()
    with pytest.raises(SizeMismatchError):
        ldpc_encode(np.zeros(code.k + 1, dtype=np.uint8), code)
    with pytest.raises(SizeMismatchError):
        gdbf_decode(np.zeros(code.n - 1, dtype=np.uint8), code)


def test_text_roundtrip(tmp_path):
    code = toy_code()
    p = tmp_path / "toy.txt"
    code.save(p)
    back = QcLdpcCode.load(p)
    assert np.array_equal(back.base, code.base) and back.z == code.z
    with pytest.raises(ConfigurationError):
        QcLdpcCode.from_text("8 2 4\n0 1 2 3\n")


def test_channel_is_deterministic_and_unbiased():
    cw = np.zeros(200_000, dtype=np.uint8)
    ch = ChannelModel(1e-2, seed=4)
    a = inject_errors(cw, ch, frame=3)
    assert np.array_equal(a, inject_errors(cw, ch, frame=3))
    assert not np.array_equal(a, inject_errors(cw, ch, frame=4))
    # binomial: mean 2000, sd ~44
    assert abs(int(a.sum()) - 2000) < 5 * 45
    assert not inject_errors(cw, ChannelModel(0.0)).any()
    with pytest.raises(ConfigurationError):
        ChannelModel(0.5)
