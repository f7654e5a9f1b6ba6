import hashlib
import hmac as std_hmac

import numpy as np
import pytest
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from flashvault.errors import ConfigurationError
from flashvault.keymgmt import (KdfContext, KeyManagementEngine, RepetitionHelper, RoPufInstance,
                                default_challenge, derive_key, hamming_fraction, hkdf_expand,
                                hkdf_extract, hmac, puf_response)


def test_hmac_matches_stdlib():
    for key, msg in [(b"", b""), (b"k" * 70, b"msg"), (b"key", b"x" * 1000)]:
        assert hmac(key, msg) == std_hmac.new(key, msg, hashlib.sha256).digest()
        assert hmac(key, msg, "SHA512") == std_hmac.new(key, msg, hashlib.sha512).digest()


def test_hkdf_rfc5869_case1():
    ikm = bytes.fromhex("0b" * 22)
    salt = bytes.fromhex("000102030405060708090a0b0c")
    info = bytes.fromhex("f0f1f2f3f4f5f6f7f8f9")
    prk = hkdf_extract(salt, ikm)
    assert prk.hex() == "077709362c2e32df0ddc3f0dc47bba6390b6c73bb50f9c3122ec844ad7c2b3e5"
    okm = hkdf_expand(prk, info, 42)
    assert okm.hex() == ("3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf"
                         "34007208d5b887185865")


@pytest.mark.parametrize("n", [1, 16, 32, 33, 100])
def test_derive_key_matches_library(n):
    root = np.random.default_rng(n).integers(0, 2, 256, dtype=np.uint8)
    ctx = KdfContext(b"salt", b"ctx", n)
    lib = HKDF(hashes.SHA256(), n, b"salt", b"ctx").derive(np.packbits(root).tobytes())
    assert derive_key(root, ctx) == lib


def test_kdf_errors():
    with pytest.raises(ConfigurationError):
        KdfContext(out_len=0)
    with pytest.raises(ConfigurationError):
        derive_key(b"", KdfContext())


def test_puf_noise_free_is_stable():
    p = RoPufInstance(5)
    assert hamming_fraction(puf_response(p), puf_response(p)) == 0.0


def test_puf_noisy_reads_vary_but_helper_recovers():
    p = RoPufInstance(9, noise_sigma=2e5)
    h = RepetitionHelper(5)
    ch = default_challenge(255, 512)
    key = np.random.default_rng(0).integers(0, 2, 51, dtype=np.uint8)
    helper = h.enroll(puf_response(p, ch, eval_seed=0), key)
    r1 = puf_response(p, ch, eval_seed=1)
    assert hamming_fraction(puf_response(p, ch, eval_seed=0), r1) > 0
    assert np.array_equal(h.reproduce(r1, helper), key)


def test_puf_inter_chip_distance():
    resp = [puf_response(RoPufInstance(s)) for s in range(40)]
    d = [hamming_fraction(resp[i], resp[j]) for i in range(40) for j in range(i + 1, 40)]
    assert 0.45 <= np.mean(d) <= 0.55


def test_puf_errors():
    with pytest.raises(ConfigurationError):
        RoPufInstance(0, n_oscillators=1)
    with pytest.raises(ConfigurationError):
        default_challenge(300, 512)
    p = RoPufInstance(0)
    with pytest.raises(IndexError):
        puf_response(p, [(0, 512)])
    with pytest.raises(ConfigurationError):
        puf_response(p, [(3, 3)])
    with pytest.raises(ConfigurationError):
        RepetitionHelper(4)


def test_key_engine_is_per_chip_and_context_separated():
    a, b = KeyManagementEngine(1), KeyManagementEngine(2)
    ka = a.symmetric_key("AES", 32)
    assert len(ka) == 32
    assert ka == KeyManagementEngine(1).symmetric_key("AES", 32)
    assert ka != b.symmetric_key("AES", 32)
    assert ka != a.symmetric_key("SM4", 32)
    assert a.scheme_seed("RSA") != a.scheme_seed("ECDSA")
    # the root never appears as an attribute
    assert not any(isinstance(v, np.ndarray) for v in vars(a).values())
