import hashlib
import random

import numpy as np
import pytest
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec, utils as ec_utils
from cryptography.exceptions import InvalidSignature

from flashvault.ace.ecdsa import CURVES, ecdsa_op, generate_keypair, get_curve, on_curve, public_key
from flashvault.ace.keccak import keccak_f1600, permutation_count, sha3_256, sha3_512, shake128, shake256
from flashvault.ace.ntt import DILITHIUM, NttParams, butterflies, negacyclic_convolution, ntt_transform, pointwise
from flashvault.ace.rsa import RsaKey, generate_key, is_probable_prime, rsa_op
from flashvault.ace.schemes import PQC, SCHEMES, core_cycles, schedule, scheme_id, signature_cycles
from flashvault.ace.sha2 import chunk_cycles, hash_chunks, n_blocks, pad, schedule_chunks, sha2
from flashvault.errors import (ConfigurationError, InvalidPointError, SizeMismatchError,
                               UnsupportedAlgorithmError)

# ---- SHA-2 ----------------------------------------------------------------


@pytest.mark.parametrize("variant", ["SHA256", "SHA384", "SHA512"])
def test_sha2_matches_hashlib(variant):
    rng = random.Random(variant)
    ref = getattr(hashlib, variant.lower())
    # lengths around the padding boundaries plus random ones
    lengths = list(range(0, 140)) + [rng.randrange(2000) for _ in range(20)]
    for n in lengths:
        m = rng.randbytes(n)
        assert sha2(m, variant) == ref(m).digest()


def test_sha2_published_vector():
    assert sha2(b"abc").hex() == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def test_sha2_block_counts():
    for n in range(0, 300):
        assert n_blocks(n) == len(pad(bytes(n), 64)) // 64
        assert n_blocks(n, "SHA512") == len(pad(bytes(n), 128)) // 128
    assert n_blocks(55) == 1 and n_blocks(56) == 2
    assert n_blocks(111, "SHA512") == 1 and n_blocks(112, "SHA512") == 2


def test_chunk_scheduling():
    assert schedule_chunks([4, 4, 4, 4], 2) == 8
    assert schedule_chunks([10, 1, 1], 4) == 10
    digests, cyc = hash_chunks([b"a" * 100, b"b" * 10], "SHA256", alu_count=2)
    assert digests[0] == hashlib.sha256(b"a" * 100).digest()
    assert cyc == chunk_cycles([100, 10], "SHA256", 2)
    with pytest.raises(ValueError):
        schedule_chunks([1], 0)
    with pytest.raises(UnsupportedAlgorithmError):
        sha2(b"", "MD5")


# ---- Keccak / SHA-3 --------------------------------------------------------


def test_keccak_zero_state():
    out = keccak_f1600([0] * 25)
    assert out[0] == 0xF1258F7940E1DDE7


def test_keccak_state_validation():
    with pytest.raises(ValueError):
        keccak_f1600([0] * 24)
    with pytest.raises(ValueError):
        keccak_f1600([1 << 64] + [0] * 24)


def test_sha3_and_shake_match_hashlib():
    rng = random.Random(5)
    for n in list(range(0, 200, 7)) + [135, 136, 137, 167, 168, 169, 1000]:
        m = rng.randbytes(n)
        assert sha3_256(m) == hashlib.sha3_256(m).digest()
        assert sha3_512(m) == hashlib.sha3_512(m).digest()
        assert shake128(m, 200) == hashlib.shake_128(m).digest(200)
        assert shake256(m, 300) == hashlib.shake_256(m).digest(300)


def test_permutation_count():
    assert permutation_count(0) == 1
    assert permutation_count(136) == 2
    assert permutation_count(10, out_bytes=300) == 1 + 2


# ---- RSA ------------------------------------------------------------------


def test_rsa_textbook_toy():
    # p = 61, q = 53
    key = RsaKey(3233, 17, 2753)
    s, _ = rsa_op(key, 65, "sign", padding="none")
    assert s == pow(65, 2753, 3233)
    ok, _ = rsa_op(key.public(), 65, "verify", signature=s, padding="none")
    assert ok


def test_rsa_raw_matches_pow():
    key = generate_key(1024, seed=3)
    rng = random.Random(0)
    for _ in range(5):
        m = rng.randrange(key.n)
        s, cyc = rsa_op(key, m, "sign", padding="none")
        assert s == pow(m, key.d, key.n)
        assert cyc > 0


def test_rsa_key_is_consistent():
    key = generate_key(2048, seed=1)
    assert key.bits == 2048
    assert pow(pow(12345, key.e, key.n), key.d, key.n) == 12345


def test_rsa_fdh_sign_verify_and_tamper():
    key = generate_key(1024, seed=7)
    dig = hashlib.sha256(b"boot image").digest()
    sig, _ = rsa_op(key, dig, "sign")
    assert len(sig) == key.size_bytes
    assert rsa_op(key.public(), dig, "verify", signature=sig)[0]
    bad = bytes([sig[0] ^ 1]) + sig[1:]
    assert not rsa_op(key.public(), dig, "verify", signature=bad)[0]
    other = hashlib.sha256(b"other").digest()
    assert not rsa_op(key.public(), other, "verify", signature=sig)[0]


def test_rsa_errors():
    key = generate_key(512, seed=2)
    with pytest.raises(SizeMismatchError):
        rsa_op(key, b"short", "sign")
    with pytest.raises(ConfigurationError):
        rsa_op(key.public(), bytes(32), "sign")
    with pytest.raises(SizeMismatchError):
        rsa_op(key, bytes(32), "verify", signature=b"\x00")
    with pytest.raises(SizeMismatchError):
        rsa_op(key, key.n, "sign", padding="none")


def test_primality():
    rng = random.Random(0)
    assert is_probable_prime(2 ** 127 - 1, rng)
    assert not is_probable_prime(561, rng)        # Carmichael


# ---- ECDSA ----------------------------------------------------------------

# RFC 6979 A.2.5, P-256 with SHA-256, message "sample"
RFC6979_P256 = dict(
    x=0xC9AFA9D845BA75166B5C215767B1D6934E50C3DB36E89B127B8A622B120F6721,
    ux=0x60FED4BA255A9D31C961EB74C6356D68C049B8923B61FA6CE669622E60F29FB6,
    uy=0x7903FE1008B8BC99A41AE9E95628BC64F2F1B20C2D7E9F5177A3C294D4462299,
    r=0xEFD48B2AACB6A8FD1140DD9CD45E81D69D2C877B56AAF991C34D0EA84EAF3716,
    s=0xF7CB1C942D657C41D436C7A1B6E29F65F3E900DBB9AFF4064DC4AB2F843ACDA8,
)


def test_ecdsa_rfc6979_vector():
    v = RFC6979_P256
    c = get_curve("P-256")
    assert public_key(c, v["x"]) == (v["ux"], v["uy"])
    dig = hashlib.sha256(b"sample").digest()
    (r, s), cyc = ecdsa_op(c, v["x"], dig, "sign")
    assert (r, s) == (v["r"], v["s"])
    assert ecdsa_op(c, (v["ux"], v["uy"]), dig, "verify", signature=(r, s))[0]
    assert cyc > 0


_LIB = {"P256": (ec.SECP256R1(), hashes.SHA256()), "P384": (ec.SECP384R1(), hashes.SHA384())}


@pytest.mark.parametrize("name", ["P256", "P384"])
def test_ecdsa_interop_with_library(name):
    c = CURVES[name]
    lib_curve, lib_hash = _LIB[name]
    for seed in range(5):
        d, Q = generate_keypair(c, seed)
        dig = hashlib.new(c.hash_name, b"msg %d" % seed).digest()
        (r, s), _ = ecdsa_op(c, d, dig, "sign", rng=seed)
        pub = ec.EllipticCurvePublicNumbers(Q[0], Q[1], lib_curve).public_key()
        pub.verify(ec_utils.encode_dss_signature(r, s), dig, ec.ECDSA(ec_utils.Prehashed(lib_hash)))
        # and the other direction
        priv = ec.derive_private_key(d, lib_curve)
        der = priv.sign(dig, ec.ECDSA(ec_utils.Prehashed(lib_hash)))
        assert ecdsa_op(c, Q, dig, "verify", signature=ec_utils.decode_dss_signature(der))[0]


def test_ecdsa_rejects_tampering_and_bad_points():
    c = CURVES["P256"]
    d, Q = generate_keypair(c, 1)
    dig = hashlib.sha256(b"x").digest()
    (r, s), _ = ecdsa_op(c, d, dig, "sign")
    assert not ecdsa_op(c, Q, dig, "verify", signature=(r, (s + 1) % c.n))[0]
    assert not ecdsa_op(c, Q, dig, "verify", signature=(0, s))[0]
    with pytest.raises(InvalidPointError):
        ecdsa_op(c, (Q[0], Q[1] + 1), dig, "verify", signature=(r, s))
    assert on_curve(c, Q)
    with pytest.raises(UnsupportedAlgorithmError):
        get_curve("P-999")


def test_library_rejects_our_tampered_signature():
    c = CURVES["P256"]
    d, Q = generate_keypair(c, 4)
    dig = hashlib.sha256(b"y").digest()
    (r, s), _ = ecdsa_op(c, d, dig, "sign")
    pub = ec.EllipticCurvePublicNumbers(Q[0], Q[1], ec.SECP256R1()).public_key()
    with pytest.raises(InvalidSignature):
        pub.verify(ec_utils.encode_dss_signature(r, s ^ 2), dig, ec.ECDSA(ec_utils.Prehashed(hashes.SHA256())))


# ---- NTT ------------------------------------------------------------------


def test_ntt_roundtrip_and_convolution():
    rng = np.random.default_rng(0)
    q = DILITHIUM.q
    a = rng.integers(0, q, 256)
    b = rng.integers(0, q, 256)
    assert np.array_equal(ntt_transform(ntt_transform(a), direction="inverse"), a)
    prod = ntt_transform(pointwise(ntt_transform(a), ntt_transform(b)), direction="inverse")
    assert list(prod) == negacyclic_convolution(list(a), list(b), q)


def test_ntt_small_params():
    p = NttParams(q=17, n=8, zeta=3)     # 3 has order 16 mod 17
    a, b = [1, 2, 3, 4, 5, 6, 7, 8], [8, 7, 6, 5, 4, 3, 2, 1]
    prod = ntt_transform(pointwise(ntt_transform(a, p), ntt_transform(b, p), p), p, "inverse")
    assert list(prod) == negacyclic_convolution(a, b, 17)
    assert butterflies(p) == 12


def test_ntt_validation():
    with pytest.raises(ConfigurationError):
        NttParams(q=17, n=8, zeta=2)
    with pytest.raises(ValueError):
        ntt_transform([0] * 255)
    with pytest.raises(ValueError):
        ntt_transform([DILITHIUM.q] + [0] * 255)


# ---- scheme timing ---------------------------------------------------------


def test_scheme_cycles():
    for s in SCHEMES:
        for op in ("sign", "verify"):
            assert signature_cycles(s, op, 1024) > 0
        assert signature_cycles(s, "sign", 10240) >= signature_cycles(s, "sign", 1024)
    sign = {s: core_cycles(s, "sign") for s in SCHEMES}
    assert max(sign, key=sign.get) == "SPHINCSPLUS"
    for s in PQC:
        sch = schedule(s, "sign")
        assert sch.core_cycles == core_cycles(s, "sign")


def test_scheme_ids():
    assert scheme_id("SPHINCS+") == "SPHINCSPLUS"
    assert scheme_id("dilithium") == "DILITHIUM"
    with pytest.raises(UnsupportedAlgorithmError):
        scheme_id("ElGamal")
