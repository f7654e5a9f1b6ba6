"""Acceptance suite: one test per criterion, each records a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are
repeated in the terminal summary.
"""

import hashlib
import random
import time

import numpy as np
import pytest
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec, utils as ec_utils

from flashvault.ace.ecdsa import CURVES, ecdsa_op, generate_keypair, get_curve, public_key
from flashvault.ace.keccak import keccak_f1600, sha3_256, sha3_512
from flashvault.ace.rsa import RsaKey, generate_key, rsa_op
from flashvault.ace.sha2 import sha2
from flashvault.bce.engine import CIPHERS, ctr_process, load_cipher
from flashvault.bench import Bench, default_scenario
from flashvault.budget import PowerParams, max_engines, plan, program_power
from flashvault.cli import main as bench_main
from flashvault.keymgmt import RoPufInstance, hamming_fraction, puf_response
from flashvault.reliability import (ChannelModel, decode_page, gdbf_decode, inject_errors, ldpc_encode,
                                    page_code, toy_code)

from conftest import record
from oracles import KATS, LIB_CIPHERS, lib_ctr, lib_encrypt_block

ROUND_TRIPS = 1000
h = bytes.fromhex


# ---- 1: crypto exactness ------------------------------------------------------

def _published_vectors():
    bad = []
    for cid, key, pt, ct in KATS:
        c = CIPHERS[cid](h(key))
        if c.encrypt_block(h(pt)) != h(ct) or c.decrypt_block(h(ct)) != h(pt):
            bad.append(f"{cid} KAT")
    # FIPS 180 "abc" digests and the FIPS 202 one for SHA3-256
    if sha2(b"abc").hex() != "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad":
        bad.append("SHA256 abc")
    if sha2(b"abc", "SHA512").hex() != (
            "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a"
            "2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f"):
        bad.append("SHA512 abc")
    if sha3_256(b"abc").hex() != "3a985da74fe225b2045c172d6bd390bd855f086e3e9d525b46bfe24511431532":
        bad.append("SHA3-256 abc")
    if keccak_f1600([0] * 25)[0] != 0xF1258F7940E1DDE7:
        bad.append("Keccak zero state")
    # textbook RSA, p = 61, q = 53
    toy = RsaKey(3233, 17, 2753)
    s, _ = rsa_op(toy, 2790, "sign", padding="none")
    if s != 65 or not rsa_op(toy.public(), 2790, "verify", signature=s, padding="none")[0]:
        bad.append("RSA toy")
    # RFC 6979 A.2.5, P-256 / SHA-256, message "sample"
    c = get_curve("P-256")
    x = 0xC9AFA9D845BA75166B5C215767B1D6934E50C3DB36E89B127B8A622B120F6721
    (r, s), _ = ecdsa_op(c, x, hashlib.sha256(b"sample").digest(), "sign")
    if (r, s) != (0xEFD48B2AACB6A8FD1140DD9CD45E81D69D2C877B56AAF991C34D0EA84EAF3716,
                  0xF7CB1C942D657C41D436C7A1B6E29F65F3E900DBB9AFF4064DC4AB2F843ACDA8):
        bad.append("ECDSA RFC 6979")
    if public_key(c, x)[0] != 0x60FED4BA255A9D31C961EB74C6356D68C049B8923B61FA6CE669622E60F29FB6:
        bad.append("ECDSA public key")
    return bad


def _cipher_trips(rng):
    bad = []
    for cid, cls in sorted(CIPHERS.items()):
        for i in range(ROUND_TRIPS):
            key = rng.randbytes(cls.key_bytes[i % len(cls.key_bytes)])
            pt = rng.randbytes(cls.block_bytes)
            c = cls(key)
            ct = c.encrypt_block(pt)
            ok = c.decrypt_block(ct) == pt
            if cid in LIB_CIPHERS:
                ok = ok and ct == lib_encrypt_block(cid, key, pt)
            if not ok:
                bad.append(cid)
                break
        # CTR over a multi-block buffer with a ragged tail
        key = rng.randbytes(cls.key_bytes[0])
        nonce = rng.randbytes(cls.block_bytes - 4)
        data = rng.randbytes(37 * cls.block_bytes + 3)
        out, _ = ctr_process(data, key, nonce, cipher_id=cid)
        if ctr_process(out, key, nonce, cipher_id=cid)[0] != data or \
                (cid in LIB_CIPHERS and out != lib_ctr(cid, key, nonce, data)):
            bad.append(f"{cid} CTR")
    return bad


def _hash_trips(rng):
    bad = []
    for i in range(ROUND_TRIPS):
        m = rng.randbytes(rng.randrange(0, 300))
        if sha2(m) != hashlib.sha256(m).digest():
            bad.append("SHA256")
        if sha2(m, "SHA512") != hashlib.sha512(m).digest():
            bad.append("SHA512")
        if sha3_256(m) != hashlib.sha3_256(m).digest() or sha3_512(m) != hashlib.sha3_512(m).digest():
            bad.append("SHA3")
        if bad:
            break
    return bad


def _rsa_trips(rng):
    key = generate_key(2048, seed=1)
    pub = key.public()
    for i in range(ROUND_TRIPS):
        dig = hashlib.sha256(rng.randbytes(32)).digest()
        sig, _ = rsa_op(key, dig, "sign")
        if not rsa_op(pub, dig, "verify", signature=sig)[0]:
            return ["RSA-2048"]
        flip = bytes([sig[-1] ^ 1])
        if rsa_op(pub, dig, "verify", signature=sig[:-1] + flip)[0]:
            return ["RSA-2048 tamper"]
    return []


_LIB_CURVES = {"P256": (ec.SECP256R1(), hashes.SHA256()), "P384": (ec.SECP384R1(), hashes.SHA384())}


def _ecdsa_trips(rng):
    bad = []
    for name, (lib_curve, lib_hash) in _LIB_CURVES.items():
        c = CURVES[name]
        d, Q = generate_keypair(c, 11)
        pub = ec.EllipticCurvePublicNumbers(Q[0], Q[1], lib_curve).public_key()
        for i in range(ROUND_TRIPS):
            dig = hashlib.new(c.hash_name, rng.randbytes(16)).digest()
            sig, _ = ecdsa_op(c, d, dig, "sign")
            if not ecdsa_op(c, Q, dig, "verify", signature=sig)[0]:
                bad.append(name)
                break
            try:
                pub.verify(ec_utils.encode_dss_signature(*sig), dig, ec.ECDSA(ec_utils.Prehashed(lib_hash)))
            except Exception:
                bad.append(f"{name} library")
                break
    return bad


def test_c01_crypto_exactness():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    bad = _published_vectors() + _cipher_trips(rng) + _hash_trips(rng) + _rsa_trips(rng) + _ecdsa_trips(rng)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    record(1, ok, f"{ROUND_TRIPS} round trips per primitive, mismatches {bad or 'none'}, {dt:.1f} s (< 120 s)")
    assert ok


# ---- 2: budget -------------------------------------------------------------------

def test_c02_budget():
    p0 = program_power(PowerParams(13.8, 3.6))
    p1 = program_power(PowerParams(13.8, 3.6, 0.16))
    res = plan("text")
    n = max_engines(res.available_mm2, p1, res.engine.area_um2 / 1e6, res.engine.power_mw)
    ok = abs(p0 - 49.68) <= 1e-9 and abs(p1 - 41.73) <= 1e-9 and n == 2 and res.n_engines == 2
    record(2, ok, f"program power {p0:.2f} -> {p1:.2f} mW, N = {n}")
    assert ok


# ---- 3-5: placement scenarios ---------------------------------------------------------

@pytest.fixture(scope="module")
def matrix(bench):
    rows = []
    for kind in ("bulk_cipher", "secure_boot", "tamper_log"):
        rows += bench.rows(default_scenario(kind))
    cells = {}
    for r in rows:
        cells.setdefault((r.scenario, r.op, r.algorithm, r.size), {})[r.placement] = r
    return cells


def test_c03_ordering_and_envelope(matrix):
    lo_cpu, hi_cpu = 1.46 * 0.75, 3.45 * 1.25
    lo_ncp, hi_ncp = 1.02 * 0.75, 2.01 * 1.25
    misordered, inside = [], 0
    for key, v in matrix.items():
        fv, ncp, cpu = (v[p].total_ms for p in ("FV", "NCP", "CPU"))
        if not fv <= ncp <= cpu:
            misordered.append(key)
        inside += lo_cpu <= cpu / fv <= hi_cpu and lo_ncp <= ncp / fv <= hi_ncp
    frac = inside / len(matrix)
    ok = not misordered and frac >= 0.8
    record(3, ok, f"{len(matrix)} cells, misordered {len(misordered)}, in envelope {inside} ({frac:.0%}, need 80%)")
    assert ok


def test_c04_secure_boot_pattern():
    t0 = time.perf_counter()
    b = Bench(seed=0)
    rows = b.rows(default_scenario("secure_boot"))
    dt = time.perf_counter() - t0
    met = {(r.algorithm, r.size, r.placement): r.bound_met[0] for r in rows}
    MB = 1024 * 1024
    schemes = {r.algorithm for r in rows}
    fv = all(met[s, sz, "FV"] for s in schemes for sz in (10 * MB, 15 * MB))
    ncp = all(met[s, 10 * MB, "NCP"] for s in schemes) and any(not met[s, 15 * MB, "NCP"] for s in schemes)
    cpu = not any(met[s, sz, "CPU"] for s in schemes for sz in (10 * MB, 15 * MB))
    ok = fv and ncp and cpu and dt < 300
    record(4, ok, f"FV all met {fv}, NCP 10 MB met / 15 MB violated {ncp}, CPU all violated {cpu}, {dt:.1f} s")
    assert ok


def test_c05_tamper_log_pattern(matrix):
    log = {k: v["FV"] for k, v in matrix.items() if k[0] == "tamper_log"}
    pqc = ("DILITHIUM", "FALCON", "SPHINCSPLUS")
    gp = all(r.total_ms <= 15.0 for k, r in log.items() if k[2] in pqc)
    emb = all(r.total_ms <= 2.0 for k, r in log.items() if k[2] != "SPHINCSPLUS")
    sph = any(r.total_ms > 2.0 for k, r in log.items() if k[2] == "SPHINCSPLUS")
    ok = gp and emb and sph
    record(5, ok, f"PQC within 15 ms {gp}, non-SPHINCS+ within 2 ms {emb}, SPHINCS+ over 2 ms {sph}")
    assert ok


# ---- 6: steady state -------------------------------------------------------------------

def test_c06_steady_state_overheads(bench):
    rows = bench.ftl_overhead()
    target = {"program": 46.1, "read": 79.3, "verify": 3.6, "sign": 127.6}
    avg = {op: float(np.mean([r["overhead_pct"] for r in rows if r["operation"] == op])) for op in target}
    sign = {r["algorithm"]: r["overhead_pct"] for r in rows if r["operation"] == "sign"}
    within = all(abs(avg[op] - target[op]) <= 15.0 for op in target)
    outlier = min(sign, key=sign.get) == "SPHINCSPLUS"
    ok = within and outlier
    record(6, ok, ", ".join(f"{op} {avg[op]:.1f}% (vs {target[op]})" for op in target) +
           f", SPHINCS+ sign minimum {outlier}")
    assert ok


# ---- 7: LDPC ---------------------------------------------------------------------------

def test_c07_ldpc():
    t0 = time.perf_counter()
    code = page_code()
    rng = np.random.default_rng(7)
    ident = noisy = 0
    ch = ChannelModel(1e-3, seed=99)
    for f in range(1000):
        data = rng.integers(0, 256, code.k // 8, dtype=np.uint8).tobytes()
        cw = ldpc_encode(data, code)
        r = decode_page(cw, code)
        ident += r.success and r.data == data
        r = gdbf_decode(inject_errors(cw, ch, frame=f), code)
        noisy += r.success and r.data == data
    toy = toy_code()
    single = True
    for d in range(4):
        cw = ldpc_encode(np.random.default_rng(d).integers(0, 2, toy.k, dtype=np.uint8), toy)
        for i in range(toy.n):
            y = cw.copy()
            y[i] ^= 1
            r = gdbf_decode(y, toy)
            single &= bool(r.success and np.array_equal(r.bits, cw))
    dt = time.perf_counter() - t0
    ok = ident == 1000 and single and noisy >= 990 and dt < 600
    record(7, ok, f"zero-noise identity {ident}/1000, toy single errors all fixed {single}, "
                  f"BER 1e-3 success {noisy}/1000, {dt:.1f} s")
    assert ok


# ---- 8: determinism --------------------------------------------------------------------

def test_c08_determinism(tmp_path):
    outs = []
    for run in ("a", "b"):
        d = tmp_path / run
        assert bench_main(["all", "--seed", "0", "--out-dir", str(d), "--no-plot"]) == 0
        outs.append({p.name: p.read_bytes() for p in sorted(d.glob("*.csv"))})
    same = outs[0] == outs[1] and len(outs[0]) >= 5
    record(8, same, f"{len(outs[0])} CSV files, byte-identical across runs {same}")
    assert same


# ---- 9: primitive audit ----------------------------------------------------------------

# primitive operations each cipher needs, transcribed from the reference table
PRIMITIVE_TABLE = {
    "AES": {"XOR", "S-Box", "Shift", "Multiplication"},
    "TDES": {"XOR", "S-Box", "Permutation"},
    "IDEA": {"XOR", "ModAdd", "ModMult"},
    "SERPENT": {"XOR", "S-Box", "Shift", "Permutation"},
    "HIGHT": {"XOR", "Shift", "ModAdd", "ModMult"},
    "SM4": {"XOR", "S-Box", "Shift"},
    "CAMELLIA": {"XOR", "S-Box", "Shift", "AND", "OR"},
}


def test_c09_primitive_audit():
    bad = []
    for cid, want in PRIMITIVE_TABLE.items():
        for kb in CIPHERS[cid].key_bytes:
            prog, _ = load_cipher(cid, bytes(range(kb)))
            if prog.labels() != want:
                bad.append(f"{cid}/{kb * 8}")
    ok = not bad and set(PRIMITIVE_TABLE) == set(CIPHERS)
    record(9, ok, f"{len(PRIMITIVE_TABLE)} ciphers at every key size, mismatches {bad or 'none'}")
    assert ok


# ---- 10: PUF ---------------------------------------------------------------------------

def test_c10_puf_statistics():
    resp = [puf_response(RoPufInstance(s)) for s in range(100)]
    inter = float(np.mean([hamming_fraction(resp[i], resp[j]) for i in range(100) for j in range(i + 1, 100)]))
    intra = max(hamming_fraction(puf_response(RoPufInstance(s)), resp[s]) for s in range(100))
    ok = 0.45 <= inter <= 0.55 and intra == 0.0
    record(10, ok, f"inter-chip mean HD {inter:.4f} over 100 chips, intra-chip at zero noise {intra}")
    assert ok
