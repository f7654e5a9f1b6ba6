"""SHA-256 / SHA-512 and the hash-ALU timing model.

Digests use ordinary sequential chaining, so they match any standard
implementation.  Parallelism across the ALUs is only a timing matter: a
single message occupies one ALU, while independent chunks (boot-image
segments, say) are spread over the cluster.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from ..calibration import Calibration
from ..errors import UnsupportedAlgorithmError

_K256 = (
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
)
_H256 = (0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a, 0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19)

_K512 = (
    0x428a2f98d728ae22, 0x7137449123ef65cd, 0xb5c0fbcfec4d3b2f, 0xe9b5dba58189dbbc, 0x3956c25bf348b538,
    0x59f111f1b605d019, 0x923f82a4af194f9b, 0xab1c5ed5da6d8118, 0xd807aa98a3030242, 0x12835b0145706fbe,
    0x243185be4ee4b28c, 0x550c7dc3d5ffb4e2, 0x72be5d74f27b896f, 0x80deb1fe3b1696b1, 0x9bdc06a725c71235,
    0xc19bf174cf692694, 0xe49b69c19ef14ad2, 0xefbe4786384f25e3, 0x0fc19dc68b8cd5b5, 0x240ca1cc77ac9c65,
    0x2de92c6f592b0275, 0x4a7484aa6ea6e483, 0x5cb0a9dcbd41fbd4, 0x76f988da831153b5, 0x983e5152ee66dfab,
    0xa831c66d2db43210, 0xb00327c898fb213f, 0xbf597fc7beef0ee4, 0xc6e00bf33da88fc2, 0xd5a79147930aa725,
    0x06ca6351e003826f, 0x142929670a0e6e70, 0x27b70a8546d22ffc, 0x2e1b21385c26c926, 0x4d2c6dfc5ac42aed,
    0x53380d139d95b3df, 0x650a73548baf63de, 0x766a0abb3c77b2a8, 0x81c2c92e47edaee6, 0x92722c851482353b,
    0xa2bfe8a14cf10364, 0xa81a664bbc423001, 0xc24b8b70d0f89791, 0xc76c51a30654be30, 0xd192e819d6ef5218,
    0xd69906245565a910, 0xf40e35855771202a, 0x106aa07032bbd1b8, 0x19a4c116b8d2d0c8, 0x1e376c085141ab53,
    0x2748774cdf8eeb99, 0x34b0bcb5e19b48a8, 0x391c0cb3c5c95a63, 0x4ed8aa4ae3418acb, 0x5b9cca4f7763e373,
    0x682e6ff3d6b2b8a3, 0x748f82ee5defb2fc, 0x78a5636f43172f60, 0x84c87814a1f0ab72, 0x8cc702081a6439ec,
    0x90befffa23631e28, 0xa4506cebde82bde9, 0xbef9a3f7b2c67915, 0xc67178f2e372532b, 0xca273eceea26619c,
    0xd186b8c721c0c207, 0xeada7dd6cde0eb1e, 0xf57d4f7fee6ed178, 0x06f067aa72176fba, 0x0a637dc5a2c898a6,
    0x113f9804bef90dae, 0x1b710b35131c471b, 0x28db77f523047d84, 0x32caab7b40c72493, 0x3c9ebe0a15c9bebc,
    0x431d67c49c100d4c, 0x4cc5d4becb3e42b6, 0x597f299cfc657e2a, 0x5fcb6fab3ad6faec, 0x6c44198c4a475817,
)
_H512 = (0x6a09e667f3bcc908, 0xbb67ae8584caa73b, 0x3c6ef372fe94f82b, 0xa54ff53a5f1d36f1,
         0x510e527fade682d1, 0x9b05688c2b3e6c1f, 0x1f83d9abfb41bd6b, 0x5be0cd19137e2179)
_H384 = (0xcbbb9d5dc1059ed8, 0x629a292a367cd507, 0x9159015a3070dd17, 0x152fecd8f70e5939,
         0x67332667ffc00b31, 0x8eb44a8768581511, 0xdb0c2e0d64f98fa7, 0x47b5481dbefa4fa4)

# (word bits, rounds, sigma rotations, K, block bytes)
_PARAMS = {
    "SHA256": (32, 64, ((2, 13, 22), (6, 11, 25), (7, 18, 3), (17, 19, 10)), _K256, 64, _H256, 32),
    "SHA512": (64, 80, ((28, 34, 39), (14, 18, 41), (1, 8, 7), (19, 61, 6)), _K512, 128, _H512, 64),
    "SHA384": (64, 80, ((28, 34, 39), (14, 18, 41), (1, 8, 7), (19, 61, 6)), _K512, 128, _H384, 48),
}


def _variant(variant: str) -> str:
    v = str(variant).upper().replace("-", "").replace("_", "")
    if v not in _PARAMS:
        raise UnsupportedAlgorithmError(f"unsupported hash {variant!r}")
    return v


def _compress(state, block, p):
    w_bits, rounds, sig, K, _, _, _ = p
    mask = (1 << w_bits) - 1
    (a0, a1, a2), (e0, e1, e2), (s00, s01, s02), (s10, s11, s12) = sig
    nb = w_bits // 8

    # rotations read off a doubled word: rotr(x, n) == ((x | x << w) >> n) & mask
    w = [int.from_bytes(block[i:i + nb], "big") for i in range(0, 16 * nb, nb)]
    for t in range(16, rounds):
        x, y = w[t - 15], w[t - 2]
        xx, yy = x | (x << w_bits), y | (y << w_bits)
        s0 = (((xx >> s00) ^ (xx >> s01)) & mask) ^ (x >> s02)
        s1 = (((yy >> s10) ^ (yy >> s11)) & mask) ^ (y >> s12)
        w.append((w[t - 16] + s0 + w[t - 7] + s1) & mask)
    a, b, c, d, e, f, g, h = state
    for t in range(rounds):
        ee, aa = e | (e << w_bits), a | (a << w_bits)
        S1 = ((ee >> e0) ^ (ee >> e1) ^ (ee >> e2)) & mask
        ch = (e & f) ^ (~e & mask & g)
        t1 = (h + S1 + ch + K[t] + w[t]) & mask
        S0 = ((aa >> a0) ^ (aa >> a1) ^ (aa >> a2)) & mask
        maj = (a & b) ^ (a & c) ^ (b & c)
        h, g, f, e, d, c, b, a = g, f, e, (d + t1) & mask, c, b, a, (t1 + S0 + maj) & mask
    return tuple((x + y) & mask for x, y in zip(state, (a, b, c, d, e, f, g, h)))


def pad(message: bytes, block_bytes: int) -> bytes:
    length_bytes = block_bytes // 8
    ml = len(message) * 8
    padded = message + b"\x80"
    padded += b"\x00" * ((-len(padded) - length_bytes) % block_bytes)
    return padded + ml.to_bytes(length_bytes, "big")


def n_blocks(n_bytes: int, variant="SHA256") -> int:
    """Compression calls for an ``n_bytes`` message (padding included)."""
    bb = _PARAMS[_variant(variant)][4]
    return (n_bytes + 1 + bb // 8 + bb - 1) // bb


def sha2(message: bytes, variant="SHA256") -> bytes:
    p = _PARAMS[_variant(variant)]
    bb = p[4]
    state = p[5]
    data = pad(bytes(message), bb)
    for i in range(0, len(data), bb):
        state = _compress(state, data[i:i + bb], p)
    nb = p[0] // 8
    return b"".join(x.to_bytes(nb, "big") for x in state)[:p[6]]


def block_cycles(variant="SHA256", calibration: Calibration | None = None) -> int:
    v = _variant(variant)
    cal = calibration or Calibration.default()
    key = "sha256_block" if v == "SHA256" else "sha512_block"
    return int(cal.get("hash", key))


@dataclass(frozen=True)
class HashJob:
    message: bytes
    variant: str = "SHA256"
    alu_count: int = 8


def sha2_digest(job: HashJob, calibration: Calibration | None = None):
    """Digest one message; a single chain runs on one ALU whatever ``alu_count`` is."""
    digest = sha2(job.message, job.variant)
    return digest, n_blocks(len(job.message), job.variant) * block_cycles(job.variant, calibration)


def schedule_chunks(chunk_blocks, alu_count: int) -> int:
    """Makespan (in blocks) of independent chains on ``alu_count`` ALUs.

    Longest-first greedy assignment; each chain stays on one ALU.
    """
    if alu_count < 1:
        raise ValueError("alu_count must be positive")
    loads = [0] * min(alu_count, max(1, len(chunk_blocks)))
    heapq.heapify(loads)
    for b in sorted(chunk_blocks, reverse=True):
        heapq.heappush(loads, heapq.heappop(loads) + b)
    return max(loads)


def chunk_cycles(chunk_sizes, variant="SHA256", alu_count=8, calibration=None) -> int:
    """Cycles to hash independent chunks of the given byte sizes."""
    blocks = [n_blocks(s, variant) for s in chunk_sizes]
    return schedule_chunks(blocks, alu_count) * block_cycles(variant, calibration)


def hash_chunks(chunks, variant="SHA256", alu_count=8, calibration=None):
    """Digest each chunk independently; returns (digests, cycles)."""
    digests = [sha2(c, variant) for c in chunks]
    return digests, chunk_cycles([len(c) for c in chunks], variant, alu_count, calibration)
