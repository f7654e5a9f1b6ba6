"""Textbook RSA on the asymmetric ALU (Barrett modexp) with step-counted cycles.

Padding is a deterministic full-domain expansion of the digest:
``0x00 || SHA-256(digest || ctr_0) || SHA-256(digest || ctr_1) || ...`` cut
to one byte short of the modulus, so the encoded value is always < n.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from ..calibration import Calibration
from ..datapath import LIMB_BITS, ModContext
from ..errors import ConfigurationError, SizeMismatchError
from .sha2 import sha2

_SMALL_PRIMES = [p for p in range(3, 2000, 2) if all(p % q for q in range(3, int(p ** 0.5) + 1, 2))]


def is_probable_prime(n: int, rng: random.Random, rounds: int = 40) -> bool:
    if n < 2:
        return False
    for p in [2] + _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime(bits, rng, e):
    while True:
        p = rng.getrandbits(bits) | (1 << (bits - 1)) | (1 << (bits - 2)) | 1
        if math.gcd(p - 1, e) == 1 and is_probable_prime(p, rng):
            return p


@dataclass(frozen=True)
class RsaKey:
    n: int
    e: int
    d: int | None = None

    @property
    def bits(self) -> int:
        return self.n.bit_length()

    @property
    def size_bytes(self) -> int:
        return (self.bits + 7) // 8

    def public(self) -> "RsaKey":
        return RsaKey(self.n, self.e)


def generate_key(bits: int = 2048, seed: int = 0, e: int = 65537) -> RsaKey:
    rng = random.Random(seed)
    while True:
        p = _prime(bits // 2, rng, e)
        q = _prime(bits - bits // 2, rng, e)
        n = p * q
        if p != q and n.bit_length() == bits:
            d = pow(e, -1, (p - 1) * (q - 1) // math.gcd(p - 1, q - 1))
            return RsaKey(n, e, d)


def modexp(base: int, exp: int, ctx: ModContext):
    """Left-to-right square-and-multiply; returns (value, modmul steps)."""
    if exp == 0:
        return 1 % ctx.m, 0
    r = base % ctx.m
    steps = 0
    for bit in bin(exp)[3:]:
        r = ctx.mul(r, r)
        steps += 1
        if bit == "1":
            r = ctx.mul(r, base)
            steps += 1
    return r, steps


def modmul_cycles(n_limbs: int, calibration: Calibration | None = None) -> int:
    """One Barrett modmul on the ALU: the multiplier eats ``limbs_per_cycle`` limbs a cycle."""
    cal = calibration or Calibration.default()
    per = cal.get("pke", "limbs_per_cycle")
    return math.ceil(n_limbs / per) + int(cal.get("pke", "modmul_overhead"))


def fdh_encode(digest: bytes, n: int) -> int:
    k = (n.bit_length() + 7) // 8
    need = k - 1
    out = b""
    ctr = 0
    while len(out) < need:
        out += sha2(digest + ctr.to_bytes(4, "big"))
        ctr += 1
    return int.from_bytes(out[:need], "big")


def _encode(key, digest, padding):
    if padding == "fdh":
        if len(digest) not in (32, 48, 64):
            raise SizeMismatchError(f"digest must be 256/384/512 bits, got {8 * len(digest)}")
        return fdh_encode(bytes(digest), key.n)
    if padding == "none":
        m = digest if isinstance(digest, int) else int.from_bytes(digest, "big")
        if m >= key.n:
            raise SizeMismatchError("message representative exceeds the modulus")
        return m
    raise ConfigurationError(f"unknown padding {padding!r}")


def rsa_op(key: RsaKey, digest, op: str, signature=None, padding="fdh",
           calibration: Calibration | None = None):
    """Sign or verify.  Sign -> (signature, cycles); verify -> (accepted, cycles).

    With ``padding="none"`` the digest (bytes or int) is used as the raw
    message representative and sign returns an int.
    """
    ctx = ModContext(key.n)
    cost = modmul_cycles(ctx.n_limbs, calibration)
    m = _encode(key, digest, padding)
    if op == "sign":
        if key.d is None:
            raise ConfigurationError("signing needs the private exponent")
        s, steps = modexp(m, key.d, ctx)
        if padding == "none":
            return s, steps * cost
        return s.to_bytes(key.size_bytes, "big"), steps * cost
    if op == "verify":
        if signature is None:
            raise ValueError("verify needs a signature")
        if isinstance(signature, int):
            s = signature
        else:
            if len(signature) != key.size_bytes:
                raise SizeMismatchError(
                    f"signature is {len(signature)} bytes, modulus is {key.size_bytes}")
            s = int.from_bytes(signature, "big")
        if s >= key.n:
            raise SizeMismatchError("signature value exceeds the modulus")
        v, steps = modexp(s, key.e, ctx)
        return v == m, steps * cost
    raise ValueError(f"op must be sign or verify, got {op!r}")


def exp_steps(exp: int) -> int:
    return (exp.bit_length() - 1) + bin(exp).count("1") - 1 if exp > 0 else 0


def sign_cycles(bits: int, calibration=None) -> int:
    """Expected signing cycles for a ``bits``-bit key (dense private exponent)."""
    limbs = -(-bits // LIMB_BITS)
    steps = (bits - 1) + bits // 2
    return steps * modmul_cycles(limbs, calibration)


def verify_cycles(bits: int, e: int = 65537, calibration=None) -> int:
    limbs = -(-bits // LIMB_BITS)
    return exp_steps(e) * modmul_cycles(limbs, calibration)
