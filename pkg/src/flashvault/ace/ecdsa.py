"""ECDSA over NIST P-256 / P-384 with counted field operations.

Points are kept in Jacobian coordinates.  Every field multiplication or
squaring bumps a counter; cycles are that count times the ALU's modmul
cost, with inversions charged as their Fermat exponentiation steps.

Nonces follow the deterministic construction of RFC 6979 (HMAC-DRBG keyed
by the private key and digest).  A non-None ``rng`` seed is mixed in as the
optional extra input, so signatures stay reproducible for a given seed.
"""

from __future__ import annotations

import hashlib
import hmac
import random
from dataclasses import dataclass

from ..calibration import Calibration
from ..datapath import LIMB_BITS
from ..errors import InvalidPointError, UnsupportedAlgorithmError
from .rsa import exp_steps, modmul_cycles


@dataclass(frozen=True)
class Curve:
    name: str
    p: int
    a: int
    b: int
    gx: int
    gy: int
    n: int
    hash_name: str

    @property
    def bits(self) -> int:
        return self.n.bit_length()

    @property
    def limbs(self) -> int:
        return -(-self.p.bit_length() // LIMB_BITS)


CURVES = {
    "P256": Curve(
        "P256",
        p=0xFFFFFFFF00000001000000000000000000000000FFFFFFFFFFFFFFFFFFFFFFFF,
        a=-3 % 0xFFFFFFFF00000001000000000000000000000000FFFFFFFFFFFFFFFFFFFFFFFF,
        b=0x5AC635D8AA3A93E7B3EBBD55769886BC651D06B0CC53B0F63BCE3C3E27D2604B,
        gx=0x6B17D1F2E12C4247F8BCE6E563A440F277037D812DEB33A0F4A13945D898C296,
        gy=0x4FE342E2FE1A7F9B8EE7EB4A7C0F9E162BCE33576B315ECECBB6406837BF51F5,
        n=0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551,
        hash_name="sha256",
    ),
    "P384": Curve(
        "P384",
        p=int("FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFE"
              "FFFFFFFF0000000000000000FFFFFFFF", 16),
        a=int("FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFE"
              "FFFFFFFF0000000000000000FFFFFFFC", 16),
        b=int("B3312FA7E23EE7E4988E056BE3F82D19181D9C6EFE8141120314088F5013875A"
              "C656398D8A2ED19D2A85C8EDD3EC2AEF", 16),
        gx=int("AA87CA22BE8B05378EB1C71EF320AD746E1D3B628BA79B9859F741E082542A38"
               "5502F25DBF55296C3A545E3872760AB7", 16),
        gy=int("3617DE4A96262C6F5D9E98BF9292DC29F8F41DBD289A147CE9DA3113B5F0B8C0"
               "0A60B1CE1D7E819D7A431D7C90EA0E5F", 16),
        n=int("FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFC7634D81F4372DDF"
              "581A0DB248B0A77AECEC196ACCC52973", 16),
        hash_name="sha384",
    ),
}


def get_curve(name) -> Curve:
    key = str(name).upper().replace("-", "").replace("_", "")
    if key not in CURVES:
        raise UnsupportedAlgorithmError(f"unsupported curve {name!r}")
    return CURVES[key]


class _Field:
    """Arithmetic mod p with an operation tally."""

    def __init__(self, p):
        self.p = p
        self.muls = 0
        self.inv_steps = 0

    def mul(self, a, b):
        self.muls += 1
        return a * b % self.p

    def inv(self, a):
        self.inv_steps += exp_steps(self.p - 2)
        return pow(a, self.p - 2, self.p)


INF = (1, 1, 0)


def _double(F, P, a):
    X, Y, Z = P
    if Z == 0 or Y == 0:
        return INF
    p = F.p
    YY = F.mul(Y, Y)
    S = F.mul(4 * X % p, YY)
    ZZ = F.mul(Z, Z)
    if a == p - 3:
        M = F.mul(3 * (X - ZZ) % p, (X + ZZ) % p)
    else:
        M = (3 * F.mul(X, X) + F.mul(a, F.mul(ZZ, ZZ))) % p
    X3 = (F.mul(M, M) - 2 * S) % p
    Y3 = (F.mul(M, (S - X3) % p) - 8 * F.mul(YY, YY)) % p
    Z3 = 2 * F.mul(Y, Z) % p
    return (X3, Y3, Z3)


def _add(F, P, Q, a):
    if P[2] == 0:
        return Q
    if Q[2] == 0:
        return P
    p = F.p
    X1, Y1, Z1 = P
    X2, Y2, Z2 = Q
    Z1Z1 = F.mul(Z1, Z1)
    Z2Z2 = F.mul(Z2, Z2)
    U1 = F.mul(X1, Z2Z2)
    U2 = F.mul(X2, Z1Z1)
    S1 = F.mul(Y1, F.mul(Z2, Z2Z2))
    S2 = F.mul(Y2, F.mul(Z1, Z1Z1))
    H = (U2 - U1) % p
    R = (S2 - S1) % p
    if H == 0:
        return _double(F, P, a) if R == 0 else INF
    HH = F.mul(H, H)
    HHH = F.mul(H, HH)
    V = F.mul(U1, HH)
    X3 = (F.mul(R, R) - HHH - 2 * V) % p
    Y3 = (F.mul(R, (V - X3) % p) - F.mul(S1, HHH)) % p
    Z3 = F.mul(H, F.mul(Z1, Z2))
    return (X3, Y3, Z3)


def _affine(F, P):
    if P[2] == 0:
        return None
    zi = F.inv(P[2])
    zi2 = F.mul(zi, zi)
    return F.mul(P[0], zi2), F.mul(P[1], F.mul(zi2, zi))


def _mul_add(F, curve, k1, P1, k2=0, P2=None):
    """k1*P1 + k2*P2 by interleaved double-and-add (Shamir's trick)."""
    a = curve.a
    J1 = (P1[0], P1[1], 1)
    J2 = (P2[0], P2[1], 1) if P2 is not None else INF
    both = _add(F, J1, J2, a) if P2 is not None else INF
    R = INF
    for i in range(max(k1.bit_length(), k2.bit_length()) - 1, -1, -1):
        R = _double(F, R, a)
        b1, b2 = (k1 >> i) & 1, (k2 >> i) & 1
        if b1 and b2:
            R = _add(F, R, both, a)
        elif b1:
            R = _add(F, R, J1, a)
        elif b2:
            R = _add(F, R, J2, a)
    return _affine(F, R)


def on_curve(curve: Curve, Q) -> bool:
    if Q is None:
        return False
    x, y = Q
    p = curve.p
    return 0 <= x < p and 0 <= y < p and (y * y - (x * x * x + curve.a * x + curve.b)) % p == 0


def public_key(curve, d: int):
    curve = get_curve(curve) if not isinstance(curve, Curve) else curve
    if not 1 <= d < curve.n:
        raise ValueError("private key out of range")
    return _mul_add(_Field(curve.p), curve, d, (curve.gx, curve.gy))


def generate_keypair(curve, seed: int = 0):
    curve = get_curve(curve) if not isinstance(curve, Curve) else curve
    d = random.Random(seed).randrange(1, curve.n)
    return d, public_key(curve, d)


def bits2int(digest: bytes, qlen: int) -> int:
    v = int.from_bytes(digest, "big")
    blen = 8 * len(digest)
    return v >> (blen - qlen) if blen > qlen else v


def _nonces(curve, d, digest, extra=b""):
    """RFC 6979 candidate nonces (section 3.2), optional extra input per 3.6."""
    hname = curve.hash_name
    qlen = curve.bits
    rlen = (qlen + 7) // 8
    h1 = bits2int(digest, qlen) % curve.n
    x = d.to_bytes(rlen, "big")
    h = h1.to_bytes(rlen, "big")
    hlen = hashlib.new(hname).digest_size
    V = b"\x01" * hlen
    K = b"\x00" * hlen
    K = hmac.new(K, V + b"\x00" + x + h + extra, hname).digest()
    V = hmac.new(K, V, hname).digest()
    K = hmac.new(K, V + b"\x01" + x + h + extra, hname).digest()
    V = hmac.new(K, V, hname).digest()
    while True:
        T = b""
        while len(T) < rlen:
            V = hmac.new(K, V, hname).digest()
            T += V
        k = bits2int(T, qlen)
        if 1 <= k < curve.n:
            yield k
        K = hmac.new(K, V + b"\x00", hname).digest()
        V = hmac.new(K, V, hname).digest()


def sign(curve, d: int, digest: bytes, rng=None, stats: _Field | None = None):
    curve = get_curve(curve) if not isinstance(curve, Curve) else curve
    F = stats or _Field(curve.p)
    extra = b"" if rng is None else int(rng).to_bytes(8, "big", signed=True)
    e = bits2int(digest, curve.bits) % curve.n
    Fn = _Field(curve.n)
    for k in _nonces(curve, d, digest, extra):
        R = _mul_add(F, curve, k, (curve.gx, curve.gy))
        r = R[0] % curve.n
        if r == 0:
            continue
        s = Fn.mul(Fn.inv(k), (e + r * d) % curve.n)
        if s == 0:
            continue
        F.muls += Fn.muls + 1
        F.inv_steps += Fn.inv_steps
        return r, s


def verify(curve, Q, digest: bytes, signature, stats: _Field | None = None) -> bool:
    curve = get_curve(curve) if not isinstance(curve, Curve) else curve
    if not on_curve(curve, Q):
        raise InvalidPointError("public key is not a point on the curve")
    r, s = signature
    if not (1 <= r < curve.n and 1 <= s < curve.n):
        return False
    F = stats or _Field(curve.p)
    Fn = _Field(curve.n)
    e = bits2int(digest, curve.bits) % curve.n
    w = Fn.inv(s)
    u1, u2 = Fn.mul(e, w), Fn.mul(r, w)
    F.muls += Fn.muls
    F.inv_steps += Fn.inv_steps
    R = _mul_add(F, curve, u1, (curve.gx, curve.gy), u2, Q)
    return R is not None and R[0] % curve.n == r


def _cycles(curve, F, calibration):
    return (F.muls + F.inv_steps) * modmul_cycles(curve.limbs, calibration)


def ecdsa_op(curve, key, digest: bytes, op: str, rng=None, signature=None,
             calibration: Calibration | None = None):
    """Sign -> ((r, s), cycles) with ``key`` the private scalar;
    verify -> (accepted, cycles) with ``key`` the public point."""
    curve = get_curve(curve) if not isinstance(curve, Curve) else curve
    F = _Field(curve.p)
    if op == "sign":
        sig = sign(curve, key, digest, rng, F)
        return sig, _cycles(curve, F, calibration)
    if op == "verify":
        ok = verify(curve, key, digest, signature, F)
        return ok, _cycles(curve, F, calibration)
    raise ValueError(f"op must be sign or verify, got {op!r}")


def op_cycles(curve, op: str, calibration=None) -> int:
    """Typical cycle count (fixed reference key and digest) for the timing model."""
    curve = get_curve(curve) if not isinstance(curve, Curve) else curve
    d = curve.n // 3
    dig = bytes(range(curve.bits // 8))
    sig, c = ecdsa_op(curve, d, dig, "sign", calibration=calibration)
    if op == "sign":
        return c
    return ecdsa_op(curve, public_key(curve, d), dig, "verify", signature=sig, calibration=calibration)[1]
