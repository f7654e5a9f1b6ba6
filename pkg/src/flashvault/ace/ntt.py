"""Negacyclic number-theoretic transform (the lattice-signature primitive).

Forward is Cooley-Tukey with bit-reversed powers of a primitive 2n-th
root ``zeta``, so pointwise products in the transform domain are products
in Z_q[x]/(x^n + 1).  Layers are vectorised with numpy; q < 2^31 keeps
every product inside int64.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ConfigurationError


def _is_prime(q):
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class NttParams:
    q: int = 8380417
    n: int = 256
    zeta: int = 1753   # primitive 512th root of unity mod 8380417

    def __post_init__(self):
        n, q, z = self.n, self.q, self.zeta
        if n < 2 or n & (n - 1):
            raise ConfigurationError("n must be a power of two")
        if q >= 1 << 31 or not _is_prime(q):
            raise ConfigurationError("q must be a prime below 2^31")
        if (q - 1) % (2 * n):
            raise ConfigurationError("2n must divide q - 1")
        if pow(z, n, q) != q - 1:
            raise ConfigurationError("zeta must be a primitive 2n-th root of unity")


DILITHIUM = NttParams()


def _brv(i, bits):
    return int(format(i, f"0{bits}b")[::-1], 2) if bits else 0


@lru_cache(maxsize=None)
def _zetas(p: NttParams):
    bits = p.n.bit_length() - 1
    return np.array([pow(p.zeta, _brv(i, bits), p.q) for i in range(p.n)], dtype=np.int64)


def _forward(a, p):
    q, n = p.q, p.n
    z = _zetas(p)
    k = 1
    length = n // 2
    while length >= 1:
        blocks = a.reshape(-1, 2 * length)
        zs = z[k:k + blocks.shape[0]][:, None]
        lo = blocks[:, :length]
        t = zs * blocks[:, length:] % q
        hi = (lo - t) % q
        blocks[:, :length] = (lo + t) % q
        blocks[:, length:] = hi
        k += blocks.shape[0]
        length //= 2
    return a


def _inverse(a, p):
    q, n = p.q, p.n
    z = _zetas(p)
    k = n
    length = 1
    while length < n:
        blocks = a.reshape(-1, 2 * length)
        m = blocks.shape[0]
        k -= m
        zs = (q - z[k:k + m][::-1])[:, None]
        lo = blocks[:, :length].copy()
        hi = blocks[:, length:]
        blocks[:, :length] = (lo + hi) % q
        blocks[:, length:] = zs * ((lo - hi) % q) % q
        length *= 2
    return a * pow(n, -1, q) % q


def ntt_transform(poly, params: NttParams = DILITHIUM, direction="forward"):
    a = np.array(poly, dtype=np.int64)
    if a.shape != (params.n,):
        raise ValueError(f"polynomial must have {params.n} coefficients, got {a.shape}")
    if a.size and (a.min() < 0 or a.max() >= params.q):
        raise ValueError("coefficients must lie in [0, q)")
    if direction == "forward":
        return _forward(a, params)
    if direction == "inverse":
        return _inverse(a, params)
    raise ValueError(f"direction must be forward or inverse, got {direction!r}")


def pointwise(a, b, params: NttParams = DILITHIUM):
    return np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64) % params.q


def negacyclic_convolution(a, b, q: int):
    """Schoolbook product in Z_q[x]/(x^n + 1)."""
    n = len(a)
    out = [0] * n
    for i in range(n):
        for j in range(n):
            k = i + j
            if k < n:
                out[k] = (out[k] + a[i] * b[j]) % q
            else:
                out[k - n] = (out[k - n] - a[i] * b[j]) % q
    return out


def butterflies(params: NttParams = DILITHIUM) -> int:
    n = params.n
    return (n // 2) * (n.bit_length() - 1)
