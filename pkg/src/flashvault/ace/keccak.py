"""Keccak sponge: SHA3-256/512 and SHAKE128/256 over keccak_f1600."""

from __future__ import annotations

from ..kernels import keccak_f1600 as _perm


def keccak_f1600(state):
    """Standard 24-round permutation on 25 64-bit lanes (lane index x + 5y)."""
    state = list(state)
    if len(state) != 25 or any(not 0 <= v < (1 << 64) for v in state):
        raise ValueError("Keccak state must be 25 lanes of 64 bits")
    return list(_perm(state))


class Sponge:
    def __init__(self, rate_bytes: int, suffix: int):
        self.rate = rate_bytes
        self.suffix = suffix
        self.state = [0] * 25
        self.buf = b""
        self.permutations = 0

    def _absorb_block(self, block):
        for i in range(self.rate // 8):
            self.state[i] ^= int.from_bytes(block[8 * i:8 * i + 8], "little")
        self.state = list(_perm(self.state))
        self.permutations += 1

    def absorb(self, data: bytes):
        data = self.buf + bytes(data)
        n = len(data) - len(data) % self.rate
        for i in range(0, n, self.rate):
            self._absorb_block(data[i:i + self.rate])
        self.buf = data[n:]
        return self

    def squeeze(self, n: int) -> bytes:
        last = bytearray(self.buf + bytes([self.suffix]) + bytes(self.rate - len(self.buf) - 1))
        last[-1] |= 0x80
        self._absorb_block(bytes(last))
        out = b""
        while True:
            out += b"".join(v.to_bytes(8, "little") for v in self.state[:self.rate // 8])
            if len(out) >= n:
                return out[:n]
            self.state = list(_perm(self.state))
            self.permutations += 1


def sha3_256(data: bytes) -> bytes:
    return Sponge(136, 0x06).absorb(data).squeeze(32)


def sha3_512(data: bytes) -> bytes:
    return Sponge(72, 0x06).absorb(data).squeeze(64)


def shake128(data: bytes, n: int) -> bytes:
    return Sponge(168, 0x1F).absorb(data).squeeze(n)


def shake256(data: bytes, n: int) -> bytes:
    return Sponge(136, 0x1F).absorb(data).squeeze(n)


def permutation_count(n_bytes: int, rate_bytes: int = 136, out_bytes: int = 32) -> int:
    """Keccak-f calls to absorb ``n_bytes`` and squeeze ``out_bytes``."""
    absorb = n_bytes // rate_bytes + 1
    return absorb + max(0, -(-out_bytes // rate_bytes) - 1)
