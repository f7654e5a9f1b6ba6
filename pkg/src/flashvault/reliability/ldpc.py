"""Quasi-cyclic LDPC code, systematic encoder and GDBF hard-decision decoder.

Parity-check layout (base matrix, one entry per z x z circulant; -1 means
all-zero, s >= 0 means the identity cyclically shifted by s)::

    H = [ H_d | h0 | dual diagonal ]

``h0`` has shift 1 in the first and last block-rows and shift 0 in the
middle one; the remaining parity columns carry identities on block-rows
(j-1, j).  Summing all block-rows cancels everything but p0, which gives a
linear-time encoder.  Data columns (weight 4 on the page code, 3 on the
toy code) are placed greedily
on the least-loaded rows, with shifts drawn from a seeded RNG and rejected
whenever they would close a 4-cycle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, SizeMismatchError
from ..kernels import gdbf_decode as _gdbf_kernel

PAGE_SEED = 2024


def _closes_4cycle(base, rows, shifts, z):
    """Would a new column with ``shifts`` on ``rows`` create a length-4 cycle?"""
    for col in base.T:
        for i, a in enumerate(rows):
            for b in rows[i + 1:]:
                if col[a] >= 0 and col[b] >= 0:
                    if (shifts[a] - shifts[b] - col[a] + col[b]) % z == 0:
                        return True
    return False


def build_base(m_b: int, k_b: int, z: int, seed: int, col_weight: int = 3) -> np.ndarray:
    if m_b < max(3, col_weight):
        raise ConfigurationError("need at least 3 block-rows")
    rng = random.Random(seed)
    parity = np.full((m_b, m_b), -1, dtype=np.int64)
    mid = m_b // 2
    parity[0, 0] = 1
    parity[mid, 0] = 0
    parity[m_b - 1, 0] = 1
    for j in range(1, m_b):
        parity[j - 1, j] = 0
        parity[j, j] = 0
    data = np.full((m_b, 0), -1, dtype=np.int64)
    degree = [int((parity[r] >= 0).sum()) for r in range(m_b)]
    for _ in range(k_b):
        order = sorted(range(m_b), key=lambda r: (degree[r], rng.random()))
        rows = sorted(order[:col_weight])
        existing = np.concatenate([data, parity], axis=1)
        for _attempt in range(2000):
            shifts = {r: rng.randrange(z) for r in rows}
            if not _closes_4cycle(existing, rows, shifts, z):
                break
        else:
            raise ConfigurationError("could not place a 4-cycle-free column; raise z or m_b")
        col = np.full((m_b, 1), -1, dtype=np.int64)
        for r in rows:
            col[r, 0] = shifts[r]
            degree[r] += 1
        data = np.concatenate([data, col], axis=1)
    return np.concatenate([data, parity], axis=1)


@dataclass
class QcLdpcCode:
    z: int
    base: np.ndarray          # m_b x n_b shift table
    max_iter: int = 30        # decoding budget suggested for this code
    chk_ptr: np.ndarray = field(init=False, repr=False)
    chk_idx: np.ndarray = field(init=False, repr=False)
    var_ptr: np.ndarray = field(init=False, repr=False)
    var_idx: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        base = np.asarray(self.base, dtype=np.int64)
        self.base = base
        m_b, n_b = base.shape
        if n_b <= m_b:
            raise ConfigurationError("base matrix needs more columns than rows")
        z = self.z
        checks, variables = [], []
        i = np.arange(z)
        for r in range(m_b):
            for c in range(n_b):
                s = base[r, c]
                if s >= 0:
                    checks.append(r * z + i)
                    variables.append(c * z + (i + s) % z)
        chk = np.concatenate(checks)
        var = np.concatenate(variables)
        order = np.lexsort((var, chk))
        self.chk_idx = var[order].astype(np.int32)
        self.chk_ptr = np.concatenate([[0], np.cumsum(np.bincount(chk, minlength=self.m))]).astype(np.int32)
        order = np.lexsort((chk, var))
        self.var_idx = chk[order].astype(np.int32)
        self.var_ptr = np.concatenate([[0], np.cumsum(np.bincount(var, minlength=self.n))]).astype(np.int32)

    @property
    def m_b(self):
        return self.base.shape[0]

    @property
    def n_b(self):
        return self.base.shape[1]

    @property
    def n(self):
        return self.n_b * self.z

    @property
    def m(self):
        return self.m_b * self.z

    @property
    def k(self):
        return self.n - self.m

    @property
    def rate(self):
        return self.k / self.n

    def syndrome(self, bits) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.uint8)
        return np.bitwise_xor.reduceat(bits[self.chk_idx], self.chk_ptr[:-1])

    def dense_h(self) -> np.ndarray:
        """Full parity-check matrix (only sensible for small codes)."""
        h = np.zeros((self.m, self.n), dtype=np.uint8)
        for c in range(self.m):
            h[c, self.chk_idx[self.chk_ptr[c]:self.chk_ptr[c + 1]]] = 1
        return h

    # plain-text shift table: "z m_b n_b" then one line per block-row
    def to_text(self) -> str:
        lines = [f"{self.z} {self.m_b} {self.n_b} {self.max_iter}"]
        lines += [" ".join(str(int(v)) for v in row) for row in self.base]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "QcLdpcCode":
        rows = [ln.split() for ln in text.strip().splitlines() if ln.strip() and not ln.startswith("#")]
        head = [int(v) for v in rows[0]]
        z, m_b, n_b = head[:3]
        base = np.array([[int(v) for v in r] for r in rows[1:]], dtype=np.int64)
        if base.shape != (m_b, n_b):
            raise ConfigurationError(f"shift table is {base.shape}, header says {(m_b, n_b)}")
        return cls(z, base, head[3] if len(head) > 3 else 30)

    def save(self, path):
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path):
        return cls.from_text(Path(path).read_text())


@lru_cache(maxsize=8)
def make_code(k_bits: int = 32768, rate: float = 0.88, z: int = 128, seed: int = PAGE_SEED,
              max_iter: int = 30, col_weight: int = 4) -> QcLdpcCode:
    if k_bits % z:
        raise ConfigurationError("k must be a multiple of z")
    k_b = k_bits // z
    n_b = round(k_b / rate)
    m_b = n_b - k_b
    return QcLdpcCode(z, build_base(m_b, k_b, z, seed, col_weight), max_iter)


def page_code() -> QcLdpcCode:
    """4 KB page code: z=128, 256 data + 35 parity circulants (n = 37,248).

    Single-flip GDBF corrects at most one bit per iteration and a page at
    raw BER 1e-3 carries ~37 errors, so this code carries a larger
    iteration budget than the generic default of 30.
    """
    return make_code(32768, 0.88, 128, PAGE_SEED, max_iter=120, col_weight=4)


def toy_code() -> QcLdpcCode:
    """n = 64, k = 40 (z = 8, 3 x 8 base) for exhaustive checks."""
    return QcLdpcCode(8, build_base(3, 5, 8, seed=7))


def _bits(data, k):
    if isinstance(data, (bytes, bytearray)):
        bits = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))
    else:
        bits = np.asarray(data, dtype=np.uint8)
    if bits.size != k:
        raise SizeMismatchError(f"code carries {k} data bits, got {bits.size}")
    return bits


def ldpc_encode(data, code: QcLdpcCode) -> np.ndarray:
    """Systematic codeword (uint8 bit array): data bits then parity."""
    z, m_b = code.z, code.m_b
    k_b = code.n_b - m_b
    d = _bits(data, code.k).reshape(k_b, z)
    lam = np.zeros((m_b, z), dtype=np.uint8)
    for r in range(m_b):
        for c in range(k_b):
            s = code.base[r, c]
            if s >= 0:
                lam[r] ^= np.roll(d[c], -s)
    p = np.zeros((m_b, z), dtype=np.uint8)
    p[0] = np.bitwise_xor.reduce(lam, axis=0)
    mid = m_b // 2
    shifted = np.roll(p[0], -1)
    p[1] = lam[0] ^ shifted
    for j in range(1, m_b - 1):
        p[j + 1] = lam[j] ^ p[j]
        if j == mid:
            p[j + 1] ^= p[0]
    return np.concatenate([d.ravel(), p.ravel()])


@dataclass
class DecodeResult:
    success: bool
    bits: np.ndarray | None
    iterations_used: int
    bits_flipped: int
    k: int = 0

    @property
    def data_bits(self):
        return None if not self.success else self.bits[:self.k]

    @property
    def data(self) -> bytes | None:
        if not self.success:
            return None
        return np.packbits(self.bits[:self.k]).tobytes()


def gdbf_decode(received, code: QcLdpcCode, max_iter: int | None = None) -> DecodeResult:
    """Single-flip GDBF.

    Score of bit i is the hard-decision GDBF inversion function: +1 if it
    still agrees with the channel (else -1), plus one term per adjacent
    check, +1 when satisfied and -1 when not.  Each iteration flips the
    lowest-scoring bit (lowest index on ties) until every check holds or
    ``max_iter`` iterations have been spent.  When the lowest score is not
    negative no single flip can improve the objective; that iteration
    instead flips every bit sharing the lowest score (the escape step).
    """
    y = np.ascontiguousarray(received, dtype=np.uint8)
    if y.size != code.n:
        raise SizeMismatchError(f"received word has {y.size} bits, code length is {code.n}")
    budget = code.max_iter if max_iter is None else max_iter
    x, iters, ok = _gdbf_kernel(y, code.chk_ptr, code.chk_idx, code.var_ptr, code.var_idx, int(budget))
    x = np.asarray(x, dtype=np.uint8)
    return DecodeResult(bool(ok), x if ok else None, int(iters), int(np.count_nonzero(x != y)), code.k)



def decode_page(received, code: QcLdpcCode | None = None) -> DecodeResult:
    return gdbf_decode(received, code or page_code())
