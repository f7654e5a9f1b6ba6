"""A single BCE lane: the five units plus an instruction trace."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ..datapath import BenesConfig, SBoxTable, logic_int, permute_int, route_benes, shift_int

# primitive-op label for each (unit, opcode)
OP_LABELS = {
    ("LOU", "xor"): "XOR",
    ("LOU", "and"): "AND",
    ("LOU", "or"): "OR",
    ("LOU", "not"): "NOT",
    ("TU", "sbox"): "S-Box",
    ("SU", "shift"): "Shift",
    ("PU", "permute"): "Permutation",
    ("AU", "modadd"): "ModAdd",
    ("AU", "modmul"): "ModMult",
    ("AU", "gfmul"): "Multiplication",
}
UNITS = ("AU", "LOU", "PU", "SU", "TU")


@dataclass(frozen=True)
class Instruction:
    unit: str
    opcode: str
    width: int
    immediate: object = None

    @property
    def label(self) -> str:
        return OP_LABELS[(self.unit, self.opcode)]


def selection_perm(select, width: int) -> BenesConfig:
    """Route a bit selection through a full permutation.

    ``select`` maps output bit -> input bit, either as a sequence (outputs
    0..len-1) or a dict.  Unselected inputs are parked on the unused output
    lines, which the caller ignores, so any selection with distinct sources
    is realizable.
    """
    mapping = dict(enumerate(select)) if not isinstance(select, dict) else dict(select)
    if len(set(mapping.values())) != len(mapping):
        raise ValueError("selection repeats a source bit")
    spare = iter(sorted(set(range(width)) - set(mapping.values())))
    perm = [mapping[o] if o in mapping else next(spare) for o in range(width)]
    return route_benes(perm)


_GF_TABLES: dict[int, tuple[int, ...]] = {}


def _gf_table(c: int) -> tuple[int, ...]:
    t = _GF_TABLES.get(c)
    if t is None:
        t = _GF_TABLES[c] = tuple(_gf_mul_byte(x, c) for x in range(256))
    return t


def _gf_mul_byte(a: int, b: int) -> int:
    # carry-less product reduced by the AES polynomial
    p = 0
    while b:
        if b & 1:
            p ^= a
        a <<= 1
        if a & 0x100:
            a ^= 0x11B
        b >>= 1
    return p


class Lane:
    """Executes unit operations on integers and records what ran."""

    def __init__(self, record: bool = False):
        self.tables: dict[str, tuple[SBoxTable, ...]] = {}
        self.counts: Counter = Counter()
        self.record = record
        self.trace: list[Instruction] = []

    # ops bump ``counts`` inline (this is the hot path) and only call here when tracing
    def _log(self, unit, opcode, width, imm=None):
        self.trace.append(Instruction(unit, opcode, width, imm))

    def reset_trace(self):
        self.counts.clear()
        self.trace = []

    def labels_used(self) -> set[str]:
        return {OP_LABELS[k] for k in self.counts}

    def units_used(self) -> set[str]:
        return {k[0] for k in self.counts}

    # LOU
    def xor(self, a, b, width=32):
        self.counts["LOU", "xor"] += 1
        if self.record:
            self._log("LOU", "xor", width)
        return a ^ b

    def and_(self, a, b, width=32):
        self.counts["LOU", "and"] += 1
        if self.record:
            self._log("LOU", "and", width)
        return a & b

    def or_(self, a, b, width=32):
        self.counts["LOU", "or"] += 1
        if self.record:
            self._log("LOU", "or", width)
        return a | b

    def not_(self, a, width=32):
        self.counts["LOU", "not"] += 1
        if self.record:
            self._log("LOU", "not", width)
        return logic_int(a, 0, "not", width)

    # SU
    def rotl(self, x, n, width=32):
        self.counts["SU", "shift"] += 1
        if self.record:
            self._log("SU", "shift", width, ("rotate_left", n))
        return shift_int(x, n, "rotate_left", width)

    def rotr(self, x, n, width=32):
        self.counts["SU", "shift"] += 1
        if self.record:
            self._log("SU", "shift", width, ("rotate_right", n))
        return shift_int(x, n, "rotate_right", width)

    def shl(self, x, n, width=32):
        self.counts["SU", "shift"] += 1
        if self.record:
            self._log("SU", "shift", width, ("logical_left", n))
        return shift_int(x, n, "logical_left", width)

    def shr(self, x, n, width=32):
        self.counts["SU", "shift"] += 1
        if self.record:
            self._log("SU", "shift", width, ("logical_right", n))
        return shift_int(x, n, "logical_right", width)

    # TU
    def load_tables(self, name: str, tables: Sequence[SBoxTable]):
        if not 1 <= len(tables) <= 4:
            raise ValueError("a table set holds 1 to 4 S-boxes")
        self.tables[name] = tuple(tables)

    def sbox(self, x, name, width=8):
        """Byte i of ``x`` goes through table i of the set (sub-byte inputs zero-padded)."""
        self.counts["TU", "sbox"] += 1
        if self.record:
            self._log("TU", "sbox", width, name)
        tabs = self.tables[name]
        out = 0
        for i in range((width + 7) // 8):
            out |= tabs[i % len(tabs)][(x >> (8 * i)) & 0xFF] << (8 * i)
        return out & ((1 << width) - 1)

    # PU
    def permute(self, x, cfg: BenesConfig):
        self.counts["PU", "permute"] += 1
        if self.record:
            self._log("PU", "permute", cfg.width)
        return permute_int(x, cfg)

    # AU
    def add(self, a, b, width):
        self.counts["AU", "modadd"] += 1
        if self.record:
            self._log("AU", "modadd", width)
        return (a + b) & ((1 << width) - 1)

    def mulmod(self, a, b, modulus, width):
        self.counts["AU", "modmul"] += 1
        if self.record:
            self._log("AU", "modmul", width, modulus)
        return (a * b) % modulus

    def mulmod_z(self, a, b, width=16):
        """Multiply mod 2^width + 1 with 0 standing for 2^width (IDEA's group)."""
        self.counts["AU", "modmul"] += 1
        if self.record:
            self._log("AU", "modmul", width, "zero-as-2^w")
        n = 1 << width
        p = ((a or n) * (b or n)) % (n + 1)
        return p & (n - 1)

    def rot128(self, x, n):
        """128-bit rotate composed from 64-bit shifter ops."""
        m64 = (1 << 64) - 1
        n %= 128
        hi, lo = x >> 64, x & m64
        if n >= 64:
            hi, lo = lo, hi
            n -= 64
        if n == 0:
            return (hi << 64) | lo
        nhi = self.or_(self.shl(hi, n, 64), self.shr(lo, 64 - n, 64), 64)
        nlo = self.or_(self.shl(lo, n, 64), self.shr(hi, 64 - n, 64), 64)
        return (nhi << 64) | nlo

    def gfmul(self, x, c, width=32):
        """Multiply every byte of ``x`` by ``c`` in GF(2^8)."""
        self.counts["AU", "gfmul"] += 1
        if self.record:
            self._log("AU", "gfmul", width, c)
        t = _gf_table(c)
        out = 0
        for i in range(width // 8):
            out |= t[(x >> (8 * i)) & 0xFF] << (8 * i)
        return out
