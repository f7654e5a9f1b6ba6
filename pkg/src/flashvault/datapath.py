"""Bit-exact models of the reusable compute units.

The five block-cipher units (arithmetic, logic, permutation, shift, table)
and the limb arithmetic used by the asymmetric ALUs.  Everything here is a
pure function over immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from .errors import ConfigurationError, InvalidModulusError, InvalidPermutationError

WORD_WIDTHS = (4, 8, 16, 23, 32, 64)
LIMB_BITS = 64
LIMB_MASK = (1 << LIMB_BITS) - 1


def _mask(width: int) -> int:
    return (1 << width) - 1


@dataclass(frozen=True)
class Word:
    value: int
    width: int

    def __post_init__(self):
        if self.width not in WORD_WIDTHS:
            raise ValueError(f"unsupported word width {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value:#x} does not fit in {self.width} bits")

    def __int__(self):
        return self.value


# ---------------------------------------------------------------------------
# LimbInt


@dataclass(frozen=True)
class LimbInt:
    """Non-negative integer held as little-endian 64-bit limbs."""

    limbs: tuple[int, ...] = (0,)

    def __post_init__(self):
        limbs = tuple(self.limbs)
        if not limbs:
            limbs = (0,)
        if any(not 0 <= x <= LIMB_MASK for x in limbs):
            raise ValueError("limb out of range")
        while len(limbs) > 1 and limbs[-1] == 0:
            limbs = limbs[:-1]
        object.__setattr__(self, "limbs", limbs)

    @classmethod
    def from_int(cls, x: int) -> "LimbInt":
        if x < 0:
            raise ValueError("LimbInt is non-negative")
        limbs = []
        while x:
            limbs.append(x & LIMB_MASK)
            x >>= LIMB_BITS
        return cls(tuple(limbs) or (0,))

    def to_int(self) -> int:
        x = 0
        for limb in reversed(self.limbs):
            x = (x << LIMB_BITS) | limb
        return x

    def to_bytes(self) -> bytes:
        return b"".join(limb.to_bytes(8, "little") for limb in self.limbs)

    @classmethod
    def from_bytes(cls, data: bytes) -> "LimbInt":
        if len(data) % 8:
            data = data + bytes(8 - len(data) % 8)
        return cls(tuple(int.from_bytes(data[i:i + 8], "little") for i in range(0, len(data), 8)))

    @property
    def bit_length(self) -> int:
        return self.to_int().bit_length()

    def __len__(self):
        return len(self.limbs)

    def __int__(self):
        return self.to_int()


# ---------------------------------------------------------------------------
# Permutation unit: Benes network


@dataclass(frozen=True)
class BenesConfig:
    """Switch settings for a width-N Benes network.

    ``control_bits`` is laid out recursively: the N/2 input-layer switches,
    then the upper subnetwork, then the lower subnetwork, then the N/2
    output-layer switches.  A width-64 config is therefore two 32-bit
    networks joined by one extra input and output layer, which is how the
    PU combines its pair of 32-bit networks.

    ``target_perm[i]`` is the input bit that lands on output bit i.
    """

    width: int
    control_bits: tuple[int, ...]
    target_perm: tuple[int, ...]

    def __post_init__(self):
        if self.width < 2 or self.width & (self.width - 1):
            raise ConfigurationError(f"Benes width must be a power of two, got {self.width}")
        if len(self.control_bits) != benes_switch_count(self.width):
            raise ConfigurationError("wrong number of control bits for width")

    def halves(self) -> tuple["BenesConfig", "BenesConfig"]:
        """Split a combined config into its upper and lower subnetwork configs."""
        n = self.width
        half = n // 2
        c = benes_switch_count(half)
        upper_bits = self.control_bits[half:half + c]
        lower_bits = self.control_bits[half + c:half + 2 * c]
        return (
            BenesConfig(half, upper_bits, _run_network(half, upper_bits, tuple(range(half)))),
            BenesConfig(half, lower_bits, _run_network(half, lower_bits, tuple(range(half)))),
        )


def benes_switch_count(width: int) -> int:
    if width == 2:
        return 1
    return width + 2 * benes_switch_count(width // 2)


def _run_network(width: int, bits: Sequence[int], data: Sequence) -> tuple:
    """Push ``data`` (one item per input line) through the switches."""
    if width == 2:
        return (data[1], data[0]) if bits[0] else (data[0], data[1])
    half = width // 2
    c = benes_switch_count(half)
    in_bits = bits[:half]
    out_bits = bits[half + 2 * c:]
    upper = [None] * half
    lower = [None] * half
    for j in range(half):
        a, b = data[2 * j], data[2 * j + 1]
        if in_bits[j]:
            a, b = b, a
        upper[j], lower[j] = a, b
    upper = _run_network(half, bits[half:half + c], upper)
    lower = _run_network(half, bits[half + c:half + 2 * c], lower)
    out = [None] * width
    for j in range(half):
        u, l = upper[j], lower[j]
        if out_bits[j]:
            u, l = l, u
        out[2 * j], out[2 * j + 1] = u, l
    return tuple(out)


def _route(perm: Sequence[int]) -> list[int]:
    n = len(perm)
    if n == 2:
        return [0 if perm[0] == 0 else 1]
    half = n // 2
    inv = [0] * n
    for o, i in enumerate(perm):
        inv[i] = o
    # subnet[o]: 0 = output o is fed through the upper subnetwork
    subnet = [-1] * n
    for start in range(0, n, 2):
        if subnet[start] != -1:
            continue
        o = start
        while subnet[o] == -1:
            subnet[o] = 0
            subnet[o ^ 1] = 1
            # the input feeding o^1 travels lower, so its switch partner travels upper
            partner_in = perm[o ^ 1] ^ 1
            o = inv[partner_in]
    in_bits = [subnet[inv[2 * j]] for j in range(half)]
    out_bits = [subnet[2 * j] for j in range(half)]
    upper_perm = [0] * half
    lower_perm = [0] * half
    for j in range(half):
        for o in (2 * j, 2 * j + 1):
            if subnet[o] == 0:
                upper_perm[j] = perm[o] // 2
            else:
                lower_perm[j] = perm[o] // 2
    return in_bits + _route(upper_perm) + _route(lower_perm) + out_bits


def route_benes(perm: Sequence[int]) -> BenesConfig:
    """Compute switch settings realizing ``perm`` with the looping algorithm."""
    perm = tuple(int(p) for p in perm)
    n = len(perm)
    if n < 2 or n & (n - 1):
        raise InvalidPermutationError(f"permutation length {n} is not a power of two")
    if sorted(perm) != list(range(n)):
        raise InvalidPermutationError("not a bijection on {0..n-1}")
    bits = tuple(_route(perm))
    return BenesConfig(n, bits, perm)


@lru_cache(maxsize=1024)
def _compile_luts(width: int, bits: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    # one 256-entry table per input byte; the network is linear over GF(2)
    src = _run_network(width, bits, tuple(range(width)))
    dest_of = [0] * width
    for out_pos, in_pos in enumerate(src):
        dest_of[in_pos] = out_pos
    luts = []
    for byte in range((width + 7) // 8):
        table = []
        for v in range(256):
            acc = 0
            for b in range(8):
                pos = byte * 8 + b
                if v >> b & 1 and pos < width:
                    acc |= 1 << dest_of[pos]
            table.append(acc)
        luts.append(tuple(table))
    return tuple(luts)


def permute_int(x: int, cfg: BenesConfig) -> int:
    """Integer-level permutation through the configured switches."""
    acc = 0
    for byte, table in enumerate(_compile_luts(cfg.width, cfg.control_bits)):
        acc |= table[(x >> (8 * byte)) & 0xFF]
    return acc


def benes_permute(x: Word, cfg: BenesConfig) -> Word:
    if x.width != cfg.width:
        raise ConfigurationError(f"input width {x.width} != network width {cfg.width}")
    return Word(permute_int(x.value, cfg), x.width)


# ---------------------------------------------------------------------------
# Shift unit

SHIFT_MODES = ("logical_left", "logical_right", "arith_right", "rotate_left", "rotate_right")


def shift_int(x: int, amount: int, mode: str, width: int) -> int:
    m = _mask(width)
    if mode == "logical_left":
        return (x << amount) & m
    if mode == "logical_right":
        return x >> amount
    if mode == "arith_right":
        if x >> (width - 1) & 1:
            return ((x >> amount) | (m ^ (m >> amount))) & m
        return x >> amount
    if mode == "rotate_left":
        amount %= width
        return ((x << amount) | (x >> (width - amount))) & m
    if mode == "rotate_right":
        amount %= width
        return ((x >> amount) | (x << (width - amount))) & m
    raise ConfigurationError(f"unknown shift mode {mode!r}")


def barrel_shift(x: Word, amount: int, mode: str) -> Word:
    if not 0 <= amount < x.width:
        raise ValueError(f"shift amount {amount} out of range for width {x.width}")
    return Word(shift_int(x.value, amount, mode, x.width), x.width)


# ---------------------------------------------------------------------------
# Table unit


@dataclass(frozen=True)
class SBoxTable:
    entries: tuple[int, ...] = field(default_factory=lambda: tuple(range(256)))

    def __post_init__(self):
        entries = tuple(self.entries)
        if len(entries) > 256:
            raise ValueError("S-box holds at most 256 entries")
        # narrower tables are zero-padded up to 256 entries
        entries = entries + (0,) * (256 - len(entries))
        if any(not 0 <= e <= 0xFF for e in entries):
            raise ValueError("S-box entries are bytes")
        object.__setattr__(self, "entries", entries)

    def is_bijective(self) -> bool:
        return len(set(self.entries)) == 256

    def __getitem__(self, i):
        return self.entries[i]

    @classmethod
    def from_hex(cls, text: str) -> "SBoxTable":
        tokens = text.split()
        if len(tokens) != 256:
            raise ValueError(f"expected 256 hex bytes, got {len(tokens)}")
        return cls(tuple(int(t, 16) for t in tokens))

    @classmethod
    def load(cls, path) -> "SBoxTable":
        return cls.from_hex(Path(path).read_text())

    def to_hex(self) -> str:
        rows = [" ".join(f"{e:02x}" for e in self.entries[r:r + 16]) for r in range(0, 256, 16)]
        return "\n".join(rows) + "\n"


def sbox_lookup(x: Word, tables: Sequence[SBoxTable]) -> Word:
    if not 1 <= len(tables) <= 4:
        raise ConfigurationError("the table unit has 1 to 4 S-box tables")
    if x.width > 8 * len(tables):
        raise ConfigurationError(f"{x.width}-bit input needs more than {len(tables)} tables")
    out = 0
    for i in range((x.width + 7) // 8):
        out |= tables[i][(x.value >> (8 * i)) & 0xFF] << (8 * i)
    return Word(out & _mask(x.width), x.width)


# ---------------------------------------------------------------------------
# Logic unit

LOGIC_OPS = ("xor", "and", "or", "not", "nand", "nor")


def logic_int(a: int, b: int, op: str, width: int) -> int:
    m = _mask(width)
    if op == "xor":
        return a ^ b
    if op == "and":
        return a & b
    if op == "or":
        return a | b
    if op == "not":
        return ~a & m
    if op == "nand":
        return ~(a & b) & m
    if op == "nor":
        return ~(a | b) & m
    raise ConfigurationError(f"unknown logic op {op!r}")


def logic_op(a: Word, b: Word | None, op: str) -> Word:
    if op != "not" and (b is None or b.width != a.width):
        raise ConfigurationError("operand widths differ")
    return Word(logic_int(a.value, b.value if b is not None else 0, op, a.width), a.width)


# ---------------------------------------------------------------------------
# Arithmetic unit: Barrett modular reduction over 64-bit limbs


class ModContext:
    """Modulus plus its Barrett constant.

    ``k`` is the limb-aligned bit length of the modulus, fixed at creation;
    ``mu = floor(2**(2k) / m)``.
    """

    def __init__(self, modulus: LimbInt | int):
        m = int(modulus)
        if m <= 1:
            raise InvalidModulusError(f"modulus must exceed 1, got {m}")
        self.m = m
        self.n_limbs = -(-m.bit_length() // LIMB_BITS)
        self.k = self.n_limbs * LIMB_BITS
        self.mu = (1 << (2 * self.k)) // m
        self.reductions = 0

    @property
    def modulus(self) -> LimbInt:
        return LimbInt.from_int(self.m)

    @property
    def barrett_mu(self) -> LimbInt:
        return LimbInt.from_int(self.mu)

    def reduce(self, x: int) -> int:
        """Barrett reduction for 0 <= x < 2**(2k)."""
        q = ((x >> (self.k - LIMB_BITS)) * self.mu) >> (self.k + LIMB_BITS)
        r = x - q * self.m
        while r >= self.m:
            r -= self.m
        return r

    def mul(self, a: int, b: int) -> int:
        return self.reduce(a * b)

    def add(self, a: int, b: int) -> int:
        s = a + b
        return s - self.m if s >= self.m else s

    def __repr__(self):
        return f"ModContext(bits={self.m.bit_length()}, k={self.k})"


def mod_arith(a: LimbInt, b: LimbInt, op: str, ctx: ModContext | None = None) -> LimbInt:
    x, y = a.to_int(), b.to_int()
    if op not in ("add", "mul"):
        raise ConfigurationError(f"unknown arithmetic op {op!r}")
    if ctx is None:
        return LimbInt.from_int(x + y if op == "add" else x * y)
    if x >= ctx.m or y >= ctx.m:
        raise ValueError("operands must be reduced below the modulus")
    return LimbInt.from_int(ctx.add(x, y) if op == "add" else ctx.mul(x, y))
