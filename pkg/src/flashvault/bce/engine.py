"""Block-cipher engine: cipher registry, microprograms, CTR over a lane array.

The functional path (what bytes come out) and the timing path (how many
cycles it took) are separate.  Bytes come from running the cipher on lane
operations.  Cycles come from the calibration file: ``rounds x
cycles_per_round + overhead`` per block, and ``ceil(blocks / lanes)``
batches per CTR job plus a one-time pipeline fill.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..calibration import Calibration
from ..errors import StateError, UnsupportedAlgorithmError
from .ciphers.aes import AES
from .ciphers.camellia import Camellia
from .ciphers.hight import HIGHT
from .ciphers.idea import IDEA
from .ciphers.serpent import Serpent
from .ciphers.sm4 import SM4
from .ciphers.tdes import TripleDES
from .lane import Instruction, Lane


@dataclass(frozen=True)
class CipherSpec:
    cipher_id: str
    rounds: tuple            # one entry per legal key length
    key_bits: tuple
    block_bits: int
    granularity_bits: int
    operations: frozenset    # primitive-operation labels

    def rounds_for(self, key_bits: int):
        return self.rounds[self.key_bits.index(key_bits)] if len(self.rounds) > 1 else self.rounds[0]


def _spec(cid, rounds, keys, block, gran, ops):
    return CipherSpec(cid, tuple(rounds), tuple(keys), block, gran, frozenset(ops.split(", ")))


CIPHER_SPECS = {
    "AES": _spec("AES", (10, 12, 14), (128, 192, 256), 128, 8, "XOR, S-Box, Shift, Multiplication"),
    "TDES": _spec("TDES", (48,), (112, 168), 64, 4, "XOR, S-Box, Permutation"),
    "IDEA": _spec("IDEA", (8.5,), (128,), 64, 16, "XOR, ModAdd, ModMult"),
    "SERPENT": _spec("SERPENT", (32,), (128, 192, 256), 128, 4, "XOR, S-Box, Shift, Permutation"),
    "HIGHT": _spec("HIGHT", (32,), (128,), 64, 8, "XOR, Shift, ModAdd, ModMult"),
    "SM4": _spec("SM4", (32,), (128,), 128, 8, "XOR, S-Box, Shift"),
    "CAMELLIA": _spec("CAMELLIA", (18, 24, 24), (128, 192, 256), 128, 8, "XOR, S-Box, Shift, AND, OR"),
}

CIPHERS = {
    "AES": AES, "TDES": TripleDES, "IDEA": IDEA, "SERPENT": Serpent,
    "HIGHT": HIGHT, "SM4": SM4, "CAMELLIA": Camellia,
}

_ALIASES = {"3DES": "TDES", "TRIPLEDES": "TDES", "DES3": "TDES"}


def canonical_id(cipher_id: str) -> str:
    cid = str(cipher_id).upper().replace("-", "")
    cid = _ALIASES.get(cid, cid)
    if cid not in CIPHERS:
        raise UnsupportedAlgorithmError(f"unsupported cipher {cipher_id!r}; known: {', '.join(CIPHERS)}")
    return cid


@dataclass(frozen=True)
class EngineGeometry:
    bce_lanes_per_engine: int = 16
    engines_per_die: int = 2
    clock_hz: int = 200_000_000

    @property
    def lanes(self) -> int:
        return self.bce_lanes_per_engine * self.engines_per_die

    def seconds(self, cycles) -> float:
        return cycles / self.clock_hz


@dataclass(frozen=True)
class Microprogram:
    cipher_id: str
    instructions: tuple          # block encryption, in issue order
    inverse_instructions: tuple  # block decryption
    key_schedule_program: tuple
    rounds: float
    cycles_per_round: int
    overhead: int

    @property
    def cycles_per_block(self) -> int:
        return math.ceil(self.rounds * self.cycles_per_round) + self.overhead

    def units(self) -> set:
        return {i.unit for i in self.instructions + self.inverse_instructions}

    def labels(self) -> set:
        """Primitive operations used by the block path (schedule excluded)."""
        return {i.label for i in self.instructions + self.inverse_instructions}


@dataclass
class BceState:
    spec: CipherSpec
    program: Microprogram
    cipher: object = None
    round_counter: int = 0
    blocks_done: int = 0
    registers: dict = field(default_factory=dict)

    @property
    def expanded_key(self):
        return self.cipher


def cycle_table(cipher_id, calibration: Calibration | None = None, rounds=None) -> int:
    """Per-block cycles for ``cipher_id`` from the calibration tables."""
    cid = canonical_id(cipher_id)
    cal = calibration or _default_cal()
    sec = f"cipher.{cid}"
    cpr = int(cal.get(sec, "cycles_per_round"))
    over = int(cal.get(sec, "overhead"))
    if rounds is None:
        rounds = CIPHER_SPECS[cid].rounds[0]
    return math.ceil(rounds * cpr) + over


_DEFAULT_CAL = None


def _default_cal():
    global _DEFAULT_CAL
    if _DEFAULT_CAL is None:
        _DEFAULT_CAL = Calibration.default()
    return _DEFAULT_CAL


def load_cipher(cipher_id, key: bytes, calibration: Calibration | None = None):
    """Build the microprogram and expanded-key state for one cipher/key."""
    cid = canonical_id(cipher_id)
    cal = calibration or _default_cal()
    lane = Lane(record=True)
    cipher = CIPHERS[cid](key, lane)
    sched = tuple(lane.trace)
    lane.reset_trace()
    probe = bytes(cipher.block_bytes)
    ct = cipher.encrypt_block(probe)
    enc = tuple(lane.trace)
    lane.reset_trace()
    cipher.decrypt_block(ct)
    dec = tuple(lane.trace)
    # the live cipher runs on a quiet lane from here on
    cipher.lane = Lane()
    cipher.lane.tables = lane.tables
    spec = CIPHER_SPECS[cid]
    prog = Microprogram(
        cid, enc, dec, sched,
        rounds=cipher.rounds,
        cycles_per_round=int(cal.get(f"cipher.{cid}", "cycles_per_round")),
        overhead=int(cal.get(f"cipher.{cid}", "overhead")),
    )
    return prog, BceState(spec, prog, cipher)


def _check_state(state):
    if state is None or state.cipher is None:
        raise StateError("BCE state not initialized; call load_cipher first")


def encrypt_block(state: BceState, plaintext: bytes):
    _check_state(state)
    ct = state.cipher.encrypt_block(plaintext)
    state.blocks_done += 1
    state.round_counter = state.program.rounds
    return ct, state.program.cycles_per_block


def decrypt_block(state: BceState, ciphertext: bytes):
    _check_state(state)
    pt = state.cipher.decrypt_block(ciphertext)
    state.blocks_done += 1
    state.round_counter = state.program.rounds
    return pt, state.program.cycles_per_block


def ctr_batches(n_bytes: int, block_bytes: int, lanes: int) -> int:
    blocks = -(-n_bytes // block_bytes)
    return -(-blocks // lanes)


def ctr_cycles(cipher_id, n_bytes: int, lanes: int, calibration: Calibration | None = None) -> int:
    """Timing-only CTR: ceil(blocks/lanes) x per-block cycles + pipeline fill."""
    cid = canonical_id(cipher_id)
    cal = calibration or _default_cal()
    block = CIPHER_SPECS[cid].block_bits // 8
    fill = int(cal.get("bce", "pipeline_fill"))
    return ctr_batches(n_bytes, block, lanes) * cycle_table(cid, cal) + fill


def counter_block(nonce: bytes, index: int, block_bytes: int) -> bytes:
    """Nonce followed by a 32-bit big-endian block counter."""
    if len(nonce) != block_bytes - 4:
        raise ValueError(f"nonce must be {block_bytes - 4} bytes for a {8 * block_bytes}-bit block")
    return bytes(nonce) + (index & 0xFFFFFFFF).to_bytes(4, "big")


def ctr_process(data: bytes, key, nonce: bytes, geometry: EngineGeometry | None = None,
                cipher_id="AES", lanes: int | None = None, calibration: Calibration | None = None):
    """CTR-mode transform (its own inverse).  Returns (output, cycles).

    ``key`` is raw key bytes or a ``BceState`` from :func:`load_cipher`.
    Block i is assigned to lane ``i % lanes``; the lane split only affects
    the cycle count.
    """
    if not data:
        raise ValueError("ctr_process needs at least one byte")
    geometry = geometry or EngineGeometry()
    if isinstance(key, BceState):
        state = key
    else:
        _, state = load_cipher(cipher_id, key, calibration)
    cipher = state.cipher
    bb = cipher.block_bytes
    lanes = lanes or geometry.lanes
    out = bytearray(len(data))
    for i in range(0, len(data), bb):
        ks = cipher.encrypt_block(counter_block(nonce, i // bb, bb))
        chunk = data[i:i + bb]
        out[i:i + len(chunk)] = bytes(a ^ b for a, b in zip(chunk, ks))
    cal = calibration or _default_cal()
    fill = int(cal.get("bce", "pipeline_fill"))
    cycles = ctr_batches(len(data), bb, lanes) * state.program.cycles_per_block + fill
    return bytes(out), cycles


def audit(cipher_id) -> tuple[set, set]:
    """(labels used by the block path, labels listed for the cipher)."""
    cid = canonical_id(cipher_id)
    spec = CIPHER_SPECS[cid]
    key = bytes(range(max(spec.key_bits) // 8)) if cid != "TDES" else bytes(range(24))
    prog, _ = load_cipher(cid, key)
    return prog.labels(), set(spec.operations)


__all__ = [
    "CipherSpec", "CIPHER_SPECS", "EngineGeometry", "Microprogram", "BceState", "Instruction",
    "load_cipher", "encrypt_block", "decrypt_block", "ctr_process", "ctr_cycles",
    "cycle_table", "audit", "canonical_id",
]
