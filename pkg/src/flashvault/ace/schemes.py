"""Signature-scheme table and cycle models for the ACE.

RSA and ECDSA cycles come from running the functional code (step counts
times the ALU modmul cost).  The post-quantum schemes are modeled as a
schedule: a count of each primitive times its unit cost, both read from
the calibration file, plus the cost of hashing the message.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ..calibration import Calibration
from ..errors import UnsupportedAlgorithmError
from . import ecdsa, rsa
from .sha2 import block_cycles, n_blocks


@dataclass(frozen=True)
class SchemeSpec:
    scheme_id: str
    key_bits: int
    key_options: tuple
    digest_bits: int
    granularity_bits: int
    label: str

    @property
    def digest_variant(self) -> str:
        return "SHA256" if self.digest_bits == 256 else "SHA512"


SCHEMES = {
    "RSA": SchemeSpec("RSA", 3072, (1024, 2048, 3072, 4096), 256, 1024, "RSA 3072"),
    "ECDSA": SchemeSpec("ECDSA", 384, (160, 224, 256, 384, 521), 512, 256, "ECDSA 384"),
    "DILITHIUM": SchemeSpec("DILITHIUM", 3072, (2048, 3072), 512, 23, "Dilithium IV"),
    "FALCON": SchemeSpec("FALCON", 1280, (896, 1280), 512, 64, "Falcon 1024"),
    "SPHINCSPLUS": SchemeSpec("SPHINCSPLUS", 256, (256, 384, 512), 256, 32, "SPHINCS+"),
}
PQC = ("DILITHIUM", "FALCON", "SPHINCSPLUS")
PRIMITIVES = ("keccak", "ntt", "fft", "modmul", "compare")


def scheme_id(name) -> str:
    key = str(name).upper().replace("-", "").replace("_", "").replace("+", "PLUS").replace(" ", "")
    if key == "SPHINCS":
        key = "SPHINCSPLUS"
    if key not in SCHEMES:
        raise UnsupportedAlgorithmError(f"unknown signature scheme {name!r}")
    return key


@dataclass(frozen=True)
class PqcCycleSchedule:
    scheme_id: str
    op: str
    counts: dict
    unit_costs: dict

    @property
    def core_cycles(self) -> int:
        return sum(self.counts.get(p, 0) * self.unit_costs[p] for p in PRIMITIVES)


def unit_costs(calibration: Calibration | None = None) -> dict:
    cal = calibration or Calibration.default()
    costs = {p: int(cal.get("pqc_unit", p)) for p in PRIMITIVES if p != "keccak"}
    costs["keccak"] = int(cal.get("hash", "keccak_permutation"))
    return costs


def schedule(scheme, op: str, calibration: Calibration | None = None) -> PqcCycleSchedule:
    sid = scheme_id(scheme)
    if sid not in PQC:
        raise UnsupportedAlgorithmError(f"{sid} has no post-quantum schedule")
    if op not in ("sign", "verify"):
        raise ValueError(f"op must be sign or verify, got {op!r}")
    cal = calibration or Calibration.default()
    counts = {p: int(v) for p, v in cal.section(f"pqc.{sid}.{op}").items()}
    return PqcCycleSchedule(sid, op, counts, unit_costs(cal))


def message_hash_cycles(scheme, msg_bytes: int, calibration: Calibration | None = None) -> int:
    """Cycles to hash the message on one hash ALU.

    Post-quantum schemes absorb into SHAKE at 136 bytes per Keccak call;
    RSA/ECDSA hash with the scheme's SHA-2 variant.
    """
    sid = scheme_id(scheme)
    cal = calibration or Calibration.default()
    if msg_bytes <= 0:
        return 0
    if sid in PQC:
        return math.ceil(msg_bytes / 136) * int(cal.get("hash", "keccak_permutation"))
    v = SCHEMES[sid].digest_variant
    return n_blocks(msg_bytes, v) * block_cycles(v, cal)


def pqc_latency(scheme, op: str, msg_bytes: int, calibration: Calibration | None = None) -> int:
    """Cycles for a post-quantum sign/verify: message hash + schedule core."""
    sched = schedule(scheme, op, calibration)
    return message_hash_cycles(sched.scheme_id, msg_bytes, calibration) + sched.core_cycles


@lru_cache(maxsize=64)
def _classic_core(sid, op, key_bits, cal_text):
    cal = Calibration.from_text(cal_text)
    if sid == "RSA":
        if op == "sign":
            return rsa.sign_cycles(key_bits, cal)
        return rsa.verify_cycles(key_bits, calibration=cal)
    curve = {256: "P256", 384: "P384"}.get(key_bits)
    if curve is None:
        raise UnsupportedAlgorithmError(f"ECDSA-{key_bits} has no curve here; use 256 or 384")
    return ecdsa.op_cycles(curve, op, cal)


def core_cycles(scheme, op: str, calibration: Calibration | None = None, key_bits=None) -> int:
    sid = scheme_id(scheme)
    cal = calibration or Calibration.default()
    if sid in PQC:
        return schedule(sid, op, cal).core_cycles
    return _classic_core(sid, op, key_bits or SCHEMES[sid].key_bits, cal.to_text())


def signature_cycles(scheme, op: str, msg_bytes: int, calibration: Calibration | None = None) -> int:
    """Message hash plus sign/verify core for any of the five schemes."""
    cal = calibration or Calibration.default()
    return message_hash_cycles(scheme, msg_bytes, cal) + core_cycles(scheme, op, cal)
