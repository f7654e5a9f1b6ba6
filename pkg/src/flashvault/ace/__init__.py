"""Asymmetric crypto engine: hash ALUs and big-number arithmetic, plus PQC cost schedules."""

from .ecdsa import CURVES, ecdsa_op, generate_keypair, get_curve
from .keccak import keccak_f1600, sha3_256, sha3_512, shake128, shake256
from .ntt import DILITHIUM, NttParams, ntt_transform
from .rsa import RsaKey, generate_key, rsa_op
from .schemes import PQC, SCHEMES, pqc_latency, scheme_id, signature_cycles
from .sha2 import HashJob, hash_chunks, sha2, sha2_digest

__all__ = [
    "CURVES", "ecdsa_op", "generate_keypair", "get_curve",
    "keccak_f1600", "sha3_256", "sha3_512", "shake128", "shake256",
    "DILITHIUM", "NttParams", "ntt_transform",
    "RsaKey", "generate_key", "rsa_op",
    "PQC", "SCHEMES", "pqc_latency", "scheme_id", "signature_cycles",
    "HashJob", "hash_chunks", "sha2", "sha2_digest",
]
