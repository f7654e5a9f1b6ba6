"""Key management engine: RO-PUF root key and HKDF-derived keys."""

from __future__ import annotations

from .kdf import KdfContext, derive_key, hkdf_expand, hkdf_extract, hmac
from .puf import RepetitionHelper, RoPufInstance, default_challenge, hamming_fraction, puf_response


class KeyManagementEngine:
    """Holds a chip's PUF; only derived keys ever leave it."""

    def __init__(self, chip_seed: int, noise_sigma: float = 0.0, n_oscillators: int = 512):
        self.__puf = RoPufInstance(chip_seed, n_oscillators, noise_sigma)
        self.__challenge = default_challenge(256, n_oscillators)

    def derive_key(self, ctx: KdfContext) -> bytes:
        return derive_key(puf_response(self.__puf, self.__challenge), ctx)

    def symmetric_key(self, cipher_id: str, key_bytes: int, salt: bytes = b"") -> bytes:
        return self.derive_key(KdfContext(salt, b"bce:" + cipher_id.encode(), key_bytes))

    def scheme_seed(self, scheme: str, salt: bytes = b"") -> int:
        """Seed for generating a scheme's key pair inside the ACE."""
        return int.from_bytes(self.derive_key(KdfContext(salt, b"ace:" + scheme.encode(), 8)), "big")


__all__ = ["KdfContext", "derive_key", "hkdf_expand", "hkdf_extract", "hmac", "RepetitionHelper",
           "RoPufInstance", "default_challenge", "hamming_fraction", "puf_response",
           "KeyManagementEngine"]
