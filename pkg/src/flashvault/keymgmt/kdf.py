"""HKDF (extract-then-expand) over the engine's own SHA-2."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ace.sha2 import _PARAMS, _variant, sha2
from ..errors import ConfigurationError


def hmac(key: bytes, msg: bytes, variant="SHA256") -> bytes:
    v = _variant(variant)
    block = _PARAMS[v][4]
    if len(key) > block:
        key = sha2(key, v)
    key = key.ljust(block, b"\x00")
    inner = sha2(bytes(k ^ 0x36 for k in key) + msg, v)
    return sha2(bytes(k ^ 0x5C for k in key) + inner, v)


def hkdf_extract(salt: bytes, ikm: bytes, variant="SHA256") -> bytes:
    v = _variant(variant)
    if not salt:
        salt = bytes(_PARAMS[v][6])
    return hmac(salt, ikm, v)


def hkdf_expand(prk: bytes, info: bytes, length: int, variant="SHA256") -> bytes:
    v = _variant(variant)
    hlen = _PARAMS[v][6]
    if length > 255 * hlen:
        raise ConfigurationError("HKDF output limited to 255 hash blocks")
    out, t = b"", b""
    i = 1
    while len(out) < length:
        t = hmac(prk, t + info + bytes([i]), v)
        out += t
        i += 1
    return out[:length]


@dataclass(frozen=True)
class KdfContext:
    salt: bytes = b""
    context: bytes = b""
    out_len: int = 32
    variant: str = "SHA256"

    def __post_init__(self):
        if self.out_len < 1:
            raise ConfigurationError("out_len must be at least 1")


def root_bytes(root) -> bytes:
    if isinstance(root, (bytes, bytearray)):
        return bytes(root)
    bits = np.asarray(root, dtype=np.uint8)
    return np.packbits(bits).tobytes()


def derive_key(root, ctx: KdfContext) -> bytes:
    ikm = root_bytes(root)
    if not ikm:
        raise ConfigurationError("root key material is empty")
    prk = hkdf_extract(ctx.salt, ikm, ctx.variant)
    return hkdf_expand(prk, ctx.context, ctx.out_len, ctx.variant)
