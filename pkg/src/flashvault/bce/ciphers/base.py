from __future__ import annotations

from ...errors import KeyLengthError
from ..lane import Lane


class BlockCipher:
    """A cipher expressed as BCE unit operations.

    Subclasses run their key schedule on ``lane`` in ``_setup`` and implement
    ``_encrypt``/``_decrypt`` over integers using only lane operations;
    byte packing and field slicing between operations is plain wiring.
    """

    name = ""
    block_bytes = 16
    key_bytes: tuple[int, ...] = ()

    def __init__(self, key: bytes, lane: Lane | None = None):
        key = bytes(key)
        if len(key) not in self.key_bytes:
            legal = ", ".join(str(8 * k) for k in self.key_bytes)
            raise KeyLengthError(f"{self.name}: {8 * len(key)}-bit key not in {{{legal}}}")
        self.key = key
        self.lane = lane or Lane()
        self._setup(key)

    @property
    def rounds(self) -> float:
        raise NotImplementedError

    def _setup(self, key: bytes):
        raise NotImplementedError

    def _check(self, block: bytes):
        if len(block) != self.block_bytes:
            raise ValueError(f"{self.name} block is {self.block_bytes} bytes, got {len(block)}")

    def encrypt_block(self, block: bytes, lane: Lane | None = None) -> bytes:
        self._check(block)
        return self._encrypt(lane or self.lane, bytes(block))

    def decrypt_block(self, block: bytes, lane: Lane | None = None) -> bytes:
        self._check(block)
        return self._decrypt(lane or self.lane, bytes(block))
