"""NAND read channel reduced to independent bit flips."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError


@dataclass(frozen=True)
class ChannelModel:
    raw_ber: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.raw_ber < 0.5:
            raise ConfigurationError(f"raw_ber must be in [0, 0.5), got {self.raw_ber}")

    def rng(self, frame: int = 0):
        return np.random.default_rng([self.seed, frame])


def inject_errors(codeword, channel: ChannelModel, frame: int = 0) -> np.ndarray:
    """Flip each bit independently with probability ``raw_ber``.

    The flip pattern depends only on (seed, frame, length).
    """
    bits = np.asarray(codeword, dtype=np.uint8)
    if channel.raw_ber == 0.0:
        return bits.copy()
    flips = channel.rng(frame).random(bits.size) < channel.raw_ber
    return bits ^ flips.astype(np.uint8)
