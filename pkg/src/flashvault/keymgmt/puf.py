"""Ring-oscillator PUF model.

Each chip gets oscillator frequencies ~ Normal(f0, sigma_proc) from its
seed.  A response bit compares two oscillators.  Reading noise, when
enabled, perturbs every frequency per evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError

F0_HZ = 200e6
SIGMA_PROC_HZ = 2e6


@dataclass
class RoPufInstance:
    chip_seed: int
    n_oscillators: int = 512
    noise_sigma: float = 0.0
    f0: float = F0_HZ
    sigma_proc: float = SIGMA_PROC_HZ
    oscillator_freqs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_oscillators < 2:
            raise ConfigurationError("need at least two oscillators")
        rng = np.random.default_rng([0x5EED, self.chip_seed])
        self.oscillator_freqs = rng.normal(self.f0, self.sigma_proc, self.n_oscillators)
        self._evals = 0

    def read_freqs(self, eval_seed=None) -> np.ndarray:
        if self.noise_sigma == 0:
            return self.oscillator_freqs
        if eval_seed is None:
            eval_seed = self._evals
            self._evals += 1
        rng = np.random.default_rng([0xA015E, self.chip_seed, eval_seed])
        return self.oscillator_freqs + rng.normal(0.0, self.noise_sigma, self.n_oscillators)


def default_challenge(n_bits: int = 256, n_oscillators: int = 512):
    """Disjoint neighbour pairs (0,1), (2,3), ... so bits are independent."""
    if 2 * n_bits > n_oscillators:
        raise ConfigurationError(f"{n_bits} disjoint pairs need {2 * n_bits} oscillators")
    return [(2 * i, 2 * i + 1) for i in range(n_bits)]


def puf_response(puf: RoPufInstance, challenge=None, eval_seed=None) -> np.ndarray:
    """Bit i = 1 when oscillator a_i runs faster than b_i."""
    if challenge is None:
        challenge = default_challenge(256, puf.n_oscillators)
    pairs = np.asarray(challenge, dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= puf.n_oscillators):
        raise IndexError(f"challenge index outside 0..{puf.n_oscillators - 1}")
    if np.any(pairs[:, 0] == pairs[:, 1]):
        raise ConfigurationError("a challenge pair compares an oscillator with itself")
    f = puf.read_freqs(eval_seed)
    return (f[pairs[:, 0]] > f[pairs[:, 1]]).astype(np.uint8)


def hamming_fraction(a, b) -> float:
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape != b.shape:
        raise ValueError("responses differ in length")
    return float(np.count_nonzero(a != b)) / a.size


class RepetitionHelper:
    """Code-offset helper with an r-fold repetition code (for noisy PUFs).

    ``enroll`` hides ``key_bits`` under the response; ``reproduce``
    recovers them from a fresh noisy response by majority vote.
    """

    def __init__(self, r: int = 5):
        if r < 1 or r % 2 == 0:
            raise ConfigurationError("repetition factor must be odd and positive")
        self.r = r

    def enroll(self, response, key_bits) -> np.ndarray:
        code = np.repeat(np.asarray(key_bits, dtype=np.uint8), self.r)
        resp = np.asarray(response, dtype=np.uint8)
        if resp.size != code.size:
            raise ValueError(f"need {code.size} response bits, got {resp.size}")
        return resp ^ code

    def reproduce(self, response, helper) -> np.ndarray:
        noisy = (np.asarray(response, dtype=np.uint8) ^ np.asarray(helper, dtype=np.uint8))
        return (noisy.reshape(-1, self.r).sum(axis=1) > self.r // 2).astype(np.uint8)
