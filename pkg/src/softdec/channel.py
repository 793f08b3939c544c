"""BPSK over AWGN: modulation, noise sampling, and channel LLRs.

Noise variance follows the message-bit-energy convention
sigma^2 = 1 / (2 * R * 10^(EbN0_dB/10)) with unit symbol energy.
Trial t draws from the sub-seeded stream (seed, t), so runs are
reproducible and trials can be sharded across workers freely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ChannelError(ValueError):
    pass


@dataclass(frozen=True)
class ChannelParams:
    ebn0_db: float
    rate: float
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.rate <= 1:
            raise ChannelError(f"rate {self.rate} out of (0, 1]")

    @property
    def sigma_sq(self) -> float:
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))

    @classmethod
    def from_esn0(cls, esn0_db: float, seed: int = 0) -> "ChannelParams":
        """Operating point given per-symbol SNR (rate folded in: R=1)."""
        return cls(ebn0_db=esn0_db, rate=1.0, seed=seed)

    def rng(self, trial: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, trial])


def modulate(codeword) -> np.ndarray:
    """bit c -> symbol (-1)^c."""
    c = np.asarray(codeword, dtype=np.int8)
    return 1.0 - 2.0 * c


def transmit(codeword, params: ChannelParams, trial: int = 0,
             rng: np.random.Generator | None = None) -> np.ndarray:
    """Received samples r_i = (-1)^{c_i} + N(0, sigma^2), i.i.d. per position."""
    s = modulate(codeword)
    if rng is None:
        rng = params.rng(trial)
    return s + rng.normal(0.0, np.sqrt(params.sigma_sq), size=s.size)


def channel_llr(received, sigma_sq: float) -> np.ndarray:
    """Per-sample LLR 2 r / sigma^2 (positive favours bit 0)."""
    if sigma_sq <= 0:
        raise ChannelError(f"sigma_sq must be positive, got {sigma_sq}")
    return 2.0 * np.asarray(received, dtype=np.float64) / sigma_sq
