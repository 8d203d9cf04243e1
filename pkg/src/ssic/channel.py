"""Substitute link: BPSK over AWGN with per-stream impairments.

Bits map 0 -> +1, 1 -> -1.  At linear SNR g the noise variance is
sigma^2 = 1/(2g) (unit symbol energy), the matched-filter LLR is
2y/sigma^2, and the raw hard-decision bit error rate is Q(sqrt(2g)).

Two impairments sit on top:

  detection loss   whole frame missed with a fixed probability (models a
                   preamble miss); nothing is observed.
  burst window     a contiguous window of geometric mean length where the
                   in-window SNR is reduced so that the reported LLR means
                   shrink by exactly burst_llr_atten.  The extra in-window
                   noise is drawn for real, so hard decisions inside the
                   window do get worse; a pure post-hoc rescale of the LLRs
                   would never corrupt a bit.

The frame-level CRC is idealized: it passes exactly when hard-decision
descrambling (register preloaded from the last 7 pilot decisions)
reproduces the transmitted payload.  It never false-accepts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .scrambler import LFSR_LEN, scramble, seed_from_int
from .softbits import SoftWord, hard_decide
from .descramble import hd


def snr_db_to_sigma2(snr_db: float) -> float:
    return 1.0 / (2.0 * 10.0 ** (snr_db / 10.0))


@dataclass
class ChannelParams:
    """One stream's channel configuration.

    burst_llr_atten is the factor multiplying the in-window LLR mean;
    1.0 disables the burst entirely and the channel is memoryless AWGN.
    """

    snr_db: float
    detection_loss_prob: float = 0.0
    burst_prob: float = 0.0
    burst_len_mean: float = 64.0
    burst_llr_atten: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.detection_loss_prob <= 1.0:
            raise ValueError(f"detection_loss_prob out of [0,1]: {self.detection_loss_prob}")
        if not 0.0 <= self.burst_prob <= 1.0:
            raise ValueError(f"burst_prob out of [0,1]: {self.burst_prob}")
        if not 0.0 < self.burst_llr_atten <= 1.0:
            raise ValueError(f"burst_llr_atten out of (0,1]: {self.burst_llr_atten}")
        if self.burst_len_mean < 1.0:
            raise ValueError(f"burst_len_mean must be >= 1: {self.burst_len_mean}")

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelParams":
        known = {f for f in cls.__dataclass_fields__}
        bad = set(d) - known
        if bad:
            raise ValueError(f"unknown channel keys: {sorted(bad)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path: str | Path) -> "ChannelParams":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class StreamObservation:
    """What one stream's receiver hands upward for a single frame."""

    stream_id: int
    detected: bool
    crc_pass: bool = False
    hard_bits: np.ndarray | None = None
    soft: SoftWord | None = None

    def __post_init__(self):
        if not self.detected:
            if self.crc_pass or self.hard_bits is not None or self.soft is not None:
                raise ValueError("undetected frames carry no data")
        elif self.crc_pass:
            if self.hard_bits is None:
                raise ValueError("crc_pass requires hard_bits")
        else:
            if self.soft is None:
                raise ValueError("detected frame without CRC needs soft values")


def bpsk_awgn_llrs(bits: np.ndarray, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """Raw (unclamped) LLRs for a bit sequence over the AWGN link."""
    b = np.asarray(bits, dtype=np.uint8)
    sigma2 = snr_db_to_sigma2(snr_db)
    y = (1.0 - 2.0 * b) + rng.normal(0.0, np.sqrt(sigma2), b.size)
    return 2.0 * y / sigma2


def fresh_seed(rng: np.random.Generator) -> np.ndarray:
    """Uniform random nonzero scrambler seed."""
    return seed_from_int(int(rng.integers(1, 128)))


def soft_copy(seed: np.ndarray, payload_bits: np.ndarray, L: int, snr_db: float,
              rng: np.random.Generator) -> SoftWord:
    """Scramble, transmit over plain AWGN, and split into pilot/payload LLRs.

    The lightweight path used by the Monte-Carlo sweeps: no detection loss,
    no bursts, no CRC short-circuit.
    """
    x = np.concatenate([np.zeros(L, dtype=np.uint8), np.asarray(payload_bits, dtype=np.uint8)])
    llrs = bpsk_awgn_llrs(scramble(seed, x), snr_db, rng)
    return SoftWord(pilots=llrs[:L], payload=llrs[L:])


def transmit(seed: np.ndarray, payload_bits: np.ndarray, L: int, params: ChannelParams,
             rng: np.random.Generator, stream_id: int = 0) -> StreamObservation:
    """Send one frame through the full impaired link.

    Pilot block is L zero bits; the scrambled word rides BPSK/AWGN, an
    optional burst window degrades part of it, and the receiver classifies
    the result: missed entirely, clean (idealized CRC pass, hard bits), or
    soft (full LLR word for later combining).
    """
    payload = np.asarray(payload_bits, dtype=np.uint8)
    if rng.random() < params.detection_loss_prob:
        return StreamObservation(stream_id=stream_id, detected=False)

    x = np.concatenate([np.zeros(L, dtype=np.uint8), payload])
    tx = scramble(seed, x)
    n = tx.size
    sigma2 = snr_db_to_sigma2(params.snr_db)
    sigma = np.full(n, np.sqrt(sigma2))
    atten = np.ones(n)
    if params.burst_prob > 0.0 and rng.random() < params.burst_prob:
        start = int(rng.integers(0, n))
        length = int(rng.geometric(1.0 / params.burst_len_mean))
        a = params.burst_llr_atten
        sigma[start:start + length] = np.sqrt(sigma2 / a)
        atten[start:start + length] = a
    y = (1.0 - 2.0 * tx) + rng.normal(0.0, 1.0, n) * sigma
    llrs = atten * 2.0 * y / sigma2  # per-position matched LLR = 2y/sigma_w^2

    hard = hard_decide(llrs)
    descrambled = hd(np.concatenate([hard[L - LFSR_LEN:L], hard[L:]]))
    if (descrambled == payload).all():
        return StreamObservation(stream_id=stream_id, detected=True, crc_pass=True,
                                 hard_bits=descrambled)
    return StreamObservation(stream_id=stream_id, detected=True, crc_pass=False,
                             soft=SoftWord(pilots=llrs[:L], payload=llrs[L:]))
