"""Combining descrambled soft copies from independent streams.

Conditioned on the payload bits, the streams' noise realizations are
independent, so the per-bit log-likelihood ratios simply add.  The sum is
clamped back to the shared LLR range; the final bit decision is the sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .softbits import LLR_MAX, hard_decide


@dataclass
class StreamSoftCopy:
    """Descrambled payload LLRs from one stream."""

    stream_id: int
    llrs: np.ndarray

    def __post_init__(self):
        self.llrs = np.asarray(self.llrs, dtype=np.float64)
        if self.llrs.ndim != 1:
            raise ValueError("llrs must be one-dimensional")


def ssic_combine(copies: list[StreamSoftCopy]) -> np.ndarray:
    """Elementwise LLR sum over all copies, clamped to +-LLR_MAX.

    Order-invariant.  Requires at least one copy, equal lengths, and
    distinct stream ids (the same observation must not be counted twice).
    """
    if not copies:
        raise ValueError("need at least one copy")
    n = copies[0].llrs.size
    ids = set()
    total = np.zeros(n, dtype=np.float64)
    for c in copies:
        if c.llrs.size != n:
            raise ValueError(f"length mismatch: {c.llrs.size} vs {n}")
        if c.stream_id in ids:
            raise ValueError(f"duplicate stream_id {c.stream_id}")
        ids.add(c.stream_id)
        total += c.llrs
    return np.clip(total, -LLR_MAX, LLR_MAX)


def decide(llrs: np.ndarray) -> np.ndarray:
    """Final hard decisions from combined LLRs; ties resolve to 0."""
    return hard_decide(llrs)
