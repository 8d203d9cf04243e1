"""Descrambling a soft word when the scrambler seed is unknown.

Four receivers, cheapest to best:

  hd        hard-decide everything, preload the register with the last 7
            pilot decisions, XOR the payload decisions.  Bits in, bits out.
  naive_sd  same register estimate, but applied to the payload as LLR sign
            flips, so soft information survives for later combining.
  hrsx      MAP estimate of the seed from all L pilot LLRs, then sign flips.
  srsx      full posterior over the 127 seeds; each payload LLR is mixed
            with the induced scrambling-bit probability, so seed uncertainty
            softens the output instead of committing to one register guess.

The posterior treats each pilot LLR as an independent observation of a known
linear function of the seed; everything is kept in log domain and normalized
with log-sum-exp.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logsumexp

from .scrambler import LFSR_LEN, PERIOD, all_seeds, lfsr_run, mask_matrix, seed_from_int
from .softbits import LLR_MAX, SoftWord, flip_by_mask, hard_decide

N_SEEDS = PERIOD  # 127 nonzero register states


@dataclass(frozen=True)
class SeedPosterior:
    """Normalized log-probabilities over the 127 nonzero seeds.

    Entry i corresponds to seed integer i+1 (r0 = LSB).
    """

    log_weights: np.ndarray

    def __post_init__(self):
        lw = np.asarray(self.log_weights, dtype=np.float64)
        if lw.shape != (N_SEEDS,):
            raise ValueError(f"log_weights must have shape ({N_SEEDS},)")
        object.__setattr__(self, "log_weights", lw)

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    def map_index(self) -> int:
        """Index of the MAP seed; ties break toward the smallest seed integer."""
        return int(np.argmax(self.log_weights))

    @classmethod
    def delta(cls, seed_int: int) -> "SeedPosterior":
        lw = np.full(N_SEEDS, -np.inf)
        lw[seed_int - 1] = 0.0
        return cls(lw)

    @classmethod
    def uniform(cls) -> "SeedPosterior":
        return cls(np.full(N_SEEDS, -np.log(N_SEEDS)))


def seed_posterior(pilot_llrs: np.ndarray, A: np.ndarray) -> SeedPosterior:
    """Posterior over seeds given pilot LLRs and the pilot mask matrix A.

    For candidate seed r the pilot block would have been A @ r mod 2; each
    position contributes log P(observed | that bit) with
    P(bit=0 | llr) = expit(llr).  Sums are normalized so logsumexp == 0.
    """
    y = np.asarray(pilot_llrs, dtype=np.float64)
    A = np.asarray(A, dtype=np.uint8)
    if y.ndim != 1 or A.shape != (y.size, LFSR_LEN):
        raise ValueError(f"mask matrix shape {A.shape} does not match {y.size} pilots")
    # (L, 127) candidate pilot bits for every seed at once
    cand = (A @ all_seeds().T) % 2
    logp0 = -np.logaddexp(0.0, -y)  # log expit(y)
    logp1 = -np.logaddexp(0.0, y)
    lw = np.where(cand == 0, logp0[:, None], logp1[:, None]).sum(axis=0)
    return SeedPosterior(lw - logsumexp(lw))


@functools.lru_cache(maxsize=1)
def _z_table() -> np.ndarray:
    """(127, 127) table: row i = one full output period of seed i+1."""
    t = np.vstack([lfsr_run(seed_from_int(v), PERIOD) for v in range(1, 128)])
    t.flags.writeable = False
    return t


def z_sequence_table() -> np.ndarray:
    return _z_table()


def mask_zero_prob(posterior: SeedPosterior, L: int, M: int) -> np.ndarray:
    """P(scrambling bit = 0) at each of the M payload positions.

    Payload position m uses register output L+m, reduced mod the sequence
    period; the probability is the posterior mass of the seeds whose output
    is 0 there.
    """
    w = posterior.weights
    pz0_by_phase = w @ (1 - _z_table())  # (127,)
    phases = (L + np.arange(M)) % PERIOD
    return np.clip(pz0_by_phase[phases], 0.0, 1.0)


def hd(word_hard: np.ndarray) -> np.ndarray:
    """Hard descrambling: bits[0:7] preload the register, the rest is XORed.

    The caller passes the last 7 pilot decisions followed by the payload
    decisions.  An all-zero preload is legal (it just passes bits through);
    it is an estimate, not a transmit seed.
    """
    b = np.asarray(word_hard, dtype=np.uint8)
    if b.ndim != 1 or b.size < LFSR_LEN:
        raise ValueError("need a 7-bit register preload plus payload")
    state, payload = b[:LFSR_LEN], b[LFSR_LEN:]
    return lfsr_run(state, payload.size) ^ payload


def naive_sd(word: SoftWord) -> np.ndarray:
    """Soft descrambling from hard pilot decisions alone.

    Register preload comes from the last 7 pilot LLR signs; payload LLRs are
    sign-flipped by the implied mask.  Magnitudes are untouched, so one wrong
    pilot decision silently inverts about half the payload.
    """
    state = hard_decide(word.pilots[-LFSR_LEN:])
    z = lfsr_run(state, word.M)
    return flip_by_mask(word.payload, z)


def hrsx(word: SoftWord, A: np.ndarray | None = None,
         posterior: SeedPosterior | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Hard re-scrambling: MAP seed from the pilot posterior, then sign flips.

    Returns (descrambled payload LLRs, estimated seed bits).
    """
    if posterior is None:
        posterior = seed_posterior(word.pilots, mask_matrix(word.L) if A is None else A)
    seed_int = posterior.map_index() + 1
    z = _z_table()[seed_int - 1][(word.L + np.arange(word.M)) % PERIOD]
    return flip_by_mask(word.payload, z), seed_from_int(seed_int)


def srsx(word: SoftWord, A: np.ndarray | None = None,
         posterior: SeedPosterior | None = None) -> np.ndarray:
    """Soft re-scrambling: mix each payload LLR with the mask-bit posterior.

    With q = P(z_m=0), P(x_m=0) = q P(y_m=0) + (1-q) P(y_m=1).  A certain
    mask (q in {0,1}) reduces to an exact sign flip of the input LLR; an
    uninformative mask drives the output toward 0.  Output is clamped.
    """
    if posterior is None:
        posterior = seed_posterior(word.pilots, mask_matrix(word.L) if A is None else A)
    q = mask_zero_prob(posterior, word.L, word.M)
    y = word.payload
    py0 = expit(y)
    py1 = expit(-y)
    px0 = py0 * q + py1 * (1.0 - q)
    px1 = py1 * q + py0 * (1.0 - q)
    with np.errstate(divide="ignore"):
        mixed = np.log(px0) - np.log(px1)
    # exact at the degenerate ends so a certain mask is a pure sign flip
    out = np.where(q == 1.0, y, np.where(q == 0.0, -y, mixed))
    return np.clip(out, -LLR_MAX, LLR_MAX)
