"""7-bit self-synchronizing scrambler (x^7 + x^4 + 1) and its linear pilot structure.

The scrambler register is a length-7 vector (r0..r6).  Each step outputs
z = r0 XOR r3, shifts the register one place toward index 0, and feeds z
back into r6.  Seeded with any nonzero state it walks the full 127-state
cycle, so the output is an m-sequence of period 127.

Because the register is linear, every scrambling bit is a fixed GF(2)
combination of the seed bits.  mask_matrix(L) gives those combinations for
an L-bit all-zero pilot prefix: row i of the matrix, dotted with the seed
over GF(2), is pilot output i.
"""

from __future__ import annotations

import functools

import numpy as np

LFSR_LEN = 7
PERIOD = 127  # 2**7 - 1


def lfsr_step(state: np.ndarray) -> tuple[int, np.ndarray]:
    """One register update.  Returns (output bit, next state)."""
    s = np.asarray(state, dtype=np.uint8)
    if s.shape != (LFSR_LEN,):
        raise ValueError(f"state must have shape ({LFSR_LEN},), got {s.shape}")
    z = int(s[0] ^ s[3])
    nxt = np.empty(LFSR_LEN, dtype=np.uint8)
    nxt[:-1] = s[1:]
    nxt[-1] = z
    return z, nxt


def seed_from_int(v: int) -> np.ndarray:
    """7-bit register state from an integer, r0 = LSB."""
    if not 0 <= v <= 127:
        raise ValueError(f"seed integer out of range: {v}")
    return np.array([(v >> j) & 1 for j in range(LFSR_LEN)], dtype=np.uint8)


def seed_to_int(state: np.ndarray) -> int:
    s = np.asarray(state, dtype=np.uint8)
    return int(sum(int(b) << j for j, b in enumerate(s)))


def all_seeds() -> np.ndarray:
    """All 127 nonzero seeds as a (127, 7) bit matrix, row i = seed i+1."""
    return _all_seeds().copy()


@functools.lru_cache(maxsize=1)
def _all_seeds() -> np.ndarray:
    m = np.array([[(v >> j) & 1 for j in range(LFSR_LEN)] for v in range(1, 128)],
                 dtype=np.uint8)
    m.flags.writeable = False
    return m


@functools.lru_cache(maxsize=256)
def _output_period(state_int: int) -> np.ndarray:
    """First 127 output bits from a register state (zero state gives zeros)."""
    s = [(state_int >> j) & 1 for j in range(LFSR_LEN)]
    out = []
    for _ in range(PERIOD):
        z = s[0] ^ s[3]
        out.append(z)
        s = s[1:] + [z]
    arr = np.array(out, dtype=np.uint8)
    arr.flags.writeable = False
    return arr


def lfsr_run(state: np.ndarray, n: int) -> np.ndarray:
    """n successive output bits from an arbitrary register state.

    Accepts the all-zero state (fixed point: output stays zero), which a
    receiver can reach when it preloads hard pilot decisions.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    period = _output_period(seed_to_int(state))
    reps = -(-n // PERIOD)  # ceil
    return np.tile(period, max(reps, 1))[:n].copy()


def scramble(seed: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """XOR a bit sequence with the seed's output sequence.

    Self-inverse: scramble(seed, scramble(seed, x)) == x.
    The seed must be nonzero, otherwise the output sequence is degenerate.
    """
    s = np.asarray(seed, dtype=np.uint8)
    if s.shape != (LFSR_LEN,):
        raise ValueError(f"seed must have shape ({LFSR_LEN},), got {s.shape}")
    if not s.any():
        raise ValueError("seed must be nonzero")
    x = np.asarray(bits, dtype=np.uint8)
    if x.ndim != 1:
        raise ValueError("bits must be one-dimensional")
    return lfsr_run(s, x.size) ^ x


def make_pilots(seed: np.ndarray, L: int) -> np.ndarray:
    """Scrambler output over an all-zero L-bit prefix (L >= 7).

    Pilot bit i equals output bit i of the seeded register, so the pilots
    expose the seed through known linear combinations.  After emitting 7
    pilots the register state equals those 7 bits, which is what lets a
    receiver resynchronize from hard pilot decisions.
    """
    if L < LFSR_LEN:
        raise ValueError(f"L must be at least {LFSR_LEN}, got {L}")
    return scramble(seed, np.zeros(L, dtype=np.uint8))


@functools.lru_cache(maxsize=32)
def _mask_matrix(L: int) -> np.ndarray:
    # Index-set recurrence: track which seed bits each output depends on.
    # Initialize the 7 virtual outputs before the pilot block as the seed
    # bits themselves, then every later output is the XOR of the outputs
    # 7 and 4 steps back.
    sets: dict[int, frozenset[int]] = {
        -(L + LFSR_LEN) + j: frozenset([j]) for j in range(LFSR_LEN)
    }
    a = np.zeros((L, LFSR_LEN), dtype=np.uint8)
    for m in range(-L, 0):
        sm = sets[m - 7] ^ sets[m - 4]
        sets[m] = sm
        a[m + L, list(sm)] = 1
    a.flags.writeable = False
    return a


def mask_matrix(L: int) -> np.ndarray:
    """(L, 7) GF(2) matrix A with make_pilots(seed, L) == A @ seed mod 2."""
    if L < LFSR_LEN:
        raise ValueError(f"L must be at least {LFSR_LEN}, got {L}")
    return _mask_matrix(L)
