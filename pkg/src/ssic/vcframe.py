"""Virtual-channel framing: header code, CRC, and the wire format.

A frame carries [stream address | coded header | pad | payload]:

  stream_addr   48 bits, MSB first
  header_coded  441 bits: the 49-bit header block (VCI 16, VCS 16, CRC-16 of
                those four bytes, one zero pad bit) split into 7-bit chunks,
                each expanded by the (63,7) block code below
  pad           7 zero bits, aligning the byte boundary (496 bits total)
  payload       raw packet bytes, at most MTU_PAYLOAD

The header code is the narrow-sense binary BCH code of length 63 with 7
information bits.  Its generator polynomial is derived here from scratch
over GF(2^6) (primitive polynomial x^6 + x + 1) as the product of the
minimal polynomials of alpha^1..alpha^30, giving minimum distance 31, so
any 15 hard errors per block are correctable.  With only 128 codewords,
soft decoding is exact maximum-likelihood: correlate the received LLRs
against every codeword.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BCH_N = 63
BCH_K = 7
BCH_MIN_DIST = 31

STREAM_ADDR_BITS = 48
HEADER_FIELD_BITS = 49  # vci 16 + vcs 16 + crc 16 + pad 1
HEADER_CODED_BITS = BCH_N * BCH_K  # 441
FRAME_PAD_BITS = 7
FRAME_OVERHEAD_BYTES = (STREAM_ADDR_BITS + HEADER_CODED_BITS + FRAME_PAD_BITS) // 8
MTU_PAYLOAD = 1500

_PRIM_POLY = 0b1000011  # x^6 + x + 1, primitive over GF(2)


def _gf64_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x40:
            a ^= _PRIM_POLY
    return r


def _gf2poly_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _gf2poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm and a:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _generator_poly() -> int:
    """LCM of the minimal polynomials of alpha^1..alpha^30, as a GF(2) poly."""
    alpha_pow = [1] * 63
    for i in range(1, 63):
        alpha_pow[i] = _gf64_mul(alpha_pow[i - 1], 2)
    g = 1
    covered: set[int] = set()
    for i in range(1, 31):
        if i in covered:
            continue
        cls = []
        e = i
        while e not in cls:
            cls.append(e)
            e = (e * 2) % 63
        covered.update(cls)
        # minimal polynomial: product of (x + alpha^e) over the conjugacy class
        coeffs = [1]  # low degree first, coefficients in GF(64)
        for e in cls:
            root = alpha_pow[e]
            nxt = [0] * (len(coeffs) + 1)
            for d, c in enumerate(coeffs):
                nxt[d] ^= _gf64_mul(c, root)
                nxt[d + 1] ^= c
            coeffs = nxt
        if any(c not in (0, 1) for c in coeffs):
            raise AssertionError("minimal polynomial not binary")
        mp = sum(c << d for d, c in enumerate(coeffs))
        g = _gf2poly_mul(g, mp)
    if g.bit_length() - 1 != BCH_N - BCH_K:
        raise AssertionError(f"generator degree {g.bit_length() - 1}, expected {BCH_N - BCH_K}")
    return g


_GEN_POLY = _generator_poly()


def _encode_int(info_value: int) -> int:
    """Systematic codeword as a degree-62 polynomial int; info in the top 7."""
    m = info_value << (BCH_N - BCH_K)
    return m ^ _gf2poly_mod(m, _GEN_POLY)


def _codeword_table() -> np.ndarray:
    t = np.zeros((1 << BCH_K, BCH_N), dtype=np.uint8)
    for v in range(1 << BCH_K):
        c = _encode_int(v)
        t[v] = [(c >> (BCH_N - 1 - p)) & 1 for p in range(BCH_N)]
    t.flags.writeable = False
    return t


CODEWORDS = _codeword_table()  # row v = codeword for info value v, MSB-first
_SIGNS = (1.0 - 2.0 * CODEWORDS.astype(np.float64))  # bit 0 -> +1, bit 1 -> -1


def bch_encode(info_bits: np.ndarray) -> np.ndarray:
    """7 info bits (transmitted order) -> 63-bit codeword, info bits first."""
    b = np.asarray(info_bits, dtype=np.uint8)
    if b.shape != (BCH_K,):
        raise ValueError(f"info must be {BCH_K} bits")
    v = int(b @ (1 << np.arange(BCH_K - 1, -1, -1)))
    return CODEWORDS[v].copy()


def bch_decode_soft(llrs: np.ndarray) -> np.ndarray:
    """Exact ML decoding of one block from 63 LLRs.

    Maximizes sum over positions of (+llr if codeword bit 0 else -llr);
    ties break toward the lowest info value.
    """
    y = np.asarray(llrs, dtype=np.float64)
    if y.shape != (BCH_N,):
        raise ValueError(f"need {BCH_N} LLRs")
    v = int(np.argmax(_SIGNS @ y))
    return np.array([(v >> (BCH_K - 1 - j)) & 1 for j in range(BCH_K)], dtype=np.uint8)


def bch_decode_hard(bits: np.ndarray) -> np.ndarray:
    """Minimum-distance decoding of hard bits (ML at unit confidence)."""
    b = np.asarray(bits, dtype=np.float64)
    return bch_decode_soft(1.0 - 2.0 * b)


def crc16_ccitt(data: bytes) -> int:
    """CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection."""
    crc = 0xFFFF
    for byte in data:
        crc ^= byte << 8
        for _ in range(8):
            crc = ((crc << 1) ^ 0x1021 if crc & 0x8000 else crc << 1) & 0xFFFF
    return crc


def _check_u16(name: str, v: int) -> None:
    if not 0 <= v <= 0xFFFF:
        raise ValueError(f"{name} out of range: {v}")


@dataclass(frozen=True)
class VcHeader:
    """Identifies one packet instance: channel id, serial number, their CRC."""

    vci: int
    vcs: int
    crc16: int

    def __post_init__(self):
        _check_u16("vci", self.vci)
        _check_u16("vcs", self.vcs)
        _check_u16("crc16", self.crc16)

    @classmethod
    def make(cls, vci: int, vcs: int) -> "VcHeader":
        _check_u16("vci", vci)
        _check_u16("vcs", vcs)
        return cls(vci, vcs, crc16_ccitt(bytes([vci >> 8, vci & 0xFF, vcs >> 8, vcs & 0xFF])))

    def crc_ok(self) -> bool:
        return self.crc16 == VcHeader.make(self.vci, self.vcs).crc16


def _u16_bits(v: int) -> np.ndarray:
    return np.array([(v >> (15 - i)) & 1 for i in range(16)], dtype=np.uint8)


def _bits_to_u16(bits: np.ndarray) -> int:
    return int(np.asarray(bits, dtype=np.uint64) @ (1 << np.arange(15, -1, -1, dtype=np.uint64)))


def encode_header(vci: int, vcs: int) -> np.ndarray:
    """(vci, vcs) -> 441 coded header bits.  CRC is computed here."""
    h = VcHeader.make(vci, vcs)
    block = np.concatenate([
        _u16_bits(h.vci), _u16_bits(h.vcs), _u16_bits(h.crc16),
        np.zeros(1, dtype=np.uint8),
    ])
    return np.concatenate([bch_encode(block[7 * j:7 * j + 7]) for j in range(BCH_K)])


def _header_from_field_bits(bits49: np.ndarray) -> VcHeader | None:
    vci = _bits_to_u16(bits49[0:16])
    vcs = _bits_to_u16(bits49[16:32])
    crc = _bits_to_u16(bits49[32:48])
    h = VcHeader(vci, vcs, crc)
    return h if h.crc_ok() else None


def decode_header_soft(llrs: np.ndarray) -> VcHeader | None:
    """441 header LLRs -> header, or None when the recovered CRC mismatches."""
    y = np.asarray(llrs, dtype=np.float64)
    if y.shape != (HEADER_CODED_BITS,):
        raise ValueError(f"need {HEADER_CODED_BITS} LLRs")
    infos = [bch_decode_soft(y[BCH_N * j:BCH_N * (j + 1)]) for j in range(BCH_K)]
    return _header_from_field_bits(np.concatenate(infos))


def decode_header_hard(bits: np.ndarray) -> VcHeader | None:
    b = np.asarray(bits, dtype=np.float64)
    return decode_header_soft(1.0 - 2.0 * b)


@dataclass
class VcFrame:
    """One stream's copy of a packet, ready for scrambling and transmission."""

    stream_addr: int
    header_coded: np.ndarray
    payload: bytes

    def __post_init__(self):
        if not 0 <= self.stream_addr < (1 << STREAM_ADDR_BITS):
            raise ValueError(f"stream_addr out of range: {self.stream_addr}")
        self.header_coded = np.asarray(self.header_coded, dtype=np.uint8)
        if self.header_coded.shape != (HEADER_CODED_BITS,):
            raise ValueError(f"header_coded must be {HEADER_CODED_BITS} bits")
        if len(self.payload) > MTU_PAYLOAD:
            raise ValueError(f"payload exceeds MTU: {len(self.payload)} > {MTU_PAYLOAD}")

    def header(self) -> VcHeader | None:
        return decode_header_hard(self.header_coded)


def encapsulate(packet: bytes, vci: int, vcs: int, stream_addr: int) -> VcFrame:
    """Wrap a packet for one stream.  Frames for the same (packet, vci, vcs)
    differ only in stream_addr."""
    if len(packet) > MTU_PAYLOAD:
        raise ValueError(f"payload exceeds MTU: {len(packet)} > {MTU_PAYLOAD}")
    return VcFrame(stream_addr, encode_header(vci, vcs), bytes(packet))


def extract(frame: VcFrame) -> bytes:
    return frame.payload


def frame_to_bits(frame: VcFrame) -> np.ndarray:
    """Wire bit order: address, coded header, pad, payload (MSB-first bytes)."""
    addr = np.array([(frame.stream_addr >> (STREAM_ADDR_BITS - 1 - i)) & 1
                     for i in range(STREAM_ADDR_BITS)], dtype=np.uint8)
    pay = np.unpackbits(np.frombuffer(frame.payload, dtype=np.uint8))
    return np.concatenate([addr, frame.header_coded,
                           np.zeros(FRAME_PAD_BITS, dtype=np.uint8), pay])


def frame_to_bytes(frame: VcFrame) -> bytes:
    return np.packbits(frame_to_bits(frame)).tobytes()


def frame_from_bits(bits: np.ndarray) -> VcFrame:
    b = np.asarray(bits, dtype=np.uint8)
    total_overhead = STREAM_ADDR_BITS + HEADER_CODED_BITS + FRAME_PAD_BITS
    if b.ndim != 1 or b.size < total_overhead or (b.size - total_overhead) % 8:
        raise ValueError("malformed frame bits")
    addr = int(b[:STREAM_ADDR_BITS] @ (1 << np.arange(STREAM_ADDR_BITS - 1, -1, -1,
                                                      dtype=np.uint64)))
    coded = b[STREAM_ADDR_BITS:STREAM_ADDR_BITS + HEADER_CODED_BITS]
    pay = np.packbits(b[total_overhead:]).tobytes()
    return VcFrame(addr, coded.copy(), pay)


def frame_from_bytes(data: bytes) -> VcFrame:
    if len(data) < FRAME_OVERHEAD_BYTES:
        raise ValueError(f"frame too short: {len(data)} bytes")
    return frame_from_bits(np.unpackbits(np.frombuffer(data, dtype=np.uint8)))
