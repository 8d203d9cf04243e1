"""Multi-stream delivery: dispatch, soft-copy aggregation, and run metrics.

The sender duplicates each packet across all streams (same VCI/VCS/payload,
per-stream address).  The receiver-side aggregator processes one frame
arrival at a time:

  1. clean (CRC-pass) frames skip soft processing, but still pass the
     duplicate check before delivery, so a packet is never delivered twice
     inside the tracking window;
  2. soft frames are descrambled seed-blind (srsx by default) and their
     header is recovered by soft block decoding; an unverifiable header
     drops the copy;
  3. copies of an already-delivered packet are discarded;
  4. a soft copy joins any pending copies of the same packet; when at least
     two copies exist they are combined and the result is delivered if it
     verifies, otherwise the copy is stored;
  5. delivery records the key in the bounded dedup window and purges the
     pending list for that key.

Delivered and pending keys both live in FIFO windows of window_size keys.
A key evicted from the dedup window can in principle be re-delivered much
later; the metrics count such duplicates rather than treating them as
errors.  Payload verification is an idealized CRC: the simulation harness
supplies a predicate that compares against ground truth and never
false-accepts.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .channel import ChannelParams, StreamObservation, fresh_seed, transmit
from .combine import StreamSoftCopy, decide, ssic_combine
from .descramble import hrsx, naive_sd, srsx
from .scrambler import mask_matrix
from .softbits import SoftWord
from .vcframe import (FRAME_PAD_BITS, HEADER_CODED_BITS, STREAM_ADDR_BITS, VcFrame,
                      decode_header_soft, encapsulate, frame_from_bits, frame_to_bits)

VCS_MOD = 1 << 16
_FRAME_OVERHEAD_BITS = STREAM_ADDR_BITS + HEADER_CODED_BITS + FRAME_PAD_BITS


class FrameKey(NamedTuple):
    """Identity of one packet instance on the virtual channel."""

    vci: int
    vcs: int


def vcs_newer(a: int, b: int) -> bool:
    """True when serial number a is strictly newer than b, mod 2^16.

    Standard serial-number arithmetic: the half-range rule keeps ordering
    sane across the 65535 -> 0 wrap.
    """
    d = (a - b) % VCS_MOD
    return 0 < d < VCS_MOD // 2


def dispatch(packet: bytes, vci: int, next_vcs: int,
             stream_addrs: Sequence[int]) -> list[tuple[int, VcFrame]]:
    """One frame per stream for a single packet; only stream_addr differs."""
    if not stream_addrs:
        raise ValueError("need at least one stream")
    return [(k, encapsulate(packet, vci, next_vcs, addr))
            for k, addr in enumerate(stream_addrs)]


class Dispatcher:
    """Owns the serial counter; wraps mod 2^16."""

    def __init__(self, vci: int, stream_addrs: Sequence[int], first_vcs: int = 0):
        self.vci = vci
        self.stream_addrs = list(stream_addrs)
        self.next_vcs = first_vcs % VCS_MOD

    def send(self, packet: bytes) -> tuple[FrameKey, list[tuple[int, VcFrame]]]:
        key = FrameKey(self.vci, self.next_vcs)
        frames = dispatch(packet, self.vci, self.next_vcs, self.stream_addrs)
        self.next_vcs = (self.next_vcs + 1) % VCS_MOD
        return key, frames


@dataclass
class AggregatorConfig:
    variant: str = "srsx"  # seed-blind descrambler for soft copies
    pilot_len: int = 16
    window_size: int = 1024
    combining: bool = True  # False reduces to first-clean-copy-wins

    def __post_init__(self):
        if self.variant not in ("naive", "hrsx", "srsx"):
            raise ValueError(f"unknown soft descrambling variant: {self.variant}")
        if self.pilot_len < 7:
            raise ValueError("pilot_len must be >= 7")
        if self.window_size < 1:
            raise ValueError("window_size must be >= 1")


@dataclass
class AggregatorStats:
    delivered: int = 0
    delivered_hard: int = 0
    delivered_combined: int = 0
    duplicate_drops: int = 0
    header_invalid_drops: int = 0
    soft_stored: int = 0
    combine_failures: int = 0
    pending_evictions: int = 0
    soft_disabled_drops: int = 0


class Aggregator:
    """Receiver-side state machine over per-frame observations."""

    def __init__(self, config: AggregatorConfig,
                 payload_check: Callable[[FrameKey, bytes], bool] | None = None):
        if config.combining and payload_check is None:
            raise ValueError("combining requires a payload verification predicate")
        self.config = config
        self.payload_check = payload_check
        self.mask = mask_matrix(config.pilot_len)
        self.delivered: OrderedDict[FrameKey, None] = OrderedDict()
        self.pending: OrderedDict[FrameKey, dict[int, np.ndarray]] = OrderedDict()
        self.stats = AggregatorStats()

    def _descramble(self, word: SoftWord) -> np.ndarray:
        if word.L != self.config.pilot_len:
            raise ValueError(f"observation has {word.L} pilots, config expects "
                             f"{self.config.pilot_len}")
        if self.config.variant == "srsx":
            return srsx(word, self.mask)
        if self.config.variant == "hrsx":
            return hrsx(word, self.mask)[0]
        return naive_sd(word)

    def _deliver(self, key: FrameKey, payload: bytes, combined: bool) -> tuple[FrameKey, bytes]:
        self.pending.pop(key, None)
        self.delivered[key] = None
        if len(self.delivered) > self.config.window_size:
            self.delivered.popitem(last=False)
        self.stats.delivered += 1
        if combined:
            self.stats.delivered_combined += 1
        else:
            self.stats.delivered_hard += 1
        return key, payload

    def push(self, obs: StreamObservation) -> tuple[FrameKey, bytes] | None:
        """Process one frame arrival; returns (key, packet) on delivery."""
        if not obs.detected:
            raise ValueError("undetected frames never reach the aggregator")

        if obs.crc_pass:
            frame = frame_from_bits(obs.hard_bits)
            header = frame.header()
            if header is None:
                self.stats.header_invalid_drops += 1
                return None
            key = FrameKey(header.vci, header.vcs)
            if key in self.delivered:
                self.stats.duplicate_drops += 1
                return None
            return self._deliver(key, frame.payload, combined=False)

        if not self.config.combining:
            self.stats.soft_disabled_drops += 1
            return None

        word = obs.soft
        llrs = self._descramble(word)
        if word.M < _FRAME_OVERHEAD_BITS or (word.M - _FRAME_OVERHEAD_BITS) % 8:
            self.stats.header_invalid_drops += 1
            return None
        header = decode_header_soft(llrs[STREAM_ADDR_BITS:STREAM_ADDR_BITS + HEADER_CODED_BITS])
        if header is None:
            self.stats.header_invalid_drops += 1
            return None
        key = FrameKey(header.vci, header.vcs)
        if key in self.delivered:
            self.stats.duplicate_drops += 1
            return None

        payload_llrs = llrs[_FRAME_OVERHEAD_BITS:]
        stored = self.pending.get(key)
        if stored:
            copies = [StreamSoftCopy(sid, l) for sid, l in stored.items()
                      if l.size == payload_llrs.size and sid != obs.stream_id]
            copies.append(StreamSoftCopy(obs.stream_id, payload_llrs))
            if len(copies) >= 2:
                bits = decide(ssic_combine(copies))
                packet = np.packbits(bits).tobytes()
                if self.payload_check(key, packet):
                    return self._deliver(key, packet, combined=True)
                self.stats.combine_failures += 1
        self._store(key, obs.stream_id, payload_llrs)
        return None

    def _store(self, key: FrameKey, stream_id: int, payload_llrs: np.ndarray) -> None:
        if key not in self.pending:
            self.pending[key] = {}
            if len(self.pending) > self.config.window_size:
                self.pending.popitem(last=False)
                self.stats.pending_evictions += 1
        self.pending[key][stream_id] = payload_llrs
        self.stats.soft_stored += 1


@dataclass
class PacketRecord:
    """Ground truth plus per-stream outcomes for one sent packet."""

    key: FrameKey
    detected: tuple[bool, ...]
    hard: tuple[bool, ...]
    ssic_delivered: bool = False


@dataclass
class RunMetrics:
    """Loss/error accounting for one delivery mode over a run."""

    sent: int
    detected: int
    delivered: int
    plr: float = field(init=False)
    per: float = field(init=False)
    fr: float = field(init=False)

    def __post_init__(self):
        if not 0 <= self.delivered <= self.detected <= self.sent:
            raise ValueError("need delivered <= detected <= sent")
        self.plr = (self.sent - self.detected) / self.sent if self.sent else 0.0
        self.per = (self.detected - self.delivered) / self.detected if self.detected else 0.0
        self.fr = 1.0 - (1.0 - self.plr) * (1.0 - self.per)


def run_metrics(records: Sequence[PacketRecord], n_streams: int) -> dict[str, RunMetrics]:
    """Per-mode metrics out of one shared delivery log.

    stream<k> counts only stream k's clean copies; dup is first-clean-copy-
    wins across streams; ssic is the aggregator's actual outcome.
    """
    sent = len(records)
    out: dict[str, RunMetrics] = {}
    for k in range(n_streams):
        det = sum(r.detected[k] for r in records)
        dlv = sum(r.detected[k] and r.hard[k] for r in records)
        out[f"stream{k + 1}"] = RunMetrics(sent, det, dlv)
    det_any = sum(any(r.detected) for r in records)
    out["dup"] = RunMetrics(sent, det_any, sum(any(r.hard) for r in records))
    out["ssic"] = RunMetrics(sent, det_any, sum(r.ssic_delivered for r in records))
    return out


def run_network_point(n_packets: int, payload_bytes: int,
                      stream_params: Sequence[ChannelParams], L: int,
                      rng: np.random.Generator, variant: str = "srsx",
                      window_size: int = 1024, arrival_jitter: float = 0.5,
                      vci: int = 1, combining: bool = True,
                      ) -> tuple[list[PacketRecord], AggregatorStats]:
    """Simulate one configured operating point end to end.

    Every packet is dispatched on all streams; per-frame observations are
    merged by jittered arrival time and fed to a fresh aggregator.  Returns
    ground-truth packet records (with the aggregator outcome filled in) and
    the aggregator counters.
    """
    n_streams = len(stream_params)
    if n_streams < 1:
        raise ValueError("need at least one stream")
    dispatcher = Dispatcher(vci, [0x020000000000 + k for k in range(n_streams)])
    truth: dict[FrameKey, bytes] = {}
    by_key: dict[FrameKey, PacketRecord] = {}
    records: list[PacketRecord] = []
    arrivals: list[tuple[float, int, StreamObservation]] = []

    for i in range(n_packets):
        packet = rng.integers(0, 256, payload_bytes, dtype=np.uint8).tobytes()
        key, frames = dispatcher.send(packet)
        truth[key] = packet
        detected, hard = [], []
        for k, frame in frames:
            obs = transmit(fresh_seed(rng), frame_to_bits(frame), L, stream_params[k],
                           rng, stream_id=k)
            detected.append(obs.detected)
            hard.append(obs.detected and obs.crc_pass)
            if obs.detected:
                arrivals.append((i + arrival_jitter * rng.random(), len(arrivals), obs))
        rec = PacketRecord(key, tuple(detected), tuple(hard))
        records.append(rec)
        by_key[key] = rec

    agg = Aggregator(AggregatorConfig(variant=variant, pilot_len=L,
                                      window_size=window_size, combining=combining),
                     payload_check=lambda key, payload: truth.get(key) == payload)
    arrivals.sort(key=lambda t: (t[0], t[1]))
    for _, _, obs in arrivals:
        result = agg.push(obs)
        if result is not None:
            key, payload = result
            rec = by_key.get(key)
            if rec is not None and truth[key] == payload:
                rec.ssic_delivered = True
    return records, agg.stats
