import json

import numpy as np
import pytest
from scipy.stats import norm

from ssic.channel import (
    ChannelParams,
    StreamObservation,
    bpsk_awgn_llrs,
    fresh_seed,
    snr_db_to_sigma2,
    soft_copy,
    transmit,
)
from ssic.descramble import hd
from ssic.scrambler import make_pilots, seed_from_int, seed_to_int
from ssic.softbits import hard_decide


def test_sigma2_golden_points():
    assert snr_db_to_sigma2(0.0) == pytest.approx(0.5)
    assert snr_db_to_sigma2(10.0) == pytest.approx(0.05)
    assert snr_db_to_sigma2(-3.0103) == pytest.approx(1.0, rel=1e-4)


def test_llr_statistics_match_model():
    # for bit 0 at snr g: llr ~ N(2/sigma^2, 4/sigma^2) with sigma^2 = 1/(2g)
    rng = np.random.default_rng(0)
    llrs = bpsk_awgn_llrs(np.zeros(200_000, dtype=np.uint8), 0.0, rng)
    assert llrs.mean() == pytest.approx(4.0, abs=0.05)
    assert llrs.var() == pytest.approx(8.0, rel=0.03)
    ones = bpsk_awgn_llrs(np.ones(50_000, dtype=np.uint8), 0.0, rng)
    assert ones.mean() == pytest.approx(-4.0, abs=0.1)


def test_hard_error_rate_matches_q_function():
    rng = np.random.default_rng(1)
    n, snr_db = 400_000, 2.0
    g = 10 ** (snr_db / 10)
    llrs = bpsk_awgn_llrs(np.zeros(n, dtype=np.uint8), snr_db, rng)
    p = norm.sf(np.sqrt(2 * g))
    rate = hard_decide(llrs).mean()
    assert abs(rate - p) < 4 * np.sqrt(p * (1 - p) / n)


def test_channel_params_validation():
    with pytest.raises(ValueError):
        ChannelParams(snr_db=0.0, detection_loss_prob=1.5)
    with pytest.raises(ValueError):
        ChannelParams(snr_db=0.0, burst_prob=-0.1)
    with pytest.raises(ValueError):
        ChannelParams(snr_db=0.0, burst_llr_atten=0.0)
    with pytest.raises(ValueError):
        ChannelParams(snr_db=0.0, burst_llr_atten=1.1)
    with pytest.raises(ValueError):
        ChannelParams(snr_db=0.0, burst_len_mean=0.5)


def test_channel_params_from_dict_and_file(tmp_path):
    p = ChannelParams.from_dict({"snr_db": 3.0, "burst_prob": 0.1})
    assert p.snr_db == 3.0 and p.burst_prob == 0.1
    with pytest.raises(ValueError, match="unknown channel keys"):
        ChannelParams.from_dict({"snr_db": 3.0, "snr": 1.0})
    f = tmp_path / "chan.json"
    f.write_text(json.dumps({"snr_db": 7.5, "detection_loss_prob": 0.01}))
    q = ChannelParams.from_file(f)
    assert q.snr_db == 7.5 and q.detection_loss_prob == 0.01


def test_observation_invariants():
    with pytest.raises(ValueError):
        StreamObservation(stream_id=0, detected=False, crc_pass=True)
    with pytest.raises(ValueError):
        StreamObservation(stream_id=0, detected=True, crc_pass=True)
    with pytest.raises(ValueError):
        StreamObservation(stream_id=0, detected=True, crc_pass=False)
    ok = StreamObservation(stream_id=0, detected=False)
    assert not ok.crc_pass


def test_fresh_seed_range_and_coverage():
    rng = np.random.default_rng(2)
    vals = {seed_to_int(fresh_seed(rng)) for _ in range(2000)}
    assert vals <= set(range(1, 128))
    assert len(vals) == 127  # all values reachable


def test_soft_copy_shapes_and_clean_recovery():
    rng = np.random.default_rng(3)
    payload = rng.integers(0, 2, 100, dtype=np.uint8)
    seed = seed_from_int(42)
    w = soft_copy(seed, payload, 16, 30.0, rng)
    assert w.L == 16 and w.M == 100
    assert np.array_equal(hard_decide(w.pilots), make_pilots(seed, 16))
    got = hd(np.concatenate([hard_decide(w.pilots[-7:]), hard_decide(w.payload)]))
    assert np.array_equal(got, payload)


def test_transmit_detection_loss():
    rng = np.random.default_rng(4)
    params = ChannelParams(snr_db=10.0, detection_loss_prob=1.0)
    obs = transmit(seed_from_int(1), np.zeros(8, dtype=np.uint8), 16, params, rng)
    assert not obs.detected and obs.soft is None and obs.hard_bits is None


def test_transmit_clean_frame_passes_crc():
    rng = np.random.default_rng(5)
    params = ChannelParams(snr_db=30.0)
    payload = rng.integers(0, 2, 64, dtype=np.uint8)
    obs = transmit(seed_from_int(9), payload, 16, params, rng, stream_id=3)
    assert obs.detected and obs.crc_pass and obs.stream_id == 3
    assert np.array_equal(obs.hard_bits, payload)


def test_transmit_never_false_accepts():
    # crc_pass frames reproduce the payload exactly; failed frames would not
    rng = np.random.default_rng(6)
    params = ChannelParams(snr_db=3.0)
    passes = fails = 0
    for _ in range(300):
        payload = rng.integers(0, 2, 48, dtype=np.uint8)
        obs = transmit(fresh_seed(rng), payload, 16, params, rng)
        if obs.crc_pass:
            passes += 1
            assert np.array_equal(obs.hard_bits, payload)
        else:
            fails += 1
            got = hd(np.concatenate([hard_decide(obs.soft.pilots[-7:]),
                                     hard_decide(obs.soft.payload)]))
            assert not np.array_equal(got, payload)
    assert passes > 0 and fails > 0  # the chosen SNR exercises both branches


def test_burst_window_causes_hard_errors_at_high_snr():
    # without the burst this SNR is error-free; with it some frames must break
    rng = np.random.default_rng(7)
    clean = ChannelParams(snr_db=15.0)
    bursty = ChannelParams(snr_db=15.0, burst_prob=1.0, burst_len_mean=200.0,
                           burst_llr_atten=0.02)
    payload = np.zeros(600, dtype=np.uint8)
    assert all(transmit(fresh_seed(rng), payload, 16, clean, rng).crc_pass
               for _ in range(50))
    outcomes = [transmit(fresh_seed(rng), payload, 16, bursty, rng).crc_pass
                for _ in range(50)]
    assert not all(outcomes)


def test_burst_attenuates_reported_llrs():
    rng = np.random.default_rng(8)
    bursty = ChannelParams(snr_db=12.0, burst_prob=1.0, burst_len_mean=1e9,
                           burst_llr_atten=0.1)
    payload = np.zeros(400, dtype=np.uint8)
    obs = transmit(fresh_seed(rng), payload, 16, bursty, rng)
    # a window that covers (nearly) the whole frame scales LLR means by 0.1:
    # clean mean |llr| is 2/sigma^2 ~ 63.4, attenuated ~ 6.3
    mags = np.abs(obs.soft.payload) if obs.soft is not None else None
    assert mags is not None and mags.mean() < 15.0
