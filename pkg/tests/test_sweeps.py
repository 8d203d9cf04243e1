import json

import numpy as np
import pytest

from ssic.cli import main
from ssic.sweeps import (
    NETSIM_COLUMNS,
    SWEEP_COLUMNS,
    SweepSpec,
    binomial_ci95,
    load_spec_file,
    rows_to_csv,
    run_netsim,
    run_sweep,
)

GOLDEN_SEED_BER_CSV = (
    "mode,snr_db,L,n_streams,variant,trials,n,errors,rate,ci95\n"
    "seed_ber,0,16,1,hd,400,400,176,0.44,0.0486459206923\n"
    "seed_ber,0,16,1,hrsx,400,400,13,0.0325,0.0173777379138\n"
    "seed_ber,4,16,1,hd,400,400,32,0.08,0.0265867335339\n"
    "seed_ber,4,16,1,hrsx,400,400,1,0.0025,0.00489387116708\n"
)


def test_default_variants_by_mode():
    assert SweepSpec("seed_ber", [0.0]).variants == ("hd", "hrsx")
    assert SweepSpec("payload_ber", [0.0]).variants == ("naive", "hrsx", "srsx")
    assert SweepSpec("packet_per", [0.0]).variants == ("naive", "hrsx", "srsx")
    assert SweepSpec("netsim", [0.0]).variants == ("srsx",)


def test_offsets_default_to_zero_per_stream():
    spec = SweepSpec("payload_ber", [1.0], n_streams=3)
    assert spec.stream_snr_offsets == [0.0, 0.0, 0.0]


@pytest.mark.parametrize("kwargs,field", [
    (dict(mode="nope", snr_grid=[0.0]), "mode"),
    (dict(mode="seed_ber", snr_grid=[]), "snr_grid"),
    (dict(mode="seed_ber", snr_grid=[float("nan")]), "snr_grid"),
    (dict(mode="seed_ber", snr_grid=[0.0], L=6), "L"),
    (dict(mode="seed_ber", snr_grid=[0.0], n_streams=0), "n_streams"),
    (dict(mode="seed_ber", snr_grid=[0.0], stream_snr_offsets=[0.0, 1.0]),
     "stream_snr_offsets"),
    (dict(mode="seed_ber", snr_grid=[0.0], trials=0), "trials"),
    (dict(mode="payload_ber", snr_grid=[0.0], payload_bytes=0), "payload_bytes"),
    (dict(mode="payload_ber", snr_grid=[0.0], payload_bytes=1501), "payload_bytes"),
    (dict(mode="seed_ber", snr_grid=[0.0], variants=()), "variants"),
    (dict(mode="seed_ber", snr_grid=[0.0], variants=("bogus",)), "variants"),
    (dict(mode="payload_ber", snr_grid=[0.0], n_streams=2, variants=("hd",)),
     "variants"),
    (dict(mode="netsim", snr_grid=[0.0], variants=("srsx", "hrsx")), "variants"),
    (dict(mode="netsim", snr_grid=[0.0], variants=("hd",)), "variants"),
    (dict(mode="seed_ber", snr_grid=[0.0], detection_loss_prob=1.2),
     "detection_loss_prob"),
    (dict(mode="seed_ber", snr_grid=[0.0], burst_prob=-0.5), "burst_prob"),
    (dict(mode="seed_ber", snr_grid=[0.0], burst_llr_atten=2.0), "burst_llr_atten"),
    (dict(mode="seed_ber", snr_grid=[0.0], burst_len_mean=0.0), "burst_len_mean"),
    (dict(mode="seed_ber", snr_grid=[0.0], window_size=0), "window_size"),
    (dict(mode="seed_ber", snr_grid=[0.0], arrival_jitter=-1.0), "arrival_jitter"),
])
def test_validate_names_the_field(kwargs, field):
    with pytest.raises(ValueError, match=field):
        SweepSpec(**kwargs).validate()


def test_from_dict_contract():
    spec = SweepSpec.from_dict({"mode": "seed_ber", "snr_grid": [1.0], "trials": 5})
    assert spec.trials == 5
    with pytest.raises(ValueError, match="unknown spec keys"):
        SweepSpec.from_dict({"mode": "seed_ber", "snr_grid": [1.0], "trails": 5})
    with pytest.raises(ValueError, match="mode"):
        SweepSpec.from_dict({"snr_grid": [1.0]})
    with pytest.raises(ValueError, match="snr_grid"):
        SweepSpec.from_dict({"mode": "seed_ber"})


def test_binomial_ci95():
    assert binomial_ci95(0, 0) == 0.0
    assert binomial_ci95(0, 100) == 0.0
    assert binomial_ci95(25, 100) == pytest.approx(1.96 * np.sqrt(0.25 * 0.75 / 100))


def test_golden_csv_bytes():
    spec = SweepSpec(mode="seed_ber", snr_grid=[0.0, 4.0], L=16, trials=400,
                     rng_seed=99)
    assert rows_to_csv(SWEEP_COLUMNS, run_sweep(spec)) == GOLDEN_SEED_BER_CSV


def test_sample_count_semantics():
    grid = [3.0]
    rows = run_sweep(SweepSpec("seed_ber", grid, trials=40))
    assert all(r[6] == 40 for r in rows)  # n = frames
    rows = run_sweep(SweepSpec("payload_ber", grid, trials=7, payload_bytes=20))
    assert all(r[6] == 7 * 160 for r in rows)  # n = bits
    rows = run_sweep(SweepSpec("packet_per", grid, trials=9, payload_bytes=20))
    assert all(r[6] == 9 for r in rows)  # n = packets
    for r in rows:
        assert r[8] == r[7] / r[6]  # rate column is errors / n


def test_row_order_is_grid_major():
    spec = SweepSpec("payload_ber", [0.0, 1.0], trials=2, payload_bytes=4)
    rows = run_sweep(spec)
    got = [(r[1], r[4]) for r in rows]
    want = [(s, v) for s in (0.0, 1.0) for v in ("naive", "hrsx", "srsx")]
    assert got == want


def test_mode_routing_enforced():
    with pytest.raises(ValueError, match="mode"):
        run_sweep(SweepSpec("netsim", [5.0]))
    with pytest.raises(ValueError, match="mode"):
        run_netsim(SweepSpec("seed_ber", [5.0]))


def test_repeat_runs_are_byte_identical():
    spec = dict(mode="payload_ber", snr_grid=[1.0, 3.0], n_streams=2,
                trials=30, payload_bytes=64, rng_seed=5)
    a = rows_to_csv(SWEEP_COLUMNS, run_sweep(SweepSpec(**spec)))
    b = rows_to_csv(SWEEP_COLUMNS, run_sweep(SweepSpec(**spec)))
    assert a == b


def test_netsim_rows_shape_and_identity():
    spec = SweepSpec("netsim", [8.0, 9.0], n_streams=2, trials=50,
                     payload_bytes=100, rng_seed=1)
    rows = run_netsim(spec)
    assert len(rows) == 2 * (2 + 2)
    modes = [r[1] for r in rows[:4]]
    assert modes == ["stream1", "stream2", "dup", "ssic"]
    assert [r[0] for r in rows] == [0, 0, 0, 0, 1, 1, 1, 1]
    for r in rows:
        run_id, mode, sent, plr, per, fr = r
        assert sent == 50
        assert fr == 1.0 - (1.0 - plr) * (1.0 - per)  # exact identity


def test_netsim_determinism():
    spec = dict(mode="netsim", snr_grid=[8.5], n_streams=2, trials=60,
                payload_bytes=80, rng_seed=3)
    a = rows_to_csv(NETSIM_COLUMNS, run_netsim(SweepSpec(**spec)))
    b = rows_to_csv(NETSIM_COLUMNS, run_netsim(SweepSpec(**spec)))
    assert a == b


# --------------------------------------------------------------------- cli

def test_cli_sweep_to_file(tmp_path):
    out = tmp_path / "rows.csv"
    rc = main(["sweep", "--mode", "seed_ber", "--snr-grid", "0,4", "--L", "16",
               "--trials", "400", "--rng-seed", "99", "--out", str(out)])
    assert rc == 0
    assert out.read_text() == GOLDEN_SEED_BER_CSV


def test_cli_sweep_stdout(capsys):
    rc = main(["sweep", "--mode", "seed_ber", "--snr-grid", "2", "--trials", "20"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 1 + 2  # hd and hrsx rows


def test_cli_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "spec.json"
    cfg.write_text(json.dumps({"mode": "seed_ber", "snr_grid": [0.0, 4.0],
                               "trials": 123, "rng_seed": 99}))
    out = tmp_path / "rows.csv"
    rc = main(["sweep", "--config", str(cfg), "--trials", "400", "--out", str(out)])
    assert rc == 0
    assert out.read_text() == GOLDEN_SEED_BER_CSV


def test_cli_netsim(tmp_path):
    out = tmp_path / "net.csv"
    rc = main(["netsim", "--snr-grid", "9", "--n-streams", "2", "--trials", "40",
               "--payload-bytes", "60", "--variant", "srsx", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == ",".join(NETSIM_COLUMNS)
    assert len(lines) == 1 + 4


def test_cli_error_paths(tmp_path, capsys):
    assert main(["sweep", "--mode", "seed_ber", "--snr-grid", "1", "--L", "3"]) == 2
    assert "error: L" in capsys.readouterr().err
    # spec file with an unknown key
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"mode": "seed_ber", "snr_grid": [1.0], "typo": 1}))
    assert main(["sweep", "--config", str(cfg)]) == 2
    assert "unknown spec keys" in capsys.readouterr().err
    # mode entirely missing
    assert main(["sweep", "--snr-grid", "1"]) == 2
    assert "mode" in capsys.readouterr().err
    # nonexistent config file is an I/O error, not a crash
    assert main(["sweep", "--config", str(tmp_path / "nope.json")]) == 2


def test_load_spec_file_requires_object(tmp_path):
    f = tmp_path / "arr.json"
    f.write_text("[1,2]")
    with pytest.raises(ValueError, match="config"):
        load_spec_file(f)
