import csv
import json
import math

import pytest

from lambdatrain.cli import main
from lambdatrain.outputs import CSV_HEADER


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def design(tmp_path, capsys, *extra):
    path = tmp_path / "train.json"
    code, _, _ = run(["design", "--pairs", *extra, "--out", str(path)], capsys)
    assert code == 0
    return path


def test_design_two_pairs(capsys):
    code, out, _ = run(["design", "--pairs", "2", "--shape", "gaussian", "--width", "1", "--spacing", "6"], capsys)
    assert code == 0
    data = json.loads(out)
    assert [p["theta"] for p in data["pairs"]] == [0.3926991, 1.1780972]
    assert [p["center"] for p in data["pairs"]] == [0.0, 6.0]
    assert data["pairs"][0]["shape"] == {"kind": "gaussian", "width": 1.0}
    assert set(data["grid"]) == {"t_start", "t_end", "dt"}
    assert data["gamma"] == 0.0


def test_design_single_pair_equal_peaks(capsys):
    from lambdatrain.model import TrainSpec

    _, out, _ = run(["design", "--pairs", "1"], capsys)
    (pair,) = TrainSpec.from_json(json.loads(out)).pairs
    assert pair.pump_peak == pytest.approx(pair.stokes_peak, rel=1e-7)


@pytest.mark.parametrize(
    "argv",
    [
        ["design", "--pairs", "0"],
        ["design", "--pairs", "x"],
        ["design", "--pairs", "2", "--shape", "lorentz"],
        ["design", "--pairs", "3", "--spacing", "3"],
        ["design", "--pairs", "2", "--angles", "0.1"],
        ["verify", "--claim", "nonsense", "--pairs", "2"],
        ["verify", "--claim", "optimal-angles", "--pairs", "4"],
        ["sweep", "--pairs-from", "3", "--pairs-to", "2"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_overlap_message_mentions_minimum(capsys):
    code, _, err = run(["design", "--pairs", "3", "--spacing", "3"], capsys)
    assert code == 2 and "4" in err


def test_simulate_outputs(tmp_path, capsys):
    train = design(tmp_path, capsys, "2")
    csv_path, summary_path, gp = tmp_path / "s.csv", tmp_path / "s.json", tmp_path / "s.gp"
    code, _, _ = run(
        ["simulate", "--train", str(train), "--out", str(csv_path), "--summary", str(summary_path),
         "--gnuplot", str(gp), "--stride", "20"],
        capsys,
    )
    assert code == 0
    with open(csv_path) as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_HEADER
    assert all(len(r[3].split(".")[1]) == 6 for r in rows[1:])
    summary = json.loads(summary_path.read_text())
    assert summary["final_populations"]["P3"] == pytest.approx(1.0, abs=1e-4)
    assert summary["p2_max"] == pytest.approx(math.sin(math.pi / 8) ** 2, abs=1e-3)
    assert len(summary["p2_max_per_pair"]) == 2
    assert summary["lost_population"] == pytest.approx(0.0, abs=1e-6)
    script = gp.read_text()
    assert sum(line.startswith("plot ") for line in script.splitlines()) == 2
    assert str(csv_path) in script


def test_simulate_eight_pairs(tmp_path, capsys):
    train = design(tmp_path, capsys, "8")
    summary = tmp_path / "s.json"
    assert run(["simulate", "--train", str(train), "--out", str(tmp_path / "a.csv"), "--summary", str(summary)], capsys)[0] == 0
    data = json.loads(summary.read_text())
    assert data["p2_max"] == pytest.approx(0.0096, abs=1e-4)
    assert data["final_populations"]["P3"] == pytest.approx(1.0, abs=1e-4)
    assert run(["simulate", "--train", str(train), "--gamma", "1", "--out", str(tmp_path / "b.csv"),
                "--summary", str(summary)], capsys)[0] == 0
    data = json.loads(summary.read_text())
    assert data["final_populations"]["P3"] == pytest.approx(0.93, abs=0.02)
    assert data["lost_population"] > 0.05


def test_simulate_empty_train(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"pairs": [], "gamma": 0.3, "grid": {"t_start": 0, "t_end": 1, "dt": 0.01}}))
    code, out, _ = run(["simulate", "--train", str(path)], capsys)
    assert code == 0
    rows = list(csv.reader(out.splitlines()))[1:]
    assert len(rows) == 101
    assert all(r[3:] == ["1.000000", "0.000000", "0.000000", "1.000000"] for r in rows)


def test_simulate_reads_stdin(tmp_path, capsys, monkeypatch):
    import io

    train = design(tmp_path, capsys, "1")
    monkeypatch.setattr("sys.stdin", io.StringIO(train.read_text()))
    summary = tmp_path / "s.json"
    assert run(["simulate", "--train", "-", "--out", str(tmp_path / "x.csv"), "--summary", str(summary)], capsys)[0] == 0
    assert json.loads(summary.read_text())["final_populations"]["P3"] == pytest.approx(1.0, abs=1e-4)


def test_simulate_errors(tmp_path, capsys):
    assert run(["simulate", "--train", str(tmp_path / "missing.json")], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["simulate", "--train", str(bad)], capsys)[0] == 2
    train = design(tmp_path, capsys, "1")
    assert run(["simulate", "--train", str(train), "--dt", "0.05"], capsys)[0] == 3


def test_csv_is_bit_stable(tmp_path, capsys):
    train = design(tmp_path, capsys, "3")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run(["simulate", "--train", str(train), "--gamma", "0.5", "--out", str(path), "--summary",
             str(tmp_path / "s.json")], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_design_roundtrip(tmp_path, capsys):
    from lambdatrain.outputs import train_from_json, train_to_json

    path = design(tmp_path, capsys, "4", "--spacing", "7", "--gamma", "0.25")
    train = train_from_json(path.read_text())
    assert train_from_json(train_to_json(train)) == train
    assert train.gamma == 0.25 and train.spacing == 7.0
    assert [p.center for p in train.pairs] == [0.0, 7.0, 14.0, 21.0]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--claim", "p2max", "--pairs", "2"],
        ["verify", "--claim", "optimal-angles", "--pairs", "2", "--grid-points", "720"],
        ["verify", "--claim", "crosscheck", "--pairs", "5"],
        ["verify", "--claim", "equal-maxima", "--pairs", "4"],
    ],
)
def test_verify_passes(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert "[PASS]" in out and "[FAIL]" not in out
    report = json.loads(out[out.index("{"):])
    assert report["pass"] is True


def test_verify_p2max_reports_value(capsys):
    _, out, _ = run(["verify", "--claim", "p2max", "--pairs", "2"], capsys)
    assert "0.146447" in out


def test_verify_failure_exit_1(capsys):
    # pi/4 is not on an odd grid, so no single-pair tuple reaches complete transfer
    code, out, _ = run(["verify", "--claim", "optimal-angles", "--pairs", "1", "--grid-points", "91"], capsys)
    assert code == 1
    assert "[FAIL]" in out


def test_sweep(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, _, _ = run(["sweep", "--pairs-from", "1", "--pairs-to", "8", "--gamma", "1", "--out", str(out_path)], capsys)
    assert code == 0
    rows = list(csv.DictReader(out_path.open()))
    assert [int(r["N"]) for r in rows] == list(range(1, 9))
    lossy = [float(r["final_P3_lossy"]) for r in rows]
    assert all(b > a for a, b in zip(lossy, lossy[1:]))
    assert lossy[0] == pytest.approx(0.63, abs=0.02) and lossy[-1] == pytest.approx(0.93, abs=0.02)
    for r in rows:
        assert float(r["final_P3_lossless"]) == pytest.approx(1.0, abs=1e-4)
        assert 0.999 <= float(r["p2_max_numeric"]) / float(r["p2_max_analytic"]) <= 1.001


def test_sweep_parallel_matches_serial(capsys):
    _, serial, _ = run(["sweep", "--pairs-from", "1", "--pairs-to", "4", "--gamma", "0"], capsys)
    _, parallel, _ = run(["sweep", "--pairs-from", "1", "--pairs-to", "4", "--gamma", "0", "--jobs", "3"], capsys)
    assert serial == parallel
