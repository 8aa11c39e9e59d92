import json

import numpy as np
import pytest

from ssdstbc.cli import _parse_snr, canonical_json, main
from ssdstbc.codes import code_from_json

DP_4 = 0.16718507624410542


def run_cli(*argv):
    return main(list(argv))


def test_canonical_json_float_format():
    text = canonical_json({"x": 0.1, "y": [1.0, 2.5]})
    assert '"x": 0.10000000000000001' in text
    assert text.endswith("\n")
    # integers and strings pass through untouched
    assert canonical_json({"n": 4}) == '{\n "n": 4\n}\n'


def test_canonical_json_sorts_keys():
    text = canonical_json({"b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')


def test_canonical_json_rejects_non_finite():
    with pytest.raises(ValueError, match="non-finite"):
        canonical_json({"x": float("nan")})


@pytest.mark.parametrize(
    "text,expected",
    [
        ("10", (10.0,)),
        ("0:4:20", (0.0, 4.0, 8.0, 12.0, 16.0, 20.0)),
        ("5:2.5:10", (5.0, 7.5, 10.0)),
    ],
)
def test_parse_snr(text, expected):
    assert _parse_snr(text) == expected


def test_parse_snr_rejects_malformed():
    with pytest.raises(ValueError):
        _parse_snr("0:4")
    with pytest.raises(ValueError):
        _parse_snr("0:-4:20")


def test_construct_round_trip_is_byte_identical(tmp_path):
    path = tmp_path / "code.json"
    assert run_cli("construct", "--family", "cuw", "--a", "2",
                   "--out", str(path)) == 0
    raw = path.read_text()
    reparsed = code_from_json(json.loads(raw))
    from ssdstbc.codes import code_to_json

    assert canonical_json(code_to_json(reparsed)) == raw


def test_construct_writes_to_stdout_without_out(capsys):
    assert run_cli("construct", "--family", "alamouti") == 0
    captured = capsys.readouterr()
    obj = json.loads(captured.out)
    assert obj["label"] == "alamouti"
    assert "constructed alamouti" in captured.err


def test_construct_with_mixing_transform(tmp_path):
    path = tmp_path / "mixed.json"
    assert run_cli("construct", "--family", "cuw", "--a", "1",
                   "--tnu", "1", "1", "--out", str(path)) == 0
    obj = json.loads(path.read_text())
    assert obj["label"] == "tnu(1,1)-cuw-ssd-2x2"


def test_classify_pipeline(tmp_path):
    code_path = tmp_path / "code.json"
    verdict_path = tmp_path / "verdict.json"
    run_cli("construct", "--family", "ciod", "--a", "2", "--out", str(code_path))
    assert run_cli("classify", "--code", str(code_path),
                   "--out", str(verdict_path)) == 0
    verdict = json.loads(verdict_path.read_text())
    assert verdict["class_name"] == "NU-COD"
    assert verdict["meta"]["code"] == "ciod-4x4"


def test_divprod_pipeline_matches_frozen_value(tmp_path):
    code_path = tmp_path / "code.json"
    pts_path = tmp_path / "points.json"
    out_path = tmp_path / "dp.json"
    run_cli("construct", "--family", "cuw", "--a", "2", "--out", str(code_path))
    run_cli("constellation", "--kind", "rotated", "--q", "4",
            "--out", str(pts_path))
    assert run_cli("divprod", "--code", str(code_path),
                   "--constellation", str(pts_path),
                   "--out", str(out_path)) == 0
    report = json.loads(out_path.read_text())
    assert report["dp"] == pytest.approx(DP_4, abs=1e-14)
    assert report["method"] == "closed-form"


def test_divprod_brute_force_small_case(tmp_path):
    code_path = tmp_path / "code.json"
    pts_path = tmp_path / "points.json"
    out_path = tmp_path / "dp.json"
    run_cli("construct", "--family", "cuw", "--a", "1", "--out", str(code_path))
    run_cli("constellation", "--kind", "rotated", "--q", "4",
            "--out", str(pts_path))
    assert run_cli("divprod", "--code", str(code_path),
                   "--constellation", str(pts_path), "--brute-force",
                   "--out", str(out_path)) == 0
    report = json.loads(out_path.read_text())
    assert report["method"] == "brute-force"
    assert report["dp"] == pytest.approx(0.23643540225079382, abs=1e-9)


def test_constellation_rect_points(tmp_path):
    path = tmp_path / "rect.json"
    assert run_cli("constellation", "--kind", "rect", "--q", "4",
                   "--out", str(path)) == 0
    pts = json.loads(path.read_text())
    assert sorted(map(tuple, pts)) == [
        (-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0),
    ]


def test_constellation_normalization_flag(tmp_path):
    path = tmp_path / "pts.json"
    run_cli("constellation", "--kind", "square-derived", "--q", "8",
            "--normalize", "sum-energy-1", "--out", str(path))
    pts = json.loads(path.read_text())
    energy = sum(re * re + im * im for re, im in pts)
    assert energy == pytest.approx(1.0)


def test_constellation_plot_requires_out():
    assert run_cli("constellation", "--kind", "rect", "--q", "4",
                   "--plot") == 1


def test_constellation_plot_renders_png(tmp_path):
    path = tmp_path / "pts.json"
    assert run_cli("constellation", "--kind", "rotated", "--q", "8",
                   "--plot", "--out", str(path)) == 0
    png = tmp_path / "pts.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_table_command_csv_and_figure(tmp_path):
    path = tmp_path / "table.csv"
    assert run_cli("table1", "--out", str(path)) == 0
    lines = path.read_text().strip().split("\n")
    data = [ln for ln in lines if not ln.startswith("#")]
    assert data[0] == "constellation,size,dp"
    assert len(data) == 6
    values = {}
    for ln in data[1:]:
        kind, q, dp = ln.split(",")
        values[(kind, int(q))] = float(dp)
    assert values[("square-derived", 4)] == pytest.approx(0.1672, abs=5e-4)
    assert values[("rectangular", 32)] == pytest.approx(0.0167, abs=5e-4)
    assert (tmp_path / "table.png").exists()


def test_table_command_no_figure(tmp_path):
    path = tmp_path / "table.csv"
    assert run_cli("table1", "--no-figure", "--out", str(path)) == 0
    assert not (tmp_path / "table.png").exists()


def test_simulate_pipeline(tmp_path):
    code_path = tmp_path / "code.json"
    pts_path = tmp_path / "pts.json"
    csv_path = tmp_path / "run.csv"
    run_cli("construct", "--family", "cuw", "--a", "1", "--out", str(code_path))
    run_cli("constellation", "--kind", "rect", "--q", "4",
            "--out", str(pts_path))
    assert run_cli("simulate", "--code", str(code_path),
                   "--constellation", str(pts_path),
                   "--snr", "5:5:15", "--trials", "400", "--seed", "11",
                   "--out", str(csv_path)) == 0
    text = csv_path.read_text()
    lines = text.strip().split("\n")
    header = [ln for ln in lines if not ln.startswith("#")][0]
    assert header == "snr_db,trials,sym_err,bit_err,ser,ber,ci95"
    assert (tmp_path / "run.png").exists()

    # identical invocation reproduces identical bytes
    second = tmp_path / "run2.csv"
    run_cli("simulate", "--code", str(code_path),
            "--constellation", str(pts_path),
            "--snr", "5:5:15", "--trials", "400", "--seed", "11",
            "--no-figure", "--out", str(second))
    assert second.read_text() == text


def test_simulate_rejects_bad_trials(tmp_path):
    code_path = tmp_path / "code.json"
    pts_path = tmp_path / "pts.json"
    run_cli("construct", "--family", "cuw", "--a", "1", "--out", str(code_path))
    run_cli("constellation", "--kind", "rect", "--q", "4",
            "--out", str(pts_path))
    assert run_cli("simulate", "--code", str(code_path),
                   "--constellation", str(pts_path),
                   "--snr", "10", "--trials", "0") == 1


def test_bound_search_report(tmp_path):
    path = tmp_path / "bound.json"
    assert run_cli("bound-search", "--a", "1", "--report", str(path)) == 0
    report = json.loads(path.read_text())
    assert report["k_max"] == 2
    assert report["witness_class"] == "UW-SSD"
    assert report["max_anticommuting_family"] == 3
    assert {c["k_target"] for c in report["claims"]} == {3, 4}
    assert all(c["confirmed"] for c in report["claims"])
    assert "not a proof" in report["universe"]


def test_clifford_report(tmp_path):
    path = tmp_path / "gens.json"
    assert run_cli("clifford", "--a", "2", "--out", str(path)) == 0
    obj = json.loads(path.read_text())
    assert len(obj["generators"]) == 5
    assert len(obj["family"]) == 3
    first = obj["generators"][0]
    m = np.array(
        [complex(re, im) for re, im in first["entries"]]
    ).reshape(first["rows"], first["cols"])
    assert np.array_equal(m.conj().T, -m)


def test_unknown_subcommand_exits_one():
    assert run_cli("frobnicate") == 1


def test_missing_required_argument_exits_one():
    assert run_cli("classify") == 1


def test_missing_file_exits_two(tmp_path):
    assert run_cli("classify", "--code", str(tmp_path / "nope.json")) == 2


def test_malformed_json_file_exits_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert run_cli("classify", "--code", str(bad)) == 2


def test_malformed_code_object_exits_one(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2}')
    assert run_cli("classify", "--code", str(bad)) == 1
