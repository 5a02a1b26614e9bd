import json

import pytest

from ringwalk import cli


def run_cli(args):
    return cli.run(args)


def test_enum_row_count(capsys):
    assert run_cli(["enum", "--k", "2", "--n", "4"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 6
    assert rows[0]["parts"] == "1,0"


def test_qlr_cyclic_landmark(capsys):
    assert run_cli(["qlr", "--k", "1", "--n", "2",
                    "--lambda", "1", "--mu", "1"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows == [{"lambda": "1", "mu": "1", "nu": "", "d": 1, "coeff": 1}]


def test_count_subcommand(capsys):
    assert run_cli(["count", "--k", "1", "--n", "2", "--d", "3",
                    "--class", "1", "--class", "1", "--class", "1",
                    "--class", "1", "--class", "1", "--class", "1",
                    "--class", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["count"] == "1"


def test_conv_subcommand(capsys):
    assert run_cli(["conv", "--k", "2", "--n", "4", "dirac:1,0", "pieri"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert set(out) == {"2,0"}
    assert out["2,0"] == pytest.approx(1.0)


def test_measure_spec_mix(sd_cache):
    sd = sd_cache(2, 4)
    mu = cli.parse_measure_spec("mix:1*dirac:1,0+3*dirac:3,2", sd)
    assert mu.weight_of(sd.vertices[0]) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        cli.parse_measure_spec("nonsense:1", sd)


def test_kernel_subcommand(capsys):
    assert run_cli(["kernel", "--k", "1", "--n", "3", "--source", "1",
                    "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "from,prob,to"
    assert len(lines) == 4


def test_validate_local_limit_writes_report(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli(["validate", "--check", "local-limit", "--k", "2",
                    "--n", "8", "--m", "64", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert "sup_error" in payload
    assert payload["off_class_mass"] <= 1e-12


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["validate", "--check", "fourier", "--k", "2", "--n", "8",
            "--m", "32", "--seed", "7"]
    assert run_cli(argv + ["--out", str(a)]) == 0
    assert run_cli(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_heat_subcommand(capsys):
    assert run_cli(["heat", "--u", "2.2,0.9", "--t", "0.5", "--points", "3"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 3
    assert all(float(r["tail_bound"]) < 1e-8 for r in rows)


def test_cache_build_and_inspect(tmp_path, capsys):
    assert run_cli(["cache", "--k", "2", "--n", "5", "build",
                    "--dir", str(tmp_path)]) == 0
    capsys.readouterr()
    assert run_cli(["cache", "--k", "2", "--n", "5", "inspect",
                    "--dir", str(tmp_path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["vertices"] == 10


def test_usage_errors_exit_2(capsys):
    assert run_cli(["bogus"]) == 2
    assert run_cli(["enum", "--k", "9", "--n", "4"]) == 2
    capsys.readouterr()


def test_validate_corollary_exit_codes(tmp_path):
    code = run_cli(["validate", "--check", "corollary", "--k", "2", "--n", "8",
                    "--d", "4", "--end-class", "3,3",
                    "--out", str(tmp_path / "c.json")])
    payload = json.loads((tmp_path / "c.json").read_text())
    assert code in (0, 1)
    assert "ratio" in payload
