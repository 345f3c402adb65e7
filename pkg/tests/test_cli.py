import csv
import io
import json
import math
from importlib import resources

import jsonschema
import pytest

from fockoptics.fock import ModeScale
from fockoptics.cli import SCENARIOS, ConfigError, build_parser, main, parse_complex, parse_sweep, resolve

SCHEMA = json.loads(resources.files("fockoptics").joinpath("schema/run.schema.json").read_text())


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "text, value",
    [("1+2i", 1 + 2j), ("-0.5i", -0.5j), ("3", 3), ("1e-3-2j", 0.001 - 2j), ("2@0", 2), (" 1 + 1i ", 1 + 1j)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == pytest.approx(value)


def test_parse_complex_polar():
    assert parse_complex(f"2@{math.pi / 2}") == pytest.approx(2j)


@pytest.mark.parametrize("text", ["abc", "1+", "inf", "nan+1i", "1@x"])
def test_parse_complex_rejects(text):
    with pytest.raises(ConfigError):
        parse_complex(text)


def test_parse_sweep():
    assert parse_sweep("0:1:5") == (0.0, 1.0, 5)
    assert parse_sweep({"start": 0, "stop": 2, "points": 3}) == (0.0, 2.0, 3)
    for bad in ("0:1:1", "0:1", "a:b:c", "0:inf:3"):
        with pytest.raises(ConfigError):
            parse_sweep(bad)


@pytest.mark.parametrize("scenario", sorted(SCENARIOS))
def test_every_scenario_passes_and_validates(capsys, scenario):
    code, out, _ = run_cli(capsys, scenario, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["pass"] and doc["scenario"] == scenario
    assert doc["max_deviation"] == max(r["deviation"] for r in doc["rows"])


@pytest.mark.parametrize("scenario", sorted(SCENARIOS))
def test_zero_tolerance_fails(capsys, scenario):
    code, _, err = run_cli(capsys, scenario, "--tol", "0")
    assert code == 2
    assert "verification failed" in err


@pytest.mark.parametrize("scenario", ["homodyne", "mz-sweep", "splitter"])
def test_output_is_deterministic(capsys, scenario):
    first = run_cli(capsys, scenario)[1]
    second = run_cli(capsys, scenario)[1]
    assert first == second


def test_csv_layout(capsys):
    code, out, _ = run_cli(capsys, "mz-sweep", "--n", "4", "--points", "9")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 9
    for r in rows:
        phi = float(r["phi"])
        assert float(r["port3"]) == pytest.approx(4 * math.sin(phi / 2) ** 2, abs=1e-12)
    assert "deviation" in rows[0]
    assert rows[1]["phi"] == f"{2 * math.pi / 8:.17g}"


def test_phase_variance_vacuum(capsys):
    code, out, _ = run_cli(capsys, "phase-variance", "--gammasq", "0", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)["rows"]
    assert row["value"] == pytest.approx(math.pi**2 / 3, abs=1e-14)


def test_g2_coherent(capsys):
    code, out, _ = run_cli(capsys, "g2", "--state", "coherent", "--gamma", "2", "--format", "json")
    assert code == 0
    rows = {r["quantity"]: r for r in json.loads(out)["rows"]}
    assert rows["g2"]["numeric"] == pytest.approx(1.0, abs=1e-12)


def test_g2_number_state(capsys):
    code, out, _ = run_cli(capsys, "g2", "--state", "number", "--n", "4", "--format", "json")
    rows = {r["quantity"]: r for r in json.loads(out)["rows"]}
    assert code == 0 and rows["g2"]["analytic"] == 0.75


def test_scenario_flag_and_positional(capsys):
    assert run_cli(capsys, "--scenario", "g2")[0] == 0
    assert run_cli(capsys, "g2", "--scenario", "g2")[0] == 0
    assert run_cli(capsys, "g2", "--scenario", "splitter")[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nope"],
        ["homodyne", "--gamma2", "x"],
        ["homodyne", "--sweep", "0:1:1"],
        ["g2", "--state", "weird"],
        ["g2", "--bogus"],
        ["coherent-stats", "--gamma", "3", "--nmax", "-2"],
        ["phase-variance", "--gammasq", "-1"],
        ["g2", "--tol", "-1"],
        ["g2", "--omega", "1e15"],
    ],
)
def test_invalid_configs_exit_1(capsys, argv):
    assert run_cli(capsys, *argv)[0] == 1


def test_physical_units_scale_tolerances(capsys):
    code, out, _ = run_cli(capsys, "homodyne", "--omega", "3e15", "--volume", "1e-15", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    scale = ModeScale(omega=3e15, volume=1e-15).scale
    assert rows[0]["quantity"] == "mean" and rows[0]["tol"] == pytest.approx(1e-8 * scale)
    assert rows[1]["tol"] == pytest.approx(1e-8 * scale**2)


def test_config_file_and_precedence(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"scenario": "mz-sweep", "n": 3, "points": 5, "format": "json"}))
    code, out, _ = run_cli(capsys, "--config", str(cfg))
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 5 and doc["config"]["n"] == 3
    code, out, _ = run_cli(capsys, "--config", str(cfg), "--points", "3", "--format", "csv")
    assert code == 0 and len(list(csv.DictReader(io.StringIO(out)))) == 3

    monkeypatch.setenv("FOCKOPTICS_OUT_DIR", str(tmp_path / "env"))
    assert run_cli(capsys, "--config", str(cfg))[1] == ""
    assert json.loads((tmp_path / "env" / "mz-sweep.json").read_text())["pass"]
    cfg.write_text(json.dumps({"scenario": "g2", "out": str(tmp_path / "cfg.csv")}))
    run_cli(capsys, "--config", str(cfg))
    assert (tmp_path / "cfg.csv").exists()
    run_cli(capsys, "--config", str(cfg), "--out", str(tmp_path / "flag.csv"))
    assert (tmp_path / "flag.csv").exists()


@pytest.mark.parametrize("content", ["{", "[1, 2]", '{"unknown": 1}'])
def test_bad_config_file(tmp_path, capsys, content):
    cfg = tmp_path / "bad.json"
    cfg.write_text(content)
    assert run_cli(capsys, "g2", "--config", str(cfg))[0] == 1


def test_resolve_defaults():
    args = build_parser().parse_args(["g2"])
    cfg = resolve(args, env={})
    assert cfg["scenario"] == "g2" and cfg["format"] == "csv" and cfg["out"] is None
