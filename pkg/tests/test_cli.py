"""Config handling, deterministic tables/reports, SVG output, exit codes."""

import dataclasses
import json
import math
import xml.dom.minidom

import numpy as np
import pytest

import hypfourier.verify
from hypfourier import DomainError
from hypfourier.cli import (
    RunConfig,
    cmd_plot,
    cmd_table,
    main,
    report_json,
    run_suite,
)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def test_config_round_trip():
    cfg = RunConfig(dimensions=(3,), lambdas=(8.0, 16.0, 32.0), tolerance=0.2)
    assert RunConfig.from_mapping(cfg.to_mapping()) == cfg


def test_config_rejects_unknown_keys():
    with pytest.raises(DomainError):
        RunConfig.from_mapping({"dims": [2]})
    with pytest.raises(DomainError):
        RunConfig(quadrature={"r_mx": 10.0})


def test_config_validation():
    with pytest.raises(DomainError):
        RunConfig(dimensions=(1,))
    with pytest.raises(DomainError):
        RunConfig(lambdas=(8.0, -1.0))
    with pytest.raises(DomainError):
        RunConfig(tolerance=1.5)
    with pytest.raises(DomainError):
        RunConfig(p_values=(0.5,))


def test_config_from_json(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"dimensions": [3], "seed": 7}))
    cfg = RunConfig.from_json(path)
    assert cfg.dimensions == (3,) and cfg.seed == 7


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


def test_tables_are_deterministic(tmp_path):
    for kind in ("c-function", "exponents"):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        cfg = RunConfig(dimensions=(2, 3), lambdas=(1.0, 4.0, 16.0))
        cmd_table(kind, cfg, a)
        cmd_table(kind, cfg, b)
        assert a.read_bytes() == b.read_bytes()


def test_c_function_table_values(tmp_path):
    path = tmp_path / "cf.csv"
    cmd_table("c-function", RunConfig(dimensions=(3,), lambdas=(4.0,)), path)
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    assert row["d"] == "3" and float(row["lambda"]) == 4.0
    # d=3: density lam^2, |c| = 1/lam
    assert float(row["density"]) == pytest.approx(16.0, rel=1e-14)
    assert float(row["abs_c"]) == pytest.approx(0.25, rel=1e-14)


def test_phi_table_contains_closed_form(tmp_path):
    path = tmp_path / "phi.csv"
    cmd_table("phi", RunConfig(dimensions=(3,), lambdas=(2.0,)), path)
    rows = [line.split(",") for line in path.read_text().strip().splitlines()]
    header, body = rows[0], rows[1:]
    r_col, v_col = header.index("r"), header.index("phi")
    want = math.sin(2.0) / (2.0 * math.sinh(1.0))
    got = [float(r[v_col]) for r in body if float(r[r_col]) == 1.0]
    assert got and got[0] == pytest.approx(want, rel=1e-12)


def test_table_write_failure_is_reported(tmp_path):
    with pytest.raises(OSError):
        cmd_table("phi", RunConfig(), tmp_path / "missing_dir" / "phi.csv")


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------


def _zero_walltimes(text: str) -> str:
    doc = json.loads(text)
    for rec in doc["records"]:
        rec["wall_time_s"] = 0.0
    doc["summary"]["wall_time_s"] = 0.0
    return json.dumps(doc, sort_keys=True)


def test_report_is_reproducible_modulo_timing():
    cfg = RunConfig(dimensions=(3,))
    one = report_json(cfg, run_suite(cfg, "resolvent"))
    two = report_json(cfg, run_suite(cfg, "resolvent"))
    assert _zero_walltimes(one) == _zero_walltimes(two)


def test_records_are_sorted_and_pass():
    cfg = RunConfig(dimensions=(3,))
    records = run_suite(cfg, "resolvent")
    names = [r.experiment for r in records]
    assert names == sorted(names)
    assert all(r.passed for r in records)


def test_unknown_suite_rejected():
    with pytest.raises(DomainError):
        run_suite(RunConfig(), "everything")


def test_failures_are_embedded_not_raised(monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError("synthetic failure")

    monkeypatch.setattr(hypfourier.verify, "run_smoothing_scaling", boom)
    records = run_suite(RunConfig(dimensions=(3,)), "smoothing")
    assert records and not any(r.passed for r in records)
    assert any("synthetic failure" in r.error for r in records)
    # non-finite sentinel fields serialize as null, keeping the JSON valid
    doc = json.loads(report_json(RunConfig(), records))
    assert doc["records"][0]["measured"] is None


# ---------------------------------------------------------------------------
# plots
# ---------------------------------------------------------------------------


def test_loglog_plot_metadata(tmp_path):
    csv = tmp_path / "power.csv"
    lines = ["lambda,value,predicted"]
    for lam in (8.0, 16.0, 32.0, 64.0):
        lines.append(f"{lam},{0.7 * lam ** 1.5},1.5")
    csv.write_text("\n".join(lines) + "\n")
    out = tmp_path / "power.svg"
    cmd_plot("loglog", str(csv), RunConfig(), out)
    svg = out.read_text()
    xml.dom.minidom.parseString(svg)  # well-formed
    slope = float(svg.split('data-fitted-slope="')[1].split('"')[0])
    assert slope == pytest.approx(1.5, abs=1e-12)
    assert 'data-predicted-slope="1.5"' in svg


def test_region_diagram_caption_lines(tmp_path):
    out = tmp_path / "regions.svg"
    cmd_plot("region-diagram", None, RunConfig(dimensions=(3,)), out)
    svg = out.read_text()
    xml.dom.minidom.parseString(svg)
    for needle in (
        "1/s + 1/q = 1",  # the dashed reflection line
        "1/q - 1/s",  # gap caption
        'data-region="I"',
        'data-region="II"',
        'data-region="III"',
        'data-region="IV"',
        "excluded-corner",
    ):
        assert needle in svg, needle
    # both panels: the derivative diagram never shows a III label
    panels = svg.split('data-diagram="dresolvent"')
    assert len(panels) == 2
    assert 'data-region="III"' not in panels[1]


def test_malformed_csv_reports_line_number(tmp_path):
    csv = tmp_path / "bad.csv"
    csv.write_text("lambda,value\n8.0,1.0\nnot-a-number,2.0\n")
    with pytest.raises(DomainError, match="line 3"):
        cmd_plot("loglog", str(csv), RunConfig(), tmp_path / "out.svg")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def test_main_table_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "cf.csv"
    assert main(["table", "c-function", "--d", "3", "--lambda", "4", "--out", str(out)]) == 0
    assert out.exists()
    assert main(["table", "nope"]) == 2  # argparse rejects the kind
    assert main(["verify", "--suite", "everything"]) == 2
    capsys.readouterr()


def test_main_verify_resolvent(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["verify", "--suite", "resolvent", "--d", "3", "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["failed"] == 0
    assert "PASS" in captured.err


def test_main_verify_failure_exit_code(monkeypatch, tmp_path, capsys):
    def boom(*args, **kwargs):
        raise RuntimeError("synthetic failure")

    monkeypatch.setattr(hypfourier.verify, "run_smoothing_scaling", boom)
    out = tmp_path / "report.json"
    code = main(["verify", "--suite", "smoothing", "--d", "3", "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 1
    assert "FAIL" in captured.err


def test_main_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert main(["verify", "--config", str(cfg)]) == 2
    capsys.readouterr()
