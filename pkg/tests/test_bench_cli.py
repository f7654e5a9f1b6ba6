import csv

import pytest

from flashvault.bench import (ROW_FIELDS, Bench, ReportRow, Scenario, default_scenario, overhead_summary,
                              rows_csv, run_matrix)
from flashvault.calibration import Calibration
from flashvault.cli import main
from flashvault.errors import InvalidRequestError
from flashvault.sim import CATEGORIES

# a short plane keeps the fill quick while a 15 MB image still fits
SMALL_INI = "[ssd]\nblocks = 48\n"


@pytest.fixture(scope="module")
def small_cfg(tmp_path_factory):
    p = tmp_path_factory.mktemp("cfg") / "small.ini"
    p.write_text(SMALL_INI)
    return p


@pytest.fixture(scope="module")
def small_bench():
    return Bench(_small_cal(), seed=3)


def _small_cal():
    cal = Calibration.default()
    cal.update(Calibration.from_text(SMALL_INI))
    return cal


def test_report_row_bounds_and_format():
    br = dict.fromkeys(CATEGORIES, 0.0)
    br["nand"] = 1500.0
    r = ReportRow("tamper_log", "RSA", 1024, "FV", br, 1.5, (2.0, 1.0), op="sign")
    assert r.bound_met == (True, False)
    assert r.components_sum_ms() == pytest.approx(r.total_ms)
    line = r.as_csv()
    assert len(line) == len(ROW_FIELDS)
    assert line[-2:] == ["2;1", "true;false"]


@pytest.mark.parametrize("kw", [dict(algorithms=()), dict(sizes=(0,)), dict(placements=()),
                                dict(bounds=(-1,)), dict(kind="nope")])
def test_scenario_validation(kw):
    base = dict(kind="bulk_cipher", algorithms=("AES",), sizes=(4096,))
    with pytest.raises(InvalidRequestError):
        Scenario(**{**base, **kw})


def test_rows_components_sum_to_total(small_bench):
    rows = small_bench.rows(default_scenario("tamper_log", ("FV", "CPU")))
    assert len(rows) == 2 * 5 * 2
    for r in rows:
        assert r.components_sum_ms() == pytest.approx(r.total_ms, rel=1e-9)
        assert r.bound_met == tuple(r.total_ms <= b for b in r.bounds)


def test_run_matrix_is_deterministic(tmp_path, small_bench):
    sc = default_scenario("bulk_cipher", ("FV", "NCP"))
    a = run_matrix(sc, tmp_path / "a", small_bench, plot=False)["csv"].read_bytes()
    b = run_matrix(sc, tmp_path / "b", Bench(_small_cal(), seed=3), plot=False)["csv"].read_bytes()
    assert a == b
    rows = list(csv.DictReader(a.decode().splitlines()))
    assert len(rows) == 2 * 2 * 7 * 2 and list(rows[0]) == ROW_FIELDS


def test_ftl_overhead_rows(small_bench):
    rows = small_bench.ftl_overhead()
    assert len(rows) == 2 * 7 + 2 * 5
    summ = overhead_summary(rows)
    assert set(summ) == {"program", "read", "verify", "sign"}
    for r in rows:
        assert r["overhead_pct"] == pytest.approx((r["steady_ms"] / r["fresh_ms"] - 1) * 100)


def test_cli_exit_codes(tmp_path, small_cfg, capsys):
    out = str(tmp_path / "o")
    assert main(["budget", "--out-dir", out]) == 0
    assert "41.73" in capsys.readouterr().out
    common = ["--config", str(small_cfg), "--out-dir", out, "--no-plot"]
    # the CPU placement misses the boot bound at both sizes
    assert main(["boot", "--placement", "CPU", "--enforce-bounds"] + common) == 1
    assert "bound violated" in capsys.readouterr().err
    assert main(["boot", "--placement", "CPU"] + common) == 0
    assert main(["boot", "--placement", "FV", "--enforce-bounds"] + common) == 0
    assert main(["log", "--placement", "XPU"] + common) == 2
    assert main(["log", "--config", str(tmp_path / "missing.ini"), "--out-dir", out]) == 2


def test_cli_seed_and_steady_flag(tmp_path, small_cfg):
    common = ["--config", str(small_cfg), "--no-plot", "--placement", "FV,NCP"]
    assert main(["cipher", "--seed", "5", "--out-dir", str(tmp_path / "a")] + common) == 0
    assert main(["cipher", "--seed", "5", "--out-dir", str(tmp_path / "b")] + common) == 0
    assert (tmp_path / "a" / "bulk_cipher.csv").read_bytes() == (tmp_path / "b" / "bulk_cipher.csv").read_bytes()
    assert main(["log", "--steady-state", "--out-dir", str(tmp_path / "a")] + common) == 0
    text = (tmp_path / "a" / "tamper_log_steady.csv").read_text()
    assert ",steady," in text and ",fresh," not in text


def test_rows_csv_header_only_for_empty():
    assert rows_csv([]).strip() == ",".join(ROW_FIELDS)
