import math

import pytest

from multiconn import cli
from multiconn import outage as outage_mod
from multiconn.field_trial import load_trace
from multiconn.selftest import run_selftest


def _run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def _rows(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


class TestOutageCommand:
    def test_basic_sweep(self, capsys):
        code, out = _run(capsys, "outage", "--n-links", "2", "--combiner",
                         "jd", "--method", "asymptotic", "--rate", "1",
                         "--snr-db-range", "0:40:5")
        assert code == 0
        header, rows = _rows(out)
        assert header == ["snr_db", "jd_n2_asymptotic", "flags"]
        assert len(rows) == 5
        assert float(rows[0][0]) == 0.0
        # Outage decreases along the SNR grid.
        values = [float(r[1]) for r in rows]
        assert values == sorted(values, reverse=True)

    def test_mc_column_carries_ci(self, capsys):
        code, out = _run(capsys, "outage", "--n-links", "2", "--combiner",
                         "sc", "--method", "mc", "--mc-samples", "2000",
                         "--snr-db-range", "0:10:2", "--rate", "1")
        assert code == 0
        header, rows = _rows(out)
        assert header == ["snr_db", "sc_n2_mc", "sc_n2_mc_ci", "flags"]
        assert float(rows[0][2]) > 0

    def test_saturated_flag_surfaces(self, capsys):
        code, out = _run(capsys, "outage", "--n-links", "2", "--combiner",
                         "sco", "--method", "asymptotic", "--rate", "4",
                         "--snr-db-range", "0:40:3")
        assert code == 0
        _, rows = _rows(out)
        assert "saturated" in rows[0][-1]

    def test_file_output_and_gnuplot(self, tmp_path, capsys):
        out_path = tmp_path / "sweep.csv"
        code, _ = _run(capsys, "outage", "--combiner", "jd", "--method",
                       "asymptotic", "--out", str(out_path), "--gnuplot")
        assert code == 0
        assert out_path.exists()
        companion = out_path.with_suffix(".gp")
        assert companion.exists()
        assert out_path.name in companion.read_text()

    def test_rerun_is_byte_identical(self, tmp_path, capsys):
        args = ["outage", "--combiner", "jd", "--method", "mc",
                "--mc-samples", "2000", "--seed", "5",
                "--snr-db-range", "0:20:3"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main(args + ["--out", str(a)]) == 0
        assert cli.main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestValidationExits:
    @pytest.mark.parametrize("argv", [
        ("outage", "--snr-db-range", "40:0:5"),
        ("outage", "--snr-db-range", "0:40"),
        ("outage", "--n-links", "0"),
        ("outage", "--rate", "-1"),
        ("outage", "--combiner", "sc", "--method", "bound"),
        ("outage", "--preset", "nope"),
        ("outage", "--combiner", "jd", "--method", "exact",
         "--n-links", "6"),
        ("outage", "--n-links", "2", "--distances", "1.0"),
        ("throughput", "--combiner", "sc", "--method", "paper-approx"),
        ("throughput", "--outage", "2.0"),
        ("gain", "--n-links", "1"),
        ("gain", "--outage", "0"),
        ("gain", "--rate-range", "0:25:5"),
        ("dmt", "--steps", "1"),
        ("cdf",),
        ("cdf", "--rate", "1", "--outage", "1e-3"),
    ])
    def test_exit_code_2(self, capsys, argv):
        assert cli.main(list(argv)) == 2

    def test_missing_trace_is_io_error(self, capsys):
        assert cli.main(["cdf", "--trace", "/nonexistent/trace.csv",
                         "--rate", "1"]) == 4


class TestThroughputCommand:
    def test_preset_has_undefined_low_snr_cells(self, capsys):
        code, out = _run(capsys, "throughput", "--preset", "fig2b",
                         "--snr-db-range", "10:20:2")
        assert code == 0
        header, rows = _rows(out)
        assert header[0] == "snr_db"
        assert any("undefined" in r[-1] for r in rows)
        assert any(v == "nan" for r in rows for v in r[1:-1])

    def test_exact_tracks_asymptotic_at_high_snr(self, capsys):
        code, out = _run(capsys, "throughput", "--combiner", "mrc",
                         "--method", "exact", "--method", "asymptotic",
                         "--outage", "1e-3", "--snr-db-range", "55:60:2")
        assert code == 0
        _, rows = _rows(out)
        exact, asym = float(rows[-1][1]), float(rows[-1][2])
        assert exact == pytest.approx(asym, rel=0.05)


class TestGainCommand:
    def test_fig3b_identity(self, capsys):
        code, out = _run(capsys, "gain", "--preset", "fig3b")
        assert code == 0
        header, rows = _rows(out)
        for n in (2, 3, 4):
            sc_col = header.index(f"jd_sc_n{n}_db")
            mrc_col = header.index(f"jd_mrc_n{n}_db")
            expected = 10.0 * math.log10(math.factorial(n)) / n
            for row in rows:
                gap = float(row[sc_col]) - float(row[mrc_col])
                assert gap == pytest.approx(expected, abs=1e-9)

    def test_fig3a_columns(self, capsys):
        code, out = _run(capsys, "gain", "--preset", "fig3a")
        assert code == 0
        header, rows = _rows(out)
        assert "mco_sco_n2_p1e-03_db" in header
        assert "mco_sco_n4_p1e-05_db" in header
        assert len(rows) == 50


class TestDmtCommand:
    def test_table_values(self, capsys):
        code, out = _run(capsys, "dmt", "--combiner", "jd", "--n-links", "2",
                         "--steps", "3")
        assert code == 0
        header, rows = _rows(out)
        assert header == ["combiner", "n_links", "r", "d_analytic"]
        assert [(r[2], r[3]) for r in rows] == [
            ("0.0", "2.0"), ("1.0", "1.0"), ("2.0", "0.0")]

    def test_empirical_column(self, capsys):
        code, out = _run(capsys, "dmt", "--combiner", "sc", "--n-links", "3",
                         "--steps", "3", "--empirical")
        assert code == 0
        header, rows = _rows(out)
        assert header[-1] == "d_empirical"
        for row in rows:
            assert float(row[-1]) == pytest.approx(float(row[-2]), abs=0.1)


class TestCdfCommand:
    def test_stdout_mode_has_section_markers(self, capsys):
        code, out = _run(capsys, "cdf", "--synth-measurements", "20",
                         "--synth-bs", "4", "--combiner", "sc",
                         "--n-links", "2", "--rate", "1")
        assert code == 0
        assert out.startswith("# metric=outage combiner=sc n=2")
        assert "value,probability" in out

    def test_file_mode_writes_one_file_per_combo(self, tmp_path, capsys):
        prefix = tmp_path / "run"
        code, _ = _run(capsys, "cdf", "--synth-measurements", "20",
                       "--synth-bs", "4", "--combiner", "sc", "--combiner",
                       "mrc", "--n-links", "2", "--n-links", "3",
                       "--rate", "1", "--out", str(prefix))
        assert code == 0
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == ["run_outage_mrc_n2.csv", "run_outage_mrc_n3.csv",
                         "run_outage_sc_n2.csv", "run_outage_sc_n3.csv"]

    def test_single_link_baseline_collapses_to_n1(self, tmp_path, capsys):
        prefix = tmp_path / "run"
        code, _ = _run(capsys, "cdf", "--synth-measurements", "20",
                       "--synth-bs", "4", "--combiner", "sco", "--n-links",
                       "2", "--rate", "1", "--out", str(prefix))
        assert code == 0
        assert (tmp_path / "run_outage_sco_n1.csv").exists()


class TestSynthTraceCommand:
    def test_output_loads_as_trace(self, tmp_path, capsys):
        path = tmp_path / "trace.csv"
        code, _ = _run(capsys, "synth-trace", "--measurements", "15", "--bs",
                       "5", "--seed", "2", "--out", str(path))
        assert code == 0
        trace = load_trace(path)
        assert len(trace.records) == 75

    def test_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert cli.main(["synth-trace", "--measurements", "10", "--bs",
                             "4", "--seed", "3", "--out", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestSelftest:
    def test_passes_on_pristine_build(self, capsys):
        assert run_selftest(mc_samples=100_000) is True
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert "PASS" in out

    def test_detects_perturbed_asymptote(self, capsys, monkeypatch):
        # A 10% error in the asymptote must trip the tightness check.
        original = outage_mod.outage_asymptotic

        def perturbed(combiner, avg_snrs, r_c):
            est = original(combiner, avg_snrs, r_c)
            return type(est)(value=est.value * 1.1, method=est.method,
                             saturated=est.saturated)

        monkeypatch.setattr(outage_mod, "outage_asymptotic", perturbed)
        assert run_selftest(mc_samples=100_000) is False
        assert "FAIL" in capsys.readouterr().out

    def test_cli_exit_codes(self, capsys, monkeypatch):
        assert cli.main(["selftest", "--mc-samples", "100000"]) == 0
        monkeypatch.setattr(
            outage_mod, "outage_asymptotic",
            lambda combiner, avg_snrs, r_c: outage_mod.OutageEstimate(
                value=1e-12, method="asymptotic"))
        assert cli.main(["selftest", "--mc-samples", "100000"]) == 3
