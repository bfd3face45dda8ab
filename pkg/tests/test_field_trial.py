import math

import numpy as np
import pytest

from multiconn.exceptions import DomainError, TraceError
from multiconn.field_trial import (CDF_HEADER, EmpiricalCdf, SnrModelParams,
                                   SnrTrace, TraceRecord,
                                   empirical_outage_cdf,
                                   empirical_throughput_cdf, load_trace,
                                   save_cdf, save_trace, strongest_links,
                                   synthesize_trace)
from multiconn.link_model import db_to_linear
from multiconn.outage import outage_asymptotic, outage_exact_closed
from multiconn.throughput import achievable_rate_asymptotic


def _trace(rows):
    return SnrTrace(records=tuple(TraceRecord(*row) for row in rows))


SMALL_TRACE = _trace([
    (0, "BS00", 20.0), (0, "BS01", 25.0), (0, "BS02", 15.0),
    (1, "BS00", 30.0), (1, "BS01", 10.0), (1, "BS02", 18.0),
])


class TestTraceContainer:
    def test_duplicate_pair_rejected(self):
        with pytest.raises(TraceError):
            _trace([(0, "BS00", 20.0), (0, "BS00", 21.0)])

    def test_empty_rejected(self):
        with pytest.raises(TraceError):
            SnrTrace(records=())

    def test_measurement_ids_sorted(self):
        assert SMALL_TRACE.measurement_ids() == [0, 1]

    def test_entries_for(self):
        entries = SMALL_TRACE.entries_for(1)
        assert [e.bs_id for e in entries] == ["BS00", "BS01", "BS02"]


class TestTraceIo:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "trace.csv"
        save_trace(SMALL_TRACE, path)
        loaded = load_trace(path)
        assert loaded == SMALL_TRACE

    def test_comments_and_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("# field trial dump\n\n"
                        "measurement_id,bs_id,avg_snr_db\n"
                        "0,BS00,20.0\n"
                        "# interlude\n"
                        "0,BS01,25.0\n")
        assert len(load_trace(path).records) == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(TraceError):
            load_trace(tmp_path / "absent.csv")

    def test_wrong_header(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("a,b,c\n1,BS00,20.0\n")
        with pytest.raises(TraceError, match="expected header"):
            load_trace(path)

    def test_bad_row_reports_line_number(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("measurement_id,bs_id,avg_snr_db\n"
                        "0,BS00,20.0\n"
                        "not-an-int,BS01,25.0\n")
        with pytest.raises(TraceError, match=":3"):
            load_trace(path)

    def test_wrong_field_count(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("measurement_id,bs_id,avg_snr_db\n0,BS00\n")
        with pytest.raises(TraceError, match="3 fields"):
            load_trace(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("measurement_id,bs_id,avg_snr_db\n")
        with pytest.raises(TraceError):
            load_trace(path)


class TestStrongestLinks:
    def test_descending_linear_values(self):
        snrs = strongest_links(SMALL_TRACE, 0, 2)
        assert snrs == pytest.approx([db_to_linear(25.0), db_to_linear(20.0)])

    def test_tie_broken_by_bs_id(self):
        trace = _trace([(0, "BS01", 20.0), (0, "BS00", 20.0),
                        (0, "BS02", 10.0)])
        assert strongest_links(trace, 0, 2) == pytest.approx(
            [db_to_linear(20.0)] * 2)

    def test_too_few_links(self):
        with pytest.raises(TraceError):
            strongest_links(SMALL_TRACE, 0, 4)

    def test_validation(self):
        with pytest.raises(DomainError):
            strongest_links(SMALL_TRACE, 0, 0)


class TestEmpiricalCdf:
    def test_sorted_with_uniform_steps(self):
        cdf = EmpiricalCdf.from_samples([0.3, 0.1, 0.2, 0.4])
        assert list(cdf.values) == [0.1, 0.2, 0.3, 0.4]
        assert list(cdf.probabilities) == [0.25, 0.5, 0.75, 1.0]

    def test_empty_rejected(self):
        with pytest.raises(TraceError):
            EmpiricalCdf.from_samples([])

    def test_save_format(self, tmp_path):
        path = tmp_path / "cdf.csv"
        save_cdf(EmpiricalCdf.from_samples([0.25, 0.5]), path)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(CDF_HEADER)
        assert lines[1] == "0.25,0.5"
        assert lines[2] == "0.5,1.0"


class TestOutageCdf:
    def test_values_match_direct_evaluation(self):
        cdf = empirical_outage_cdf(SMALL_TRACE, 2, 1.0, "sc")
        expected = sorted(
            outage_exact_closed("sc", strongest_links(SMALL_TRACE, mid, 2),
                                1.0).value
            for mid in (0, 1))
        assert list(cdf.values) == pytest.approx(expected, rel=1e-14)

    def test_joint_decoding_uses_asymptote(self):
        cdf = empirical_outage_cdf(SMALL_TRACE, 2, 1.0, "jd")
        expected = sorted(
            outage_asymptotic("jd", strongest_links(SMALL_TRACE, mid, 2),
                              1.0).value
            for mid in (0, 1))
        assert list(cdf.values) == pytest.approx(expected, rel=1e-14)

    def test_ragged_measurement_skipped(self):
        trace = _trace([(0, "BS00", 20.0), (0, "BS01", 25.0),
                        (1, "BS00", 30.0)])
        cdf = empirical_outage_cdf(trace, 2, 1.0, "sc")
        assert cdf.skipped_measurements == 1
        assert len(cdf.values) == 1

    def test_validation(self):
        with pytest.raises(DomainError):
            empirical_outage_cdf(SMALL_TRACE, 2, 0.0, "sc")


class TestThroughputCdf:
    def test_values_match_direct_evaluation(self):
        bandwidth, p = 20e6, 1e-3
        cdf = empirical_throughput_cdf(SMALL_TRACE, 2, p, bandwidth, "mrc")
        expected = sorted(
            bandwidth * (1 - p) * achievable_rate_asymptotic(
                "mrc", strongest_links(SMALL_TRACE, mid, 2), p)
            for mid in (0, 1))
        assert list(cdf.values) == pytest.approx(expected, rel=1e-14)

    def test_single_link_baseline_reads_strongest(self):
        cdf = empirical_throughput_cdf(SMALL_TRACE, 1, 1e-3, 20e6, "sco")
        expected = sorted(
            20e6 * 0.999 * math.log2(1e-3 * strongest_links(
                SMALL_TRACE, mid, 1)[0] + 1.0)
            for mid in (0, 1))
        assert list(cdf.values) == pytest.approx(expected, rel=1e-14)

    def test_validation(self):
        with pytest.raises(DomainError):
            empirical_throughput_cdf(SMALL_TRACE, 2, 0.0, 20e6, "sc")
        with pytest.raises(DomainError):
            empirical_throughput_cdf(SMALL_TRACE, 2, 1e-3, 0.0, "sc")


class TestSynthesizedTrace:
    def test_shape_and_determinism(self):
        a = synthesize_trace(10, 4, seed=5)
        b = synthesize_trace(10, 4, seed=5)
        assert a == b
        assert len(a.records) == 40
        assert a.measurement_ids() == list(range(10))
        assert synthesize_trace(10, 4, seed=6) != a

    def test_params_shift_the_mean(self):
        params = SnrModelParams(mean_db=50.0, bs_spread_db=0.5,
                                shadowing_db=0.5)
        trace = synthesize_trace(200, 4, snr_model_params=params, seed=1)
        mean = np.mean([r.avg_snr_db for r in trace.records])
        assert mean == pytest.approx(50.0, abs=1.0)

    def test_validation(self):
        with pytest.raises(DomainError):
            synthesize_trace(0, 4)
        with pytest.raises(DomainError):
            synthesize_trace(4, 0)

    def test_per_row_combiner_ordering(self):
        # Sanity version of the full-pipeline ordering property.
        trace = synthesize_trace(100, 8, seed=7)
        for mid in trace.measurement_ids():
            snrs = strongest_links(trace, mid, 2)
            p_jd = outage_asymptotic("jd", snrs, 1.0).value
            p_mrc = outage_exact_closed("mrc", snrs, 1.0).value
            p_sc = outage_exact_closed("sc", snrs, 1.0).value
            assert p_jd <= p_mrc <= p_sc
