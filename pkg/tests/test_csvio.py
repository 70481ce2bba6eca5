import numpy as np
import pytest

from netzo import CsvFormatError, MetricsRow
from netzo.csvio import (METRICS_SCHEMA, read_csv, write_metrics_csv,
                         write_table_csv, write_trajectory_csv)


def make_rows(n=5, extras=None):
    return [
        MetricsRow(k=k, f_avg=1.0 / (k + 1), grad_sq=0.5**k, disagreement=0.1 * k,
                   eta=0.01, delta=0.001, function_queries=10 * k,
                   scalar_transmissions=20 * k, extras=dict(extras or {}))
        for k in range(n)
    ]


class TestMetricsCsv:
    def test_round_trip_exact(self, tmp_path):
        path = tmp_path / "m.csv"
        rows = make_rows(extras={"test_accuracy": 0.971234567890123})
        write_metrics_csv(path, rows, meta={"seed": 3, "gamma": 0.7})
        meta, header, parsed = read_csv(path)
        assert meta["schema"] == METRICS_SCHEMA
        assert meta["seed"] == "3"
        assert header[-1] == "test_accuracy"
        assert len(parsed) == 5
        # repr round-trip keeps floats bit-exact
        assert parsed[0]["f_avg"] == 1.0
        assert parsed[3]["grad_sq"] == 0.5**3
        assert parsed[2]["test_accuracy"] == 0.971234567890123
        assert parsed[4]["function_queries"] == 40

    def test_write_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_metrics_csv(a, make_rows(), meta={"seed": 1})
        write_metrics_csv(b, make_rows(), meta={"seed": 1})
        assert a.read_bytes() == b.read_bytes()

    def test_no_partial_file_on_crash(self, tmp_path):
        # Only the temp file is touched until the final rename.
        target = tmp_path / "out.csv"
        write_metrics_csv(target, make_rows())
        leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
        assert leftovers == []
        assert target.exists()


class TestTrajectoryCsv:
    def test_layout(self, tmp_path):
        path = tmp_path / "t.csv"
        snaps = [(k, np.full((3, 2), float(k))) for k in range(4)]
        write_trajectory_csv(path, snaps, meta={"field_widths": "1.5,0.8,0.8"})
        meta, header, rows = read_csv(path)
        assert header == ["k", "agent", "x1", "x2"]
        assert meta["field_widths"] == "1.5,0.8,0.8"
        assert len(rows) == 12
        assert rows[5] == {"k": 1, "agent": 2, "x1": 1.0, "x2": 1.0}


class TestReadErrors:
    def test_missing_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# schema = metrics-v1\n")
        with pytest.raises(CsvFormatError, match="no header"):
            read_csv(path)

    def test_field_count_mismatch_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n4,5\n")
        with pytest.raises(CsvFormatError, match="line 3"):
            read_csv(path)

    def test_table_round_trip(self, tmp_path):
        path = tmp_path / "table.csv"
        write_table_csv(path, ("name", "value"), [["x", 1.5], ["y, z", 2]],
                        meta={"schema": "summary-v1"})
        meta, header, rows = read_csv(path)
        assert rows[1]["name"] == "y, z"  # RFC-4180 quoting survives commas
        assert rows[0]["value"] == 1.5
