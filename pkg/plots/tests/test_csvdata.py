import numpy as np
import pytest

from netzo_plots.csvdata import (SchemaError, field_grid, field_parameters,
                                 read_table)


def test_read_metrics(metrics_csv):
    table = read_table(metrics_csv)
    assert table.meta["schema"] == "metrics-v1"
    assert table.meta["gamma"] == "0.7"
    np.testing.assert_array_equal(table.column("k"), np.arange(20))
    assert table.column("f_avg")[0] == 1.0


def test_missing_column_named(metrics_csv):
    table = read_table(metrics_csv)
    with pytest.raises(SchemaError, match="test_accuracy"):
        table.column("test_accuracy")


def test_empty_file_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# schema = metrics-v1\n")
    with pytest.raises(SchemaError, match="no header"):
        read_table(empty)
    header_only = tmp_path / "header.csv"
    header_only.write_text("k,f_avg\n")
    with pytest.raises(SchemaError, match="no data"):
        read_table(header_only)


def test_field_parameters(trajectory_csv):
    table = read_table(trajectory_csv)
    amplitudes, centers, widths, positions = field_parameters(table.meta)
    assert amplitudes == [10.0, 4.0, 4.0]
    assert centers == [(5.0, 5.0), (1.0, 8.0), (8.0, 1.0)]
    assert widths == [1.5, 0.8, 0.8]
    assert len(positions) == 5


def test_field_parameters_missing_meta():
    with pytest.raises(SchemaError, match="field_amplitudes"):
        field_parameters({"schema": "trajectory-v1"})


def test_field_grid_peaks_where_expected():
    gx, gy, gz = field_grid([10.0, 4.0, 4.0],
                            [(5.0, 5.0), (1.0, 8.0), (8.0, 1.0)],
                            [1.5, 0.8, 0.8], xlim=(-1, 10), ylim=(-1, 10),
                            resolution=120)
    peak = np.unravel_index(np.argmax(gz), gz.shape)
    assert abs(gx[peak] - 5.0) < 0.1 and abs(gy[peak] - 5.0) < 0.1
    assert gz.max() == pytest.approx(10.0, rel=0.01)
