"""Versioned CSV persistence for metric, trajectory, and summary files.

Layout shared by every file this library writes:

  - leading comment block: ``# key = value`` lines (schema version plus
    run metadata; trajectory files carry the field parameters here so
    downstream plotting needs no access to this library),
  - one RFC-4180 header row,
  - data rows, floats serialized with ``repr`` so round-trips are exact.

Files are written to a temp path in the target directory and renamed into
place, so readers never observe a partial file.
"""

import csv
import io
import os
import tempfile

from .errors import CsvFormatError

METRICS_SCHEMA = "metrics-v1"
TRAJECTORY_SCHEMA = "trajectory-v1"
SUMMARY_SCHEMA = "summary-v1"

_BASE_COLUMNS = (
    "k", "f_avg", "grad_sq", "disagreement", "eta", "delta",
    "function_queries", "scalar_transmissions",
)


def _format(value):
    if isinstance(value, float):
        return repr(float(value))  # shortest exact form, also for numpy floats
    return str(value)


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` via a same-directory temp file + rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _render(meta, header, data_rows):
    buffer = io.StringIO()
    for key, value in meta.items():
        buffer.write(f"# {key} = {_format(value)}\n")
    writer = csv.writer(buffer, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(header)
    for row in data_rows:
        writer.writerow([_format(v) for v in row])
    return buffer.getvalue()


def write_metrics_csv(path, rows, meta=None):
    """Persist a list of :class:`~netzo.engine.MetricsRow` objects."""
    full_meta = {"schema": METRICS_SCHEMA}
    full_meta.update(meta or {})
    extra_keys = sorted({key for row in rows for key in row.extras})
    header = list(_BASE_COLUMNS) + extra_keys
    data = [
        [row.k, row.f_avg, row.grad_sq, row.disagreement, row.eta, row.delta,
         row.function_queries, row.scalar_transmissions]
        + [row.extras.get(key, "") for key in extra_keys]
        for row in rows
    ]
    atomic_write_text(path, _render(full_meta, header, data))


def write_trajectory_csv(path, snapshots, meta=None):
    """Persist per-agent decision paths: one row per (iteration, agent)."""
    full_meta = {"schema": TRAJECTORY_SCHEMA}
    full_meta.update(meta or {})
    dim = snapshots[0][1].shape[1] if snapshots else 0
    header = ["k", "agent"] + [f"x{j + 1}" for j in range(dim)]
    data = []
    for k, x in snapshots:
        for agent in range(x.shape[0]):
            data.append([k, agent] + [float(v) for v in x[agent]])
    atomic_write_text(path, _render(full_meta, header, data))


def write_table_csv(path, header, rows, meta=None):
    """Persist a generic table (summaries, comparisons, diagnostics)."""
    atomic_write_text(path, _render(dict(meta or {}), list(header), rows))


def read_csv(path):
    """Read one of this library's CSV files.

    Returns ``(meta, header, rows)`` where rows are dicts keyed by header
    name with values parsed to float/int where possible. Raises
    :class:`CsvFormatError` with a line number on malformed input.
    """
    meta = {}
    header = None
    rows = []
    with open(path, newline="") as handle:
        data_lines = []
        for lineno, raw in enumerate(handle, start=1):
            stripped = raw.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                if header is not None:
                    raise CsvFormatError("comment after header", path=path, line=lineno)
                body = stripped.lstrip("#").strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            data_lines.append((lineno, raw))
        if not data_lines:
            raise CsvFormatError("no header row", path=path)
        reader = csv.reader([raw for _, raw in data_lines])
        parsed = list(reader)
        header = parsed[0]
        for (lineno, _), cells in zip(data_lines[1:], parsed[1:]):
            if len(cells) != len(header):
                raise CsvFormatError(
                    f"expected {len(header)} fields, got {len(cells)}", path=path, line=lineno
                )
            rows.append({name: _parse_cell(cell) for name, cell in zip(header, cells)})
    return meta, header, rows


def _parse_cell(cell):
    text = cell.strip()
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text
