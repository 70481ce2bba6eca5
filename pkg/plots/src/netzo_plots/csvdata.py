"""Reader for the experiment CSV files.

The files are self-describing: a leading ``# key = value`` comment block
(schema version, run metadata, and for trajectory files the field peaks
and agent positions), one header row, then data rows. This module is
deliberately independent of the producing library; the CSV layout is the
whole contract.
"""

import csv

import numpy as np


class SchemaError(ValueError):
    """A CSV file does not match the expected schema."""


class CsvTable:
    def __init__(self, meta, header, columns):
        self.meta = meta
        self.header = header
        self.columns = columns

    def column(self, name):
        if name not in self.columns:
            raise SchemaError(
                f"missing column {name!r}; file has columns {', '.join(self.header)}"
            )
        return self.columns[name]


def read_table(path):
    """Read one CSV into column arrays, keeping the comment metadata."""
    meta = {}
    rows = []
    header = None
    with open(path, newline="") as handle:
        data_lines = []
        for raw in handle:
            stripped = raw.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                body = stripped.lstrip("#").strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            data_lines.append(raw)
    if not data_lines:
        raise SchemaError(f"{path}: no header row")
    parsed = list(csv.reader(data_lines))
    header = parsed[0]
    rows = parsed[1:]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    columns = {}
    for j, name in enumerate(header):
        cells = [row[j] if j < len(row) else "" for row in rows]
        try:
            columns[name] = np.array([float(c) if c != "" else np.nan for c in cells])
        except ValueError:
            columns[name] = np.array(cells)
    return CsvTable(meta, header, columns)


def parse_float_list(text):
    return [float(part) for part in text.split(",") if part.strip()]


def parse_point_list(text):
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            a, b = chunk.split(",")
            points.append((float(a), float(b)))
    return points


def field_parameters(meta):
    """Extract the mixture-field description a trajectory file embeds."""
    try:
        amplitudes = parse_float_list(meta["field_amplitudes"])
        centers = parse_point_list(meta["field_centers"])
        widths = parse_float_list(meta["field_widths"])
    except KeyError as err:
        raise SchemaError(f"trajectory metadata is missing {err.args[0]!r}") from None
    positions = parse_point_list(meta.get("agent_positions", ""))
    return amplitudes, centers, widths, positions


def field_grid(amplitudes, centers, widths, xlim, ylim, resolution=200):
    """Evaluate the three-peak field on a rectangular grid."""
    xs = np.linspace(*xlim, resolution)
    ys = np.linspace(*ylim, resolution)
    gx, gy = np.meshgrid(xs, ys)
    total = np.zeros_like(gx)
    for amp, (cx, cy), width in zip(amplitudes, centers, widths):
        total += amp * np.exp(-((gx - cx) ** 2 + (gy - cy) ** 2) / (2.0 * width**2))
    return gx, gy, total
