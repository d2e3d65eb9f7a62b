"""CSV files: comma separated, '.' decimal point, one header row.

Optional ``# key = value`` comment lines before the header carry metadata.
Floats are written with ``repr`` so they read back bit-identically.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .dynamics import TimeSeries


class CsvFormatError(ValueError):
    pass


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def write_csv(path, header, rows, metadata=None):
    """Write ``rows`` (2-D array or iterable of sequences) under ``header``."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        for key, value in (metadata or {}).items():
            fh.write(f"# {key} = {_cell(value)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(x) for x in row])


def _parse_meta(value):
    for conv in (int, float):
        try:
            return conv(value)
        except ValueError:
            pass
    if value in ("true", "false"):
        return value == "true"
    return value


def read_csv(path):
    """Return (metadata, header, float array). Errors cite 1-based file rows."""
    path = Path(path)
    metadata = {}
    header = None
    data = []
    with path.open(newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            if header is None and line.startswith("#"):
                key, sep, value = line[1:].partition("=")
                if sep:
                    metadata[key.strip()] = _parse_meta(value.strip())
                continue
            if not line.strip():
                continue
            cells = next(csv.reader([line]))
            if header is None:
                if not cells or any(_is_number(c) for c in cells):
                    raise CsvFormatError(f"{path}: row {lineno}: missing header row")
                header = [c.strip() for c in cells]
                continue
            if len(cells) != len(header):
                raise CsvFormatError(
                    f"{path}: row {lineno}: expected {len(header)} columns, got {len(cells)}"
                )
            try:
                data.append([float(c) for c in cells])
            except ValueError:
                raise CsvFormatError(f"{path}: row {lineno}: non-numeric value") from None
    if header is None:
        raise CsvFormatError(f"{path}: missing header row")
    return metadata, header, np.array(data, dtype=float).reshape(len(data), len(header))


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def timeseries_header(n_dof):
    names = []
    for k in range(n_dof):
        node, slot = k // 2 + 1, "u" if k % 2 == 0 else "s"
        names.append(f"{slot}{node}")
    return ["t"] + [f"q_{n}" for n in names] + [f"v_{n}" for n in names] + [f"a_{n}" for n in names]


def write_timeseries_csv(series: TimeSeries, path):
    """Columns: t, then q, v and q'' per DOF (u<i> displacement, s<i> slope of free node i)."""
    meta = dict(series.metadata)
    meta["sample_dt"] = series.dt
    table = np.column_stack([series.t, series.q, series.v, series.acc])
    write_csv(path, timeseries_header(series.n_dof), table, metadata=meta)


def read_timeseries_csv(path) -> TimeSeries:
    metadata, header, data = read_csv(path)
    if header[0] != "t" or (len(header) - 1) % 3:
        raise CsvFormatError(f"{path}: header is not a time series header (t, q_*, v_*, a_*)")
    n = (len(header) - 1) // 3
    if header != timeseries_header(n):
        raise CsvFormatError(f"{path}: unexpected column names in header")
    if len(data) < 1:
        raise CsvFormatError(f"{path}: no samples")
    dt = metadata.pop("sample_dt", None)
    if dt is None:
        dt = float(data[1, 0] - data[0, 0]) if len(data) > 1 else 0.0
    return TimeSeries(
        dt=float(dt),
        t=data[:, 0].copy(),
        q=data[:, 1 : 1 + n].copy(),
        v=data[:, 1 + n : 1 + 2 * n].copy(),
        acc=data[:, 1 + 2 * n :].copy(),
        metadata=metadata,
    )
