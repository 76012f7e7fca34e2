"""Data-file writers and readers: lossless CSV, run manifests, and the
flat binary grid format.

CSV numbers use repr(), Python's shortest round-trip representation of a
64-bit float, so emitted files diff cleanly and re-read without loss.
Binary grids are a small self-describing header followed by row-major
float64:

    bytes 0-7    magic b"FGRID\\x01\\x00\\x00"
    bytes 8-15   nx, ny as little-endian uint32
    then         nx float64 x coordinates,
                 ny float64 y coordinates,
                 nx*ny float64 values, row-major (x index outermost)
"""

from __future__ import annotations

import csv
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

GRID_MAGIC = b"FGRID\x01\x00\x00"


def _format_value(v) -> str:
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path, columns: dict, header: dict | None = None) -> None:
    """Write named columns as RFC-4180 CSV with lossless numbers.

    ``header`` entries are embedded as leading ``# key = value`` comment
    lines (a run-parameter block carried inside the data file); they
    never include timestamps, so reruns stay byte-identical.
    """
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[k]) for k in names]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise ValueError("columns must have equal length")
    with open(path, "w", newline="") as fh:
        for k, v in (header or {}).items():
            fh.write(f"# {k} = {_format_value(v)}\n")
        writer = csv.writer(fh)
        writer.writerow(names)
        for i in range(n):
            writer.writerow([_format_value(a[i]) for a in arrays])


def read_csv(path) -> dict:
    """Read a CSV written by :func:`write_csv` back into float columns."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    rows = [row for row in reader if row]
    cols = {}
    for k, name in enumerate(header):
        raw = [row[k] for row in rows]
        try:
            cols[name] = np.array([float(v) for v in raw])
        except ValueError:
            cols[name] = np.array(raw)
    return cols


def read_csv_header(path) -> dict:
    """Parse the ``# key = value`` block at the top of a data file."""
    entries = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].partition("=")
            entries[key.strip()] = value.strip()
    return entries


def write_manifest(path, entries: dict, timestamp: bool = True) -> None:
    """key = value run manifest; the only place a timestamp appears."""
    path = Path(path)
    lines = []
    if timestamp:
        lines.append(f"timestamp = {datetime.now(timezone.utc).isoformat()}")
    for k, v in entries.items():
        lines.append(f"{k} = {_format_value(v)}")
    path.write_text("\n".join(lines) + "\n")


def read_manifest(path) -> dict:
    entries = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()
    return entries


def write_grid_binary(path, x: np.ndarray, y: np.ndarray,
                      values: np.ndarray) -> None:
    """Write one 2-D field grid in the documented binary layout."""
    x = np.ascontiguousarray(x, dtype="<f8")
    y = np.ascontiguousarray(y, dtype="<f8")
    values = np.ascontiguousarray(values, dtype="<f8")
    if values.shape != (x.size, y.size):
        raise ValueError("values must be shaped (nx, ny)")
    with open(path, "wb") as fh:
        fh.write(GRID_MAGIC)
        fh.write(np.array([x.size, y.size], dtype="<u4").tobytes())
        fh.write(x.tobytes())
        fh.write(y.tobytes())
        fh.write(values.tobytes())


def read_grid_binary(path):
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != GRID_MAGIC:
            raise ValueError(f"not a grid file: bad magic {magic!r}")
        nx, ny = np.frombuffer(fh.read(8), dtype="<u4")
        x = np.frombuffer(fh.read(8 * int(nx)), dtype="<f8")
        y = np.frombuffer(fh.read(8 * int(ny)), dtype="<f8")
        values = np.frombuffer(fh.read(8 * int(nx) * int(ny)),
                               dtype="<f8").reshape(int(nx), int(ny))
    return x, y, values


def write_polylines_csv(path, polylines) -> None:
    """Polyline set as CSV with a polyline-id column."""
    ids = []
    xs = []
    ys = []
    for pid, line in enumerate(polylines):
        arr = np.asarray(line)
        ids.extend([pid] * len(arr))
        xs.extend(arr[:, 0].tolist())
        ys.extend(arr[:, 1].tolist())
    write_csv(path, {"polyline_id": np.array(ids, dtype=int),
                     "x": np.array(xs), "y": np.array(ys)})


def read_polylines_csv(path):
    cols = read_csv(path)
    ids = cols["polyline_id"].astype(int)
    out = []
    for pid in np.unique(ids):
        m = ids == pid
        out.append(np.column_stack([cols["x"][m], cols["y"][m]]))
    return out


def grid_to_csv_columns(x: np.ndarray, y: np.ndarray,
                        values: np.ndarray) -> dict:
    """Flatten a grid into (x, y, value) columns, x index outermost."""
    X, Y = np.meshgrid(x, y, indexing="ij")
    return {"x": X.ravel(), "y": Y.ravel(), "value": values.ravel()}
