"""CSV ingestion and serialization.

Interchange formats:

* panel: CSV with a header row of region labels, one row per time point;
* dense W: square numeric CSV, zero diagonal, no header;
* edge list: one "i,j" pair per line, 1-based region indices;
* coordinates: "label,x,y" lines (header optional).

Lines starting with ``#`` are metadata comments and are skipped on load.
All writes go through a temp file plus atomic rename, so a failed run never
leaves a partial output behind.  Floats are written with 17 significant
digits, making save/load round trips lossless.
"""

from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile

import numpy as np

from .exceptions import (
    NonNumericError,
    NonzeroDiagonalError,
    NotSquareError,
    ParseError,
    RaggedRowError,
)
from .statistic import SpatialPanel
from .weights import ProximityMatrix, adjacency_from_edges, inverse_distance

_FMT = "%.17g"


def _fmt(x: float) -> str:
    return _FMT % x


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via temp-file + rename; never leaves partial files."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _data_lines(path: str):
    """(line_number, raw_line) pairs with comments and blank lines skipped."""
    with open(path, newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            yield lineno, line


def _parse_cell(raw: str, row: int, col: int) -> float:
    cell = raw.strip()
    if cell == "":
        raise ParseError(f"blank cell at row {row}, column {col}")
    try:
        return float(cell)
    except ValueError:
        raise NonNumericError(f"non-numeric cell {cell!r} at row {row}, column {col}")


def load_panel(path: str) -> SpatialPanel:
    """Load a time-by-region panel from CSV with a region-label header row."""
    rows = []
    labels = None
    for lineno, line in _data_lines(path):
        fields = next(csv.reader([line]))
        if labels is None:
            labels = [f.strip() for f in fields]
            continue
        if len(fields) != len(labels):
            raise RaggedRowError(
                f"row {lineno} has {len(fields)} cells, header has {len(labels)}"
            )
        rows.append([_parse_cell(c, lineno, j + 1) for j, c in enumerate(fields)])
    if labels is None or not rows:
        raise ParseError(f"{path}: no data rows")
    return SpatialPanel(np.array(rows), tuple(labels))


def save_panel(path: str, panel: SpatialPanel, meta: dict | None = None) -> None:
    buf = _io.StringIO()
    if meta:
        buf.write("# meta: " + json.dumps(meta, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(panel.region_labels)
    for row in panel.data:
        w.writerow([_fmt(v) for v in row])
    atomic_write_text(path, buf.getvalue())


def load_weights(path: str, kind: str = "dense", n_regions: int | None = None,
                 standardize: bool = False) -> ProximityMatrix:
    """Load a proximity matrix as a dense CSV, an edge list, or coordinates."""
    if kind == "dense":
        W = _load_dense(path)
    elif kind == "edges":
        W = _load_edges(path, n_regions)
    elif kind == "coords":
        W = _load_coords(path)
    else:
        raise ParseError(f"unknown weights kind {kind!r}")
    if standardize:
        from .weights import row_standardize

        W = row_standardize(W)
    return W


def _load_dense(path: str) -> ProximityMatrix:
    rows = []
    for lineno, line in _data_lines(path):
        fields = next(csv.reader([line]))
        rows.append([_parse_cell(c, lineno, j + 1) for j, c in enumerate(fields)])
    if not rows:
        raise ParseError(f"{path}: empty weight matrix")
    lengths = {len(r) for r in rows}
    if len(lengths) != 1 or lengths.pop() != len(rows):
        raise NotSquareError(f"{path}: weight matrix is not square")
    w = np.array(rows)
    nz = np.flatnonzero(np.diagonal(w))
    if nz.size:
        i = nz[0] + 1
        raise NonzeroDiagonalError(f"{path}: nonzero diagonal entry w[{i},{i}]")
    return ProximityMatrix(w)


def _load_edges(path: str, n_regions: int | None) -> ProximityMatrix:
    edges = []
    for lineno, line in _data_lines(path):
        fields = next(csv.reader([line]))
        if len(fields) != 2:
            raise ParseError(f"row {lineno}: expected 'i,j', got {line.strip()!r}")
        i = int(_parse_cell(fields[0], lineno, 1))
        j = int(_parse_cell(fields[1], lineno, 2))
        edges.append((i, j))
    if not edges and n_regions is None:
        raise ParseError(f"{path}: empty edge list and no region count given")
    R = n_regions if n_regions is not None else max(max(e) for e in edges)
    return adjacency_from_edges(edges, R)


def _load_coords(path: str) -> ProximityMatrix:
    labels, points = [], []
    for lineno, line in _data_lines(path):
        fields = next(csv.reader([line]))
        if len(fields) != 3:
            raise ParseError(f"row {lineno}: expected 'label,x,y'")
        try:
            xy = (float(fields[1]), float(fields[2]))
        except ValueError:
            if not points:  # tolerate a header row
                continue
            raise NonNumericError(f"row {lineno}: non-numeric coordinates")
        labels.append(fields[0].strip())
        points.append(xy)
    if not points:
        raise ParseError(f"{path}: no coordinate rows")
    return inverse_distance(points, labels)


def save_weights(path: str, W: ProximityMatrix, meta: dict | None = None) -> None:
    buf = _io.StringIO()
    if meta:
        buf.write("# meta: " + json.dumps(meta, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    for row in W.weights:
        w.writerow([_fmt(v) for v in row])
    atomic_write_text(path, buf.getvalue())


def save_samples(path: str, samples: np.ndarray, meta: dict | None = None) -> None:
    """Single-column CSV of null samples."""
    buf = _io.StringIO()
    if meta:
        buf.write("# meta: " + json.dumps(meta, sort_keys=True) + "\n")
    buf.write("sample\n")
    for v in samples:
        buf.write(_fmt(v) + "\n")
    atomic_write_text(path, buf.getvalue())


def save_spectrum(path: str, eigenvalues: np.ndarray, meta: dict | None = None) -> None:
    buf = _io.StringIO()
    if meta:
        buf.write("# meta: " + json.dumps(meta, sort_keys=True) + "\n")
    buf.write("k,lambda\n")
    for k, lam in enumerate(eigenvalues, start=1):
        buf.write(f"{k},{_fmt(lam)}\n")
    atomic_write_text(path, buf.getvalue())


def save_sweep(path: str, sweep, meta: dict | None = None) -> None:
    """Moment-summary CSV: model, theta, mean, sd, skewness, kurtosis."""
    buf = _io.StringIO()
    if meta:
        buf.write("# meta: " + json.dumps(meta, sort_keys=True) + "\n")
    buf.write("model,theta,mean,sd,skewness,kurtosis\n")
    for theta in sweep.thetas:
        mean, sd, skew, kurt = sweep.summaries[theta]
        buf.write(
            f"{sweep.model},{_fmt(theta)},{_fmt(mean)},{_fmt(sd)},"
            f"{_fmt(skew)},{_fmt(kurt)}\n"
        )
    atomic_write_text(path, buf.getvalue())


def save_acf_table(path: str, table: dict, threshold: float,
                   meta: dict | None = None) -> None:
    """ACF CSV: one row per lag, one column per region, threshold in meta."""
    buf = _io.StringIO()
    full_meta = dict(meta or {})
    full_meta["threshold_95"] = threshold
    buf.write("# meta: " + json.dumps(full_meta, sort_keys=True) + "\n")
    labels = list(table)
    n_lags = len(next(iter(table.values())))
    buf.write("lag," + ",".join(labels) + "\n")
    for lag in range(n_lags):
        buf.write(
            str(lag) + "," + ",".join(_fmt(table[lb][lag]) for lb in labels) + "\n"
        )
    atomic_write_text(path, buf.getvalue())
