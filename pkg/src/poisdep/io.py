"""CSV ingestion and output for count series."""
from __future__ import annotations

import csv
import io
from collections import OrderedDict
from pathlib import Path

import numpy as np

from .distributions import DomainError
from .structures import CountSeries

__all__ = ["ParseError", "ingest_csv", "parse_csv", "series_to_csv", "series_to_wide_csv"]


class ParseError(DomainError):
    """Malformed input; ``row`` is the 1-based line number in the file."""

    def __init__(self, message, row=None):
        super().__init__(f"row {row}: {message}" if row is not None else message)
        self.row = row


def _count(text, row):
    s = text.strip()
    try:
        v = int(s)
    except ValueError:
        try:
            f = float(s)
        except ValueError:
            raise ParseError(f"count {text!r} is not a number", row) from None
        if not np.isfinite(f) or f != int(f):
            raise ParseError(f"count {text!r} is not an integer", row)
        v = int(f)
    if v < 0:
        raise ParseError(f"count {v} is negative", row)
    return v


def _label(s):
    s = s.strip()
    try:
        return int(s)
    except ValueError:
        return s


def _rows(text):
    out = []
    for i, r in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not r or all(not c.strip() for c in r) or r[0].lstrip().startswith("#"):
            continue
        out.append((i, r))
    return out


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def parse_csv(text: str, layout="wide"):
    """Parse CSV text into a list of ``CountSeries``.

    ``long``: rows ``series_id, label, count`` (a header line is optional).
    ``wide``: a header ``label, name_1, name_2, ...`` then one row per time
    point with the label first and one count per series.
    """
    rows = _rows(text)
    if not rows:
        raise ParseError("file is empty")
    if layout == "long":
        return _parse_long(rows)
    if layout == "wide":
        return _parse_wide(rows)
    raise DomainError(f"unknown layout {layout!r} (expected 'long' or 'wide')")


def _parse_long(rows):
    if len(rows[0][1]) >= 3 and not _is_number(rows[0][1][2]):
        rows = rows[1:]
    if not rows:
        raise ParseError("no data rows")
    data = OrderedDict()
    for i, r in rows:
        if len(r) != 3:
            raise ParseError(f"expected 3 fields (series_id, label, count), got {len(r)}", i)
        sid = r[0].strip()
        data.setdefault(sid, ([], []))
        data[sid][0].append(_label(r[1]))
        data[sid][1].append(_count(r[2], i))
    return [CountSeries(tuple(lab), np.array(x, dtype=np.int64), sid)
            for sid, (lab, x) in data.items()]


def _parse_wide(rows):
    (hrow, header), body = rows[0], rows[1:]
    if len(header) < 2:
        raise ParseError("wide layout needs a label column and at least one series", hrow)
    if not body:
        raise ParseError("no data rows", hrow)
    names = [h.strip() or f"series{j}" for j, h in enumerate(header[1:], start=1)]
    labels, cols = [], [[] for _ in names]
    for i, r in body:
        if len(r) != len(header):
            raise ParseError(f"ragged row: {len(r)} fields, header has {len(header)}", i)
        labels.append(_label(r[0]))
        for j, v in enumerate(r[1:]):
            cols[j].append(_count(v, i))
    return [CountSeries(tuple(labels), np.array(c, dtype=np.int64), n)
            for n, c in zip(names, cols)]


def ingest_csv(path, layout="wide"):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_csv(text, layout)


def series_to_csv(series: CountSeries) -> str:
    buf = io.StringIO()
    buf.write("label,x\n")
    for lab, v in zip(series.labels, series.x):
        buf.write(f"{lab},{int(v)}\n")
    return buf.getvalue()


def series_to_wide_csv(series) -> str:
    T = series[0].T
    if any(s.T != T for s in series):
        raise DomainError("wide output needs series of equal length")
    buf = io.StringIO()
    buf.write("label," + ",".join(s.name or f"series{j + 1}" for j, s in enumerate(series)))
    buf.write("\n")
    for t in range(T):
        buf.write(f"{series[0].labels[t]}," + ",".join(str(int(s.x[t])) for s in series))
        buf.write("\n")
    return buf.getvalue()
