"""JSON/CSV file formats for point sets, matrices and reports."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .counting import PointSet
from .field import FieldError, field_from_json
from .linalg import SquareMatrix


class FormatError(ValueError):
    pass


def pointset_from_json(obj: dict) -> PointSet:
    try:
        f = field_from_json(obj["field"])
        d = int(obj["dim"])
        raw = obj["points"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed point set: missing {exc}") from exc
    points, seen, dupes = [], set(), []
    for pt in raw:
        if not isinstance(pt, list) or len(pt) != d:
            raise FormatError(f"point {pt!r} does not have dimension {d}")
        try:
            coords = tuple(f.decode(c) for c in pt)
        except (FieldError, TypeError, ValueError) as exc:
            raise FormatError(f"point {pt!r}: {exc}") from exc
        if coords in seen:
            dupes.append(pt)
        seen.add(coords)
        points.append(coords)
    if dupes:
        raise FormatError(f"duplicate points: {dupes}")
    return PointSet(f, d, points)


def load_pointset(path) -> PointSet:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return pointset_from_json(obj)


def save_pointset(E: PointSet, path) -> None:
    Path(path).write_text(json.dumps(E.to_json()) + "\n")


def matrix_from_json(obj: dict) -> SquareMatrix:
    f = field_from_json(obj["field"])
    rows = [[f.decode(x) for x in row] for row in obj["entries"]]
    if len(rows) != int(obj["d"]):
        raise FormatError("entries do not match d")
    return SquareMatrix(f, tuple(tuple(row) for row in rows))


def dumps(obj, fmt: str = "json") -> str:
    """JSON (sorted keys) or, for a list of {key, count} rows, two-column CSV."""
    if fmt == "json":
        return json.dumps(obj, indent=2, sort_keys=True)
    if fmt == "csv":
        rows = obj.get("rows") if isinstance(obj, dict) else obj
        if rows is None:
            raise FormatError("this output has no tabular form; use --format json")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "count"])
        for row in rows:
            key = next(v for k, v in row.items() if k != "count")
            writer.writerow([json.dumps(key), row["count"]])
        return buf.getvalue()
    raise FormatError(f"unknown format {fmt!r}")


def save_report(obj, path=None, fmt: str = "json") -> str:
    text = dumps(obj, fmt)
    if not text.endswith("\n"):
        text += "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
