"""CSV/JSON table emission shared by the CLI commands."""

import csv
import io
import json

DIGITS = 12


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, f".{DIGITS}g")
    return str(value)


def _json_value(value):
    # round-trip through the CSV text so both formats carry the same digits
    if isinstance(value, float):
        return float(format(value, f".{DIGITS}g"))
    return value


def render_csv(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def render_json(columns, rows, meta):
    doc = {
        "meta": {k: _json_value(v) for k, v in meta.items()},
        "rows": [{c: _json_value(row[c]) for c in columns} for row in rows],
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def render(fmt, columns, rows, meta):
    if fmt == "csv":
        return render_csv(columns, rows)
    if fmt == "json":
        return render_json(columns, rows, meta)
    raise ValueError(f"unknown format {fmt!r}")
