"""Report rendering: deterministic CSV and text tables.

Identical inputs (including seeds and precision, which the metadata echoes)
must produce byte-identical files, so floats are formatted with a fixed
12-significant-digit rule and no timestamps or environment data appear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import nevsmt


@dataclass(frozen=True)
class ReportTable:
    title: str
    columns: tuple
    rows: tuple
    metadata: tuple = ()  # ((key, value), ...)


def format_value(v):
    if isinstance(v, float):
        return format(v, ".12g")
    if isinstance(v, Fraction):
        return str(v)
    if v is None:
        return ""
    return str(v)


def render_csv(tables):
    lines = [f"# nevsmt {nevsmt.__version__}"]
    for table in tables:
        lines.append(f"# table: {table.title}")
        for key, value in table.metadata:
            lines.append(f"# {key} = {format_value(value)}")
        lines.append(",".join(table.columns))
        for row in table.rows:
            lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def render_text(tables):
    out = [f"nevsmt {nevsmt.__version__}"]
    for table in tables:
        out.append("")
        out.append(f"== {table.title} ==")
        for key, value in table.metadata:
            out.append(f"{key} = {format_value(value)}")
        if table.rows:
            cells = [tuple(format_value(v) for v in row) for row in table.rows]
            widths = [
                max(len(col), *(len(c[i]) for c in cells))
                for i, col in enumerate(table.columns)
            ]
            out.append("  ".join(c.ljust(w) for c, w in zip(table.columns, widths)))
            for row in cells:
                out.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
        else:
            out.append("  ".join(table.columns))
    return "\n".join(out) + "\n"


def emit_report(tables, fmt, path):
    """Write tables to ``path`` as csv or text; byte-identical across runs."""
    if isinstance(tables, ReportTable):
        tables = [tables]
    if fmt == "csv":
        payload = render_csv(tables)
    elif fmt == "text":
        payload = render_text(tables)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(payload)
    return payload


def read_csv_table(path, title=None):
    """Read back one table's (columns, rows-of-strings) from a report CSV."""
    columns = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        in_table = title is None
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# table: "):
                name = line[len("# table: "):]
                if title is not None:
                    if in_table:
                        break
                    in_table = name == title
                continue
            if line.startswith("#") or not line:
                continue
            if not in_table:
                continue
            if columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    if columns is None:
        raise ValueError(f"table {title!r} not found in {path}")
    return columns, rows
