"""Structured reports and their json / csv / human renderings.

The json form is the stable interface.  Keys, in order:

    schema      integer schema version (currently 1)
    version     tool version string
    command     command name
    label       label from the ring spec ("" if none)
    p           the characteristic
    input_hash  sha256 of the canonical spec text, command and bounds
    bounds      every bound used by the computation
    result      command-specific payload
    table       list of row objects (tabular commands) or null
    verdict     one-line summary

Timing is deliberately left out of json so that reports are byte-identical
across runs, thread counts and cache hits; the human form shows it.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from . import __version__

SCHEMA = 1


class FormatError(ValueError):
    pass


@dataclass
class Report:
    command: str
    label: str
    p: int
    input_hash: str
    bounds: dict
    result: dict
    verdict: str
    table: list | None = None
    columns: list | None = None
    version: str = __version__
    timing: float | None = field(default=None, compare=False)
    spec_text: str = field(default="", compare=False)

    def as_json_obj(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": self.version,
            "command": self.command,
            "label": self.label,
            "p": self.p,
            "input_hash": self.input_hash,
            "bounds": self.bounds,
            "result": self.result,
            "table": self.table,
            "verdict": self.verdict,
        }

    @classmethod
    def from_json(cls, text: str) -> "Report":
        obj = json.loads(text)
        if obj.get("schema") != SCHEMA:
            raise FormatError(f"unsupported report schema {obj.get('schema')!r}")
        table = obj["table"]
        return cls(
            obj["command"], obj["label"], obj["p"], obj["input_hash"], obj["bounds"], obj["result"],
            obj["verdict"], table, list(table[0]) if table else None, obj["version"],
        )


def to_json(report: Report) -> str:
    return json.dumps(report.as_json_obj(), indent=2, sort_keys=False) + "\n"


def to_csv(report: Report) -> str:
    if report.table is None:
        raise FormatError(f"csv output is only available for tabular reports; '{report.command}' is not tabular")
    cols = report.columns or (list(report.table[0]) if report.table else [])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for row in report.table:
        w.writerow({k: _cell(row.get(k)) for k in cols})
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (list, tuple)):
        return ";".join(str(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else v


def to_human(report: Report) -> str:
    lines = [f"frobforge {report.version} :: {report.command}"]
    ring = report.label or "(unlabelled ring)"
    lines.append(f"ring: {ring} over F_{report.p}")
    if report.bounds:
        lines.append("bounds: " + ", ".join(f"{k}={v}" for k, v in report.bounds.items()))
    if report.table:
        cols = report.columns or list(report.table[0])
        cells = [[str(_cell(r.get(c))) for c in cols] for r in report.table]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        for row in cells:
            lines.append("  ".join(x.ljust(w) for x, w in zip(row, widths)))
    for k, v in report.result.get("notes", {}).items() if isinstance(report.result.get("notes"), dict) else []:
        lines.append(f"{k}: {v}")
    lines.append(f"verdict: {report.verdict}")
    if report.timing is not None:
        lines.append(f"time: {report.timing:.2f}s")
    else:
        lines.append("time: (cached)")
    return "\n".join(lines) + "\n"


def emit(report: Report, fmt: str = "human") -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "human":
        return to_human(report)
    raise FormatError(f"unknown format {fmt!r}")
