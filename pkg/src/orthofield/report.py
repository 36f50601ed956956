"""Deterministic report documents: a section-of-rows model with CSV and JSON writers.

Report bytes are a pure function of (config, seed, version): numbers print
with 17 significant digits, mappings serialize with sorted keys, CSV uses
'.' decimals and LF line endings.  Execution details such as thread counts
never enter a report.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path


def format_value(v) -> str:
    """Canonical text form of one report cell."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, int):
        return str(v)
    if v is None:
        return ""
    if isinstance(v, (tuple, list)):
        return ";".join(format_value(c) for c in v)
    return str(v)


def _json_escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, int):
        return str(v)
    if v is None:
        return "null"
    if isinstance(v, (tuple, list)):
        return "[" + ",".join(_json_value(c) for c in v) + "]"
    if isinstance(v, dict):
        items = sorted(v.items())
        return "{" + ",".join(f'"{_json_escape(str(k))}":{_json_value(val)}' for k, val in items) + "}"
    return f'"{_json_escape(str(v))}"'


def canonical_json(doc) -> bytes:
    return (_json_value(doc) + "\n").encode("utf-8")


def config_digest(config_doc) -> str:
    """SHA-256 of the canonical JSON form of the resolved configuration."""
    return hashlib.sha256(canonical_json(config_doc)).hexdigest()


@dataclass
class Section:
    name: str
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)

    def add(self, *row) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row width {len(row)} != {len(self.columns)} in {self.name}")
        self.rows.append(row)


@dataclass
class Report:
    meta: dict
    sections: list[Section] = field(default_factory=list)

    def section(self, name: str, columns: list[str]) -> Section:
        sec = Section(name=name, columns=list(columns))
        self.sections.append(sec)
        return sec

    def to_json_bytes(self) -> bytes:
        doc = {
            "meta": self.meta,
            "sections": [
                {
                    "name": s.name,
                    "columns": s.columns,
                    "rows": [[_cell(v) for v in row] for row in s.rows],
                }
                for s in self.sections
            ],
        }
        return canonical_json(doc)

    def write(self, out_dir: str | Path, fmt: str) -> list[Path]:
        """Write the report under ``out_dir``; returns the files written."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        if fmt == "json":
            path = out / "report.json"
            path.write_bytes(self.to_json_bytes())
            written.append(path)
        elif fmt == "csv":
            meta = out / "meta.csv"
            lines = ["key,value"] + [
                f"{k},{format_value(v)}" for k, v in sorted(self.meta.items())
            ]
            meta.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
            written.append(meta)
            for s in self.sections:
                path = out / f"{s.name}.csv"
                lines = [",".join(s.columns)]
                lines += [",".join(format_value(v) for v in row) for row in s.rows]
                path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
                written.append(path)
        else:
            raise ValueError(f"unknown format {fmt!r}")
        return written


def _cell(v):
    """JSON form of a cell: tuples flatten to the same text as CSV cells."""
    if isinstance(v, (tuple, list)):
        return format_value(v)
    return v
