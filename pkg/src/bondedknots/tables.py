"""Markdown, CSV and JSON renderings of tabulated records."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from pathlib import Path

from bondedknots.diagram import parse_pd
from bondedknots.pipeline import ClassRecord

__all__ = ["FORMATS", "sort_records", "display_name", "to_markdown", "to_csv", "to_json", "records_from_json", "emit_tables"]

FORMATS = ("md", "csv", "json")

_TITLES = {"B": "Bonded knots", "H": "Bonded handcuff links", "L": "Bonded links"}


def _name_class(rec: ClassRecord) -> str:
    # table sections follow the reference names, which can differ from cls
    return rec.name[:1] if rec.name[:1] in _TITLES else rec.cls


def sort_records(records: Iterable[ClassRecord]) -> list[ClassRecord]:
    """Order by class, singularity number, crossings, bonds, canonical code."""

    def key(r: ClassRecord) -> tuple:
        return ("BHL".index(_name_class(r)), r.s, r.c, r.b, parse_pd(r.pd).code)

    return sorted(records, key=key)


def display_name(rec: ClassRecord) -> str:
    """Record name with the order-3 marker appended."""
    return rec.name + ("#3" if rec.order3 else "")


def to_markdown(records: Sequence[ClassRecord]) -> str:
    """One polynomial table and one PD table per class."""
    recs = sort_records(records)
    parts = []
    for cls, title in _TITLES.items():
        rows = [r for r in recs if _name_class(r) == cls]
        parts.append(f"## {title} and their Yamada polynomials\n")
        parts.append("| Name | Chirality | Yamada |\n|---|---|---|")
        parts.extend(f"| {display_name(r)} | {r.chirality} | `{r.yamada}` |" for r in rows)
        parts.append(f"\n## PD codes of {title.lower()}\n")
        parts.append("| Name | PD code |\n|---|---|")
        parts.extend(f"| {display_name(r)} | `{r.pd}` |" for r in rows)
        parts.append("")
    return "\n".join(parts)


def to_csv(records: Sequence[ClassRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["Name", "Chirality", "Yamada", "PD code"])
    for r in sort_records(records):
        w.writerow([display_name(r), r.chirality, r.yamada, r.pd])
    return buf.getvalue()


def to_json(records: Sequence[ClassRecord]) -> str:
    return json.dumps([r.to_dict() for r in sort_records(records)], indent=1, sort_keys=True) + "\n"


def records_from_json(text: str) -> list[ClassRecord]:
    return [ClassRecord.from_dict(row) for row in json.loads(text)]


def emit_tables(records: Sequence[ClassRecord], fmt: str, out_dir: Path | None = None) -> str:
    """Render ``records`` in ``fmt``; also write ``tables.<fmt>`` into ``out_dir`` if given."""
    render = {"md": to_markdown, "csv": to_csv, "json": to_json}.get(fmt)
    if render is None:
        raise ValueError(f"unknown table format {fmt!r}; expected one of {', '.join(FORMATS)}")
    text = render(records)
    if out_dir is not None:
        path = Path(out_dir) / f"tables.{fmt}"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return text
