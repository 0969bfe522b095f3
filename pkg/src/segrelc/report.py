"""Structured reports: JSON (full data) and markdown (summary and witnesses)."""

from __future__ import annotations

import json
import math
import os
from fractions import Fraction
from pathlib import Path

SCHEMA_VERSION = 1
TABLE_PREVIEW = 20


def to_plain(obj):
    """Recursively convert to JSON-safe values (exact numbers become strings)."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_plain(v) for v in obj)
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj.numerator)
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if hasattr(obj, "as_dict"):
        return to_plain(obj.as_dict())
    return str(obj)


def render_json(report: dict) -> str:
    data = dict(to_plain(report))
    data["schema_version"] = SCHEMA_VERSION
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _witness_lines(entry: dict) -> list[str]:
    out = []
    for w in entry.get("witnesses") or []:
        out.append(f"  - `{json.dumps(to_plain(w), sort_keys=True)}`")
    return out


def render_markdown(report: dict) -> str:
    lines = [f"# segrelc report (schema {SCHEMA_VERSION})", ""]
    summary = report.get("summary", {})
    lines.append(
        f"Exit code {report.get('exit_code')}: "
        + ", ".join(f"{k} {summary.get(k, 0)}" for k in ("verified-on-box", "refuted", "inconclusive"))
    )
    lines.append("")
    for n, entry in enumerate(report.get("commands", []), 1):
        lines.append(f"## {n}. `{entry['statement']}`")
        lines.append("")
        lines.append(f"- status: **{entry.get('status')}**")
        if entry.get("certainty"):
            lines.append(f"- certainty: {entry['certainty']}")
        if entry.get("detail"):
            lines.append(f"- detail: {entry['detail']}")
        wl = _witness_lines(entry)
        if wl:
            lines.append("- witnesses:")
            lines.extend(wl[:TABLE_PREVIEW])
            if len(wl) > TABLE_PREVIEW:
                lines.append(f"  - ... {len(wl) - TABLE_PREVIEW} more in the JSON report")
        rows = (entry.get("payload") or {}).get("table_preview")
        if rows:
            lines.append("")
            lines.append("| multidegree | dims by index |")
            lines.append("|---|---|")
            for r in rows[:TABLE_PREVIEW]:
                lines.append(f"| {r['multidegree']} | {r['dims']} |")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def emit_report(report: dict, fmt: str = "json", path: str | os.PathLike | None = None) -> str:
    if fmt not in ("json", "markdown"):
        raise ValueError(f"unknown report format {fmt!r}")
    text = render_json(report) if fmt == "json" else render_markdown(report)
    if path is not None:
        p = Path(path)
        try:
            if p.parent and not p.parent.exists():
                p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write report to {p}: {exc}") from exc
    return text


def load_report(path: str | os.PathLike) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
