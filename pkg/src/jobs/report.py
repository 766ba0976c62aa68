"""
Run reports: a byte-stable JSON document plus a Markdown summary for humans.
"""
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Any, Dict, List, Optional
import os

import orjson
from tabulate import tabulate

SCHEMA_VERSION = 1
JSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2


def dumps(doc: Any) -> bytes:
    return orjson.dumps(doc, option=JSON_OPTIONS)


@dataclass
class Report:
    """
    - command: the subcommand that produced it
    - config: the resolved JobConfig
    - results: command output
    - assertions: one {"name", "ok", ...} entry per checked identity
    """
    command: str
    config: Dict[str, Any]
    results: Dict[str, Any] = field(default_factory=dict)
    assertions: List[Dict[str, Any]] = field(default_factory=list)

    def check(self, name: str, ok: bool, **details: Any) -> bool:
        self.assertions.append({"name": name, "ok": bool(ok), **details})
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(entry["ok"] for entry in self.assertions)

    def to_json(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "assertions": self.assertions,
            "ok": self.ok,
        }

    def dumps(self) -> bytes:
        return dumps(self.to_json())

    def write(self, path: str) -> str:
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(self.dumps())
        return path


def format_duration(delta: timedelta) -> str:
    total = delta.total_seconds()
    minutes, seconds = divmod(total, 60)
    return f"{int(minutes)}m {seconds:.2f}s" if minutes else f"{seconds:.2f}s"


def build_markdown_summary(report: Report, start_time: datetime, end_time: datetime,
                           output_path: Optional[str] = None) -> str:
    """The human summary printed to stderr; the JSON report stays the artifact."""
    rows = [
        [entry["name"], "pass" if entry["ok"] else "FAIL", entry.get("precision", "")]
        for entry in report.assertions
    ]
    table_md = tabulate(rows, ["Assertion", "Result", "Precision"], tablefmt="github")
    lines = [
        f"# {report.command} report",
        "",
        f"**Duration:** {format_duration(end_time - start_time)}",
        f"**Verdict:** {'pass' if report.ok else 'FAIL'} ({sum(e['ok'] for e in report.assertions)}/{len(report.assertions)})",
        "",
        table_md,
    ]
    if output_path:
        lines += ["", f"Report saved to: {output_path}"]
    return "\n".join(lines)
