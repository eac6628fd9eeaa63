"""Verification reports: named checks with residuals and tolerances.

JSON output is deterministic for identical inputs: keys are sorted, floats are
rounded to 12 significant digits and the timestamp is only included on
request.
"""

from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone
from importlib import resources
from typing import Any

import numpy as np

from .groth import GrothElement

SCHEMA_VERSION = "1.0"
VERSION = "0.1.0"


def _round(x: float) -> float | str:
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.12g}")


def to_jsonable(value: Any) -> Any:
    if isinstance(value, GrothElement):
        return [{"weight": list(lam), "multiplicity": m} for lam, m in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _round(float(value))
    if isinstance(value, dict):
        return {_key(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if value is None or isinstance(value, str):
        return value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _key(k: Any) -> str:
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


class Report:
    def __init__(self, command: str, meta: dict, timestamp: bool = False):
        self.command = command
        self.meta = dict(meta)
        if timestamp:
            self.meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        self.results: dict[str, dict] = {}
        self.summary: dict[str, Any] = {}
        self.table: list[dict] | None = None

    def check(self, name: str, passed: bool, residual: float | None = None,
              tolerance: float | None = None, **details: Any) -> bool:
        """Record a check. Exact (integer) comparisons use tolerance 0."""
        if name in self.results:
            raise ValueError(f"duplicate check {name!r}")
        entry = {"pass": bool(passed), "residual": residual,
                 "tolerance": 0.0 if tolerance is None else tolerance}
        if details:
            entry["details"] = details
        self.results[name] = entry
        return bool(passed)

    def residual_check(self, name: str, residual: float, tolerance: float, **details: Any) -> bool:
        return self.check(name, residual < tolerance, residual, tolerance, **details)

    def merge(self, prefix: str, other: "Report") -> None:
        for name, entry in other.results.items():
            self.results[f"{prefix}/{name}"] = entry
        if other.summary:
            self.summary[prefix] = other.summary

    @property
    def all_pass(self) -> bool:
        return all(r["pass"] for r in self.results.values())

    def to_dict(self) -> dict:
        return to_jsonable({
            "schema_version": SCHEMA_VERSION,
            "version": VERSION,
            "command": self.command,
            "meta": self.meta,
            "results": self.results,
            "summary": self.summary,
            "all_pass": self.all_pass,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_table(self) -> str:
        lines = [f"# qsymx {self.command}"]
        for k in sorted(self.meta):
            lines.append(f"#   {k}: {_plain(self.meta[k])}")
        if self.table:
            cols = list(self.table[0])
            widths = [max(len(c), *(len(_plain(r[c])) for r in self.table)) for c in cols]
            lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
            for row in self.table:
                lines.append("  ".join(_plain(row[c]).rjust(w) for c, w in zip(cols, widths)))
        width = max((len(n) for n in self.results), default=10)
        for name, r in self.results.items():
            status = "PASS" if r["pass"] else "FAIL"
            res = "" if r["residual"] is None else f"  residual={r['residual']:.3e}  tol={r['tolerance']:.0e}"
            lines.append(f"{status}  {name.ljust(width)}{res}")
        for k in sorted(self.summary):
            lines.append(f"{k}: {_plain(self.summary[k])}")
        lines.append("ALL PASS" if self.all_pass else "SOME CHECKS FAILED")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        if not self.table:
            raise ValueError("CSV output is only available for dimension tables")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(self.table[0]), lineterminator="\n")
        writer.writeheader()
        for row in self.table:
            writer.writerow({k: _plain(v) for k, v in row.items()})
        return buf.getvalue()


def _plain(v: Any) -> str:
    if isinstance(v, GrothElement):
        return " + ".join(f"{m}*V{list(lam)}" for lam, m in v) or "0"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_plain(x) for x in v) + ")"
    return str(v)


def load_schema() -> dict:
    return json.loads(resources.files("qsymx").joinpath("report_schema.json").read_text())
