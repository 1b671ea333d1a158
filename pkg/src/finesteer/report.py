"""Sweep records and their CSV / JSON-lines serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

from .constants import VERDICT_SLACK
from .steering import Scenario, classify


@dataclass(frozen=True)
class SweepRecord:
    param_name: str
    param_value: float
    functional: float
    bound_I: float
    bound_II: float
    chsh: float
    verdict_I: bool
    verdict_II: bool

    @classmethod
    def build(cls, param_name, param_value, functional, chsh, slack=VERDICT_SLACK) -> "SweepRecord":
        v1 = classify(functional, Scenario.I, slack)
        v2 = classify(functional, Scenario.II, slack)
        defined = math.isfinite(functional)
        return cls(param_name, float(param_value), float(functional), v1.bound, v2.bound, float(chsh),
                   defined and v1.steerable, defined and v2.steerable)

    def is_consistent(self, slack=VERDICT_SLACK) -> bool:
        if not math.isfinite(self.functional):
            return not (self.verdict_I or self.verdict_II)
        return (self.verdict_I == (self.functional > self.bound_I + slack)
                and self.verdict_II == (self.functional > self.bound_II + slack))


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".10g")
    if v is None:
        return ""
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def format_records(records, fmt: str) -> str:
    """Render dataclass instances or dicts as CSV (header + rows) or JSON lines."""
    rows = [asdict(r) if not isinstance(r, dict) else r for r in records]
    if fmt == "json":
        return "".join(json.dumps({k: _json_value(v) for k, v in row.items()}) + "\n" for row in rows)
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0]))
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row.values()])
    return buf.getvalue()
