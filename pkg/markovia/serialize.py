"""JSON report and CSV trace writers."""

import csv
import json
import math
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ConfigError
from .report import DiagnosticReport


def jsonable(value: Any) -> Any:
    """Convert numpy scalars, tuples and non-finite floats to plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def report_to_json(report: DiagnosticReport) -> str:
    """Stable JSON text for a report."""
    return json.dumps(jsonable(report.to_dict()), indent=2, ensure_ascii=False) + "\n"


def write_report(
    report: DiagnosticReport, path: str | Path, started: float | None = None
) -> Path:
    """Write the report and a `<name>.sidecar.json` holding run timestamps.

    The report itself contains nothing time-dependent.
    """
    path = Path(path)
    path.write_text(report_to_json(report))
    sidecar = path.with_name(path.name + ".sidecar.json")
    meta: dict[str, Any] = {
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "report": path.name,
    }
    if started is not None:
        meta["wall_seconds"] = round(time.perf_counter() - started, 3)
    sidecar.write_text(json.dumps(meta, indent=2) + "\n")
    return sidecar


def read_report(path: str | Path) -> DiagnosticReport:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read report: {e.strerror}", str(path))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, str(path), e.lineno, e.colno)
    return DiagnosticReport.from_dict(data, str(path))


def write_csv(path: str | Path, columns: list[str], rows: list[dict[str, Any]]) -> None:
    """Write trace rows with a fixed column order."""
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k, "")) for k in columns})


def _csv_cell(value: Any) -> Any:
    value = jsonable(value)
    if isinstance(value, list):
        return "".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return value
