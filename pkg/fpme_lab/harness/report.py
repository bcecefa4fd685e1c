import csv
import json
import logging
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from fpme_lab.errors import InvalidArgumentError, ReportIOError
from fpme_lab.harness.readers import json_reader

__all__ = [
    "SCHEMA_VERSION",
    "REPORT_FORMATS",
    "RELATIONS",
    "Check",
    "ExperimentReport",
    "emit_report",
    "load_report",
    "write_timing",
]

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

REPORT_FORMATS = ("json", "csv", "md")

RELATIONS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
}


def _plain(value):
    if isinstance(value, Mapping):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(item) for item in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return value


@dataclass(frozen=True)
class Check:
    """
    One pass/fail flag and the comparison behind it: `value relation threshold`.
    """

    name: str
    value: float
    relation: str
    threshold: float
    passed: bool

    @classmethod
    def compare(cls, name: str, value, relation: str, threshold) -> "Check":
        if relation not in RELATIONS:
            raise InvalidArgumentError(f"unknown relation '{relation}'")

        value = float(value)
        threshold = float(threshold)
        passed = not math.isnan(value) and bool(RELATIONS[relation](value, threshold))
        return cls(name, value, relation, threshold, passed)

    @classmethod
    def trivial(cls, name: str) -> "Check":
        """A check that holds identically, for example every gap of a constant G."""
        return cls(name, 0.0, "==", 0.0, True)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "relation": self.relation,
            "threshold": self.threshold,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ExperimentReport:
    """
    Outcome of one harness run.

    ExperimentReport(mode=mode, version=version, config=config, checks=checks,
                     columns=columns, rows=rows, slopes=slopes, notes=notes)

    `rows` is the CSV table: every row has exactly `columns` as keys.
    """

    mode: str
    version: str
    config: dict = field(default_factory=dict)
    checks: Tuple[Check, ...] = ()
    columns: Tuple[str, ...] = ()
    rows: Tuple[dict, ...] = ()
    slopes: Dict[str, float] = field(default_factory=dict)
    notes: Tuple[str, ...] = ()
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(self, "checks", tuple(self.checks))
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(_plain(row) for row in self.rows))
        object.__setattr__(self, "notes", tuple(self.notes))
        object.__setattr__(self, "config", _plain(self.config))
        object.__setattr__(self, "slopes", {key: float(value) for key, value in self.slopes.items()})

        for row in self.rows:
            if tuple(row) != self.columns:
                raise InvalidArgumentError(f"row keys {tuple(row)} differ from columns {self.columns}")

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_checks(self) -> List[Check]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "mode": self.mode,
            "version": self.version,
            "passed": self.passed,
            "config": self.config,
            "checks": [check.to_dict() for check in self.checks],
            "slopes": dict(self.slopes),
            "notes": list(self.notes),
            "columns": list(self.columns),
            "rows": [dict(row) for row in self.rows],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ExperimentReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise InvalidArgumentError(f"unsupported report schema {data.get('schema_version')!r}")

        return cls(
            mode=data["mode"],
            version=data["version"],
            config=data["config"],
            checks=tuple(
                Check(c["name"], c["value"], c["relation"], c["threshold"], c["passed"])
                for c in data["checks"]
            ),
            columns=tuple(data["columns"]),
            rows=tuple(data["rows"]),
            slopes=data["slopes"],
            notes=tuple(data["notes"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _markdown_table(columns: Sequence[str], rows: Iterable[Sequence]) -> List[str]:
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for row in rows:
        lines.append("| " + " | ".join(_cell(value) for value in row) + " |")
    return lines


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _markdown(report: ExperimentReport) -> str:
    verdict = "PASS" if report.passed else "FAIL"
    lines = [f"# fpme-lab {report.mode} report", "", f"Version {report.version}: **{verdict}**", ""]

    lines += ["## Checks", ""]
    lines += _markdown_table(
        ("check", "value", "relation", "threshold", "passed"),
        ((c.name, c.value, c.relation, c.threshold, "yes" if c.passed else "no") for c in report.checks),
    )

    if report.slopes:
        lines += ["", "## Slopes", ""]
        lines += _markdown_table(("quantity", "slope"), report.slopes.items())

    if report.rows:
        lines += ["", "## Data", ""]
        lines += _markdown_table(report.columns, (row.values() for row in report.rows))

    if report.notes:
        lines += ["", "## Notes", ""] + [f"- {note}" for note in report.notes]

    return "\n".join(lines) + "\n"


def _write(path: Path, write) -> None:
    try:
        with path.open("w", newline="") as file:
            write(file)
    except OSError as error:
        raise ReportIOError(path, error) from error


def emit_report(report: ExperimentReport, output_dir, formats: Iterable[str] = ("json",)) -> List[Path]:
    """
    Write report.<format> into output_dir for each format and return the paths.

    The CSV file holds `report.rows` under a header of `report.columns`.
    """
    formats = list(formats)
    unknown = [fmt for fmt in formats if fmt not in REPORT_FORMATS]
    if unknown:
        raise InvalidArgumentError(f"unknown report formats {unknown}")

    output_dir = Path(output_dir)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as error:
        raise ReportIOError(output_dir, error) from error

    paths = []
    for fmt in formats:
        path = output_dir / f"report.{fmt}"

        if fmt == "json":
            _write(path, lambda file: file.write(report.to_json()))
        elif fmt == "csv":

            def write_csv(file):
                writer = csv.DictWriter(file, fieldnames=list(report.columns))
                writer.writeheader()
                writer.writerows(report.rows)

            _write(path, write_csv)
        else:
            _write(path, lambda file: file.write(_markdown(report)))

        logger.info("wrote %s", path)
        paths.append(path)

    return paths


def write_timing(output_dir, timings: Mapping[str, float]) -> Path:
    """Wall-clock seconds per stage, kept out of the deterministic report."""
    path = Path(output_dir) / "timing.json"
    _write(path, lambda file: file.write(json.dumps(_plain(dict(timings)), indent=2) + "\n"))
    return path


def load_report(path) -> ExperimentReport:
    """Read a report.json written by `emit_report` back into a report."""
    return ExperimentReport.from_dict(json_reader.load(path))
