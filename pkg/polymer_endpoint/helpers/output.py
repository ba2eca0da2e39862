"""Generic result envelopes with CSV and JSON renderings.

An envelope carries a command name, the configuration it ran with, tabular
rows and warnings. Both renderings hold the same fields in the same order.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Final

_LOGGER = logging.getLogger(__name__)

CSV_SIGNIFICANT_DIGITS: Final = 12
FORMATS: Final = ("csv", "json")


def _normalize(value: Any) -> Any:
    """Convert numpy scalars and tuples to plain JSON-compatible values."""
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        value = value.item()
    if isinstance(value, tuple):
        return [_normalize(v) for v in value]
    if isinstance(value, list):
        return [_normalize(v) for v in value]
    if isinstance(value, Mapping):
        return {str(k): _normalize(v) for k, v in value.items()}
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def format_csv_value(value: Any, digits: int = CSV_SIGNIFICANT_DIGITS) -> str:
    """Render a single CSV cell."""
    value = _normalize(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, f".{digits}g")
    if value is None:
        return ""
    if isinstance(value, list):
        return ";".join(format_csv_value(v, digits) for v in value)
    return str(value)


@dataclass
class OutputEnvelope:
    """Versioned result of one command."""

    command: str
    config_echo: dict[str, Any]
    rows: list[dict[str, Any]]
    warnings: list[str] = field(default_factory=list)
    schema_version: str = "1"

    def columns(self) -> list[str]:
        """Column names in first-seen order across all rows."""
        seen: dict[str, None] = {}
        for row in self.rows:
            for key in row:
                seen.setdefault(key, None)
        return list(seen)

    def to_dict(self) -> dict[str, Any]:
        """Plain dictionary form, keys in a fixed order."""
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "config_echo": _normalize(dict(sorted(self.config_echo.items()))),
            "rows": [_normalize(row) for row in self.rows],
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        """JSON rendering; floats use the shortest round-trip representation."""
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        """CSV rendering with a '#'-prefixed header carrying the config echo."""
        buffer = io.StringIO()
        payload = self.to_dict()
        buffer.write(f"# schema_version: {self.schema_version}\n")
        buffer.write(f"# command: {self.command}\n")
        buffer.write(
            f"# config: {json.dumps(payload['config_echo'], sort_keys=True)}\n"
        )
        for warning in self.warnings:
            buffer.write(f"# warning: {warning}\n")
        columns = self.columns()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in self.rows:
            writer.writerow([format_csv_value(row.get(col)) for col in columns])
        return buffer.getvalue()

    def render(self, fmt: str) -> str:
        """Render in the named format."""
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"Unknown output format: {fmt}. Expected one of {FORMATS}")


class EnvelopeWriter:
    """Writes envelopes to a stream or to a file."""

    def __init__(self, stream: io.TextIOBase | Any | None = None) -> None:
        """Initialize envelope writer.

        Args:
            stream: Default text stream used when no path is given
        """
        self.stream = stream

    def write(
        self,
        envelope: OutputEnvelope,
        fmt: str = "csv",
        path: str | Path | None = None,
    ) -> str:
        """Render and emit an envelope.

        Args:
            envelope: Envelope to emit
            fmt: "csv" or "json"
            path: Optional destination file; the default stream otherwise

        Returns:
            The rendered text
        """
        text = envelope.render(fmt)
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
            _LOGGER.info("Wrote %s output for %s to %s", fmt, envelope.command, path)
        elif self.stream is not None:
            self.stream.write(text)
        return text


def rows_from_records(records: Sequence[Any]) -> list[dict[str, Any]]:
    """Turn dataclass-like records into row dictionaries."""
    rows = []
    for record in records:
        if isinstance(record, Mapping):
            rows.append(dict(record))
        else:
            rows.append(dict(vars(record)))
    return rows
