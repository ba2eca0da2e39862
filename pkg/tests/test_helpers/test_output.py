"""Tests for output envelopes."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
import pytest

from polymer_endpoint.helpers.output import (
    EnvelopeWriter,
    OutputEnvelope,
    format_csv_value,
    rows_from_records,
)


@pytest.fixture
def envelope() -> OutputEnvelope:
    """Envelope with mixed value types."""
    return OutputEnvelope(
        command="tw gue",
        config_echo={"tol": 1e-10, "m_window": (-8.0, 25.0), "quad_n": 80},
        rows=[
            {"x": 0.0, "F": np.float64(0.96937), "converged": True},
            {"x": 1.0, "F": 0.1 + 0.2, "converged": np.bool_(False), "extra": None},
        ],
        warnings=["something"],
    )


class TestFormatCsvValue:
    """Tests for format_csv_value."""

    @pytest.mark.parametrize(
        ("value", "expected"),
        [
            (True, "true"),
            (np.bool_(False), "false"),
            (None, ""),
            (3, "3"),
            (0.1 + 0.2, "0.3"),
            ([1.0, 2.5], "1;2.5"),
            (math.inf, "inf"),
        ],
    )
    def test_cells(self, value, expected):
        """Cells render compactly with 12 significant digits."""
        assert format_csv_value(value) == expected


class TestOutputEnvelope:
    """Tests for OutputEnvelope."""

    def test_columns_first_seen_order(self, envelope):
        """Columns gathered across rows."""
        assert envelope.columns() == ["x", "F", "converged", "extra"]

    def test_json_fields(self, envelope):
        """JSON carries version, command, sorted config, rows and warnings."""
        payload = json.loads(envelope.to_json())
        assert list(payload) == [
            "schema_version",
            "command",
            "config_echo",
            "rows",
            "warnings",
        ]
        assert payload["schema_version"] == "1"
        assert list(payload["config_echo"]) == ["m_window", "quad_n", "tol"]
        assert payload["config_echo"]["m_window"] == [-8.0, 25.0]
        assert payload["rows"][1]["F"] == 0.1 + 0.2
        assert payload["rows"][1]["converged"] is False

    def test_json_non_finite_as_string(self):
        """Infinities survive as strings instead of invalid JSON."""
        env = OutputEnvelope("x", {}, [{"upper_env": math.inf}])
        assert json.loads(env.to_json())["rows"][0]["upper_env"] == "inf"

    def test_csv_header_and_rows(self, envelope):
        """CSV has comment header lines then a table."""
        text = envelope.to_csv()
        lines = text.splitlines()
        assert lines[0] == "# schema_version: 1"
        assert lines[1] == "# command: tw gue"
        assert lines[2].startswith("# config: ")
        assert lines[3] == "# warning: something"
        table = list(csv.reader(io.StringIO("\n".join(lines[4:]))))
        assert table[0] == ["x", "F", "converged", "extra"]
        assert table[1] == ["0", "0.96937", "true", ""]
        assert table[2] == ["1", "0.3", "false", ""]

    def test_csv_and_json_agree(self, envelope):
        """Both renderings hold the same rows."""
        payload = json.loads(envelope.to_json())
        table = list(csv.DictReader(envelope.to_csv().splitlines()[4:]))
        for row_json, row_csv in zip(payload["rows"], table, strict=True):
            assert float(row_csv["F"]) == pytest.approx(row_json["F"], rel=1e-11)

    def test_render_unknown_format(self, envelope):
        """Unknown formats are rejected."""
        with pytest.raises(ValueError, match="Unknown output format"):
            envelope.render("xml")


class TestEnvelopeWriter:
    """Tests for EnvelopeWriter."""

    def test_write_to_stream(self, envelope):
        """Without a path the text goes to the stream."""
        stream = io.StringIO()
        text = EnvelopeWriter(stream).write(envelope, "json")
        assert stream.getvalue() == text

    def test_write_to_file(self, envelope, tmp_path):
        """With a path the stream stays untouched."""
        stream = io.StringIO()
        target = tmp_path / "out.csv"
        text = EnvelopeWriter(stream).write(envelope, "csv", target)
        assert target.read_text(encoding="utf-8") == text
        assert stream.getvalue() == ""


def test_rows_from_records():
    """Dataclasses and mappings both become dicts."""

    @dataclass
    class Record:
        a: int
        b: float

    rows = rows_from_records([Record(1, 2.0), {"a": 3, "b": 4.0}])
    assert rows == [{"a": 1, "b": 2.0}, {"a": 3, "b": 4.0}]
