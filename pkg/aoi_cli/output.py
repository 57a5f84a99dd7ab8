"""
Output records and their CSV / JSON encodings.

Every command produces one :class:`OutputRecord`. Both encodings write each
float with the shortest decimal that round-trips (``repr``), so a value read
back from the CSV equals the one read from the JSON. Non-finite floats (an
FR age whose decoding probability underflows, a z-score with no spread) are
written as the strings ``"inf"``, ``"-inf"`` and ``"nan"`` in both encodings,
so the JSON stays strict.
"""

import csv
import io
import json
import math
import numbers
from dataclasses import dataclass, field

SCHEMA_VERSION = "1"


@dataclass
class OutputRecord:
    """
    Result of one CLI invocation.

    Attributes
    ----------
    command : str
        Subcommand name, e.g. ``"fr-curve"``.
    params : dict
        Resolved parameters (flags after defaults were applied).
    rows : list of dict
        Column-named rows; every row of a record has the same columns.
    schema_version : str
        Version of this layout.
    """
    command: str
    params: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def columns(self) -> list[str]:
        """Column names in first-seen order."""
        names = {}
        for row in self.rows:
            for name in row:
                names.setdefault(name, None)
        return list(names)


def plain(value):
    """Convert numpy scalars and tuples to JSON-ready Python values."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    return str(value)


def _cell(value) -> str:
    value = plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return " ".join(_cell(v) for v in value)
    return str(value)


def to_json(record: OutputRecord) -> str:
    """Single JSON object, newline-terminated."""
    payload = {
        "schema_version": record.schema_version,
        "command": record.command,
        "params": plain(record.params),
        "rows": [plain(row) for row in record.rows],
    }
    return json.dumps(payload, allow_nan=False) + "\n"


def to_csv(record: OutputRecord) -> str:
    """Header row plus one line per row, LF line endings; missing cells are empty."""
    buffer = io.StringIO()
    columns = record.columns()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in record.rows:
        writer.writerow([_cell(row.get(name)) for name in columns])
    return buffer.getvalue()


def render(record: OutputRecord, fmt: str = "csv") -> str:
    """Encode ``record`` as ``"csv"`` or ``"json"``."""
    if fmt == "json":
        return to_json(record)
    if fmt == "csv":
        return to_csv(record)
    raise ValueError(f"Unknown output format: {fmt}")

