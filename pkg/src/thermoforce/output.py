"""
Table writers for scan results.

CSV: header row, comma separated. Floats carry 17 significant digits in both
formats so they read back exactly. JSON: {"metadata": {...}, "rows": [...]},
one row object per line. Neither format carries timestamps, so identical
inputs give identical bytes.
"""

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional, TextIO

from thermoforce import __version__
from thermoforce.langevin import GENERATOR_ID
from thermoforce.scans import ScanResult

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Locale-independent text for one CSV cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def json_value(value: Any) -> str:
    """JSON text for one cell; finite floats carry 17 significant digits."""
    if isinstance(value, float) and math.isfinite(value):
        return format(value, ".17g")
    return json.dumps(value)


def build_metadata(result: ScanResult, config_sha256: str) -> Dict[str, Any]:
    """Metadata block of the JSON output."""
    summary = result.to_dict()
    del summary["rows"]
    return {
        "tool": "thermoforce",
        "version": __version__,
        "config_sha256": config_sha256,
        "seed": result.seed,
        "generator": GENERATOR_ID,
        **summary,
    }


def write_csv(result: ScanResult, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([format_value(row.get(column)) for column in result.columns])


def write_json(result: ScanResult, config_sha256: str, stream: TextIO) -> None:
    metadata = json.dumps(build_metadata(result, config_sha256), indent=2)
    stream.write('{\n  "metadata": ' + metadata.replace("\n", "\n  ") + ',\n  "rows": [')
    for index, row in enumerate(result.to_dict()["rows"]):
        cells = ", ".join(f"{json.dumps(column)}: {json_value(value)}" for column, value in row.items())
        stream.write(("," if index else "") + "\n    {" + cells + "}")
    stream.write("\n  ]\n}\n" if result.rows else "]\n}\n")


def render(result: ScanResult, fmt: str, config_sha256: str) -> str:
    """Serialize a result to text in the requested format ("csv" or "json")."""
    buffer = io.StringIO()
    if fmt == "csv":
        write_csv(result, buffer)
    elif fmt == "json":
        write_json(result, config_sha256, buffer)
    else:
        raise ValueError(f"unsupported output format: {fmt!r}")
    return buffer.getvalue()


def emit(result: ScanResult, fmt: str, config_sha256: str, path: Optional[Path] = None) -> str:
    """
    Write a result to a file, or return the text for stdout when no path is given.

    Returns:
        The rendered text
    """
    text = render(result, fmt, config_sha256)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="")
        logger.info(f"Wrote {len(result.rows)} rows to {path}")
    return text
