"""
Write result tables as CSV or JSON.
"""
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

import config
from optics.utils import DomainError, OutputError, ensure_directory

logger = logging.getLogger(__name__)

# 17 significant digits reparse to the identical double
FLOAT_FORMAT = "%.16e"


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _columns(rows: List[Dict[str, Any]], columns: Optional[Sequence[str]]) -> List[str]:
    if columns is not None:
        expected = list(columns)
    elif rows:
        expected = list(rows[0])
    else:
        return []
    for index, row in enumerate(rows):
        if set(row) != set(expected):
            raise DomainError(f"row {index} has fields {sorted(row)}, expected {sorted(expected)}")
    return expected


def default_output_path(command: str, fmt: str) -> str:
    """Default table location, <FERMAT_OUTPUT_DIR>/<command>.<fmt>."""
    return os.path.join(config.OUTPUT_DIR, f"{command}.{fmt}")


def emit_table(rows: List[Dict[str, Any]], fmt: str, path: str,
               columns: Optional[Sequence[str]] = None) -> str:
    """
    Write rows with a shared schema to a CSV or JSON file.

    CSV has a header row, minimal RFC 4180 quoting and floats in
    scientific notation with 17 significant digits. JSON is an array of
    objects with the same fields.

    Args:
        rows: Table rows, all with the same keys
        fmt: csv or json
        path: Output file, or - for standard output
        columns: Column order; required to write a header for an empty table

    Returns:
        The path written

    Raises:
        DomainError: If the format is unknown or the rows differ in schema
        OutputError: If the file cannot be written
    """
    if fmt not in config.OUTPUT_FORMATS:
        raise DomainError(f"unknown output format {fmt!r}, expected one of {config.OUTPUT_FORMATS}")
    fields = _columns(rows, columns)

    try:
        if path != "-":
            ensure_directory(os.path.dirname(path))

        if fmt == "csv":
            df = pd.DataFrame(rows, columns=fields)
            if path == "-":
                df.to_csv(sys.stdout, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
            else:
                df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        else:
            ordered = [{name: row[name] for name in fields} for row in rows]
            if path == "-":
                json.dump(ordered, sys.stdout, indent=2, ensure_ascii=False, default=_json_default)
                sys.stdout.write("\n")
            else:
                with open(path, 'w', encoding='utf-8') as f:
                    json.dump(ordered, f, indent=2, ensure_ascii=False, default=_json_default)

    except OSError as e:
        logger.error(f"Error writing {fmt.upper()} table to {path}: {e}")
        raise OutputError(f"cannot write {path}: {e}", path=path) from e

    logger.info(f"Wrote {len(rows)} rows to {path}")
    return path
