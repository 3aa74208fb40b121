"""
Reading and writing catalog files (JSON lines or CSV)
"""

import io
import logging
import sys
from pathlib import Path
from typing import Iterable, List, Optional

import pandas as pd
from pydantic import ValidationError

from cli.models import CATALOG_COLUMNS, CatalogRecord
from core.errors import CatalogParseError

logger = logging.getLogger(__name__)

STDIN = "-"


def infer_format(path: Optional[str], default: str = "jsonl") -> str:
    if path and path != STDIN and Path(path).suffix.lower() == ".csv":
        return "csv"
    return default


def _first_error(error: ValidationError) -> str:
    detail = error.errors()[0]
    location = ".".join(str(part) for part in detail.get("loc", ())) or "record"
    return f"{location}: {detail.get('msg')}"


# ============================================================================
# Serialization
# ============================================================================

def serialize_jsonl(records: Iterable[CatalogRecord]) -> str:
    return "".join(record.to_line() + "\n" for record in records)


def serialize_csv(records: Iterable[CatalogRecord]) -> str:
    rows = [
        {key: "" if value is None else value
         for key, value in record.model_dump(include=set(CATALOG_COLUMNS)).items()}
        for record in records
    ]
    df = pd.DataFrame(rows, columns=list(CATALOG_COLUMNS), dtype=str)
    return df.to_csv(index=False, lineterminator="\n")


def serialize(records: Iterable[CatalogRecord], fmt: str) -> str:
    if fmt == "csv":
        return serialize_csv(records)
    if fmt == "jsonl":
        return serialize_jsonl(records)
    raise ValueError(f"unknown catalog format: {fmt}")


def write_catalog(records: List[CatalogRecord], path: Optional[str], fmt: str) -> None:
    """Write to path, or to stdout when path is None or "-" """
    text = serialize(records, fmt)
    if path is None or path == STDIN:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(path).write_text(text, encoding="utf-8", newline="")
    logger.info(f"Wrote {len(records)} records to {path}")


# ============================================================================
# Parsing
# ============================================================================

def parse_jsonl(text: str) -> List[CatalogRecord]:
    records = []
    for line_number, line in enumerate(text.split("\n"), 1):
        if not line.strip():
            continue
        try:
            records.append(CatalogRecord.model_validate_json(line))
        except ValidationError as e:
            raise CatalogParseError(line_number, _first_error(e)) from None
    return records


def parse_csv(text: str) -> List[CatalogRecord]:
    if not text.strip():
        return []
    try:
        df = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise CatalogParseError(1, f"unreadable CSV: {e}") from None

    missing = [c for c in CATALOG_COLUMNS if c not in df.columns]
    if missing:
        raise CatalogParseError(1, f"header lacks columns {missing}")

    records = []
    # header is line 1
    for line_number, row in enumerate(df.to_dict(orient="records"), 2):
        values = {key: (value if value != "" else None) for key, value in row.items()}
        try:
            records.append(CatalogRecord(**values))
        except ValidationError as e:
            raise CatalogParseError(line_number, _first_error(e)) from None
    return records


def parse(text: str, fmt: str) -> List[CatalogRecord]:
    return parse_csv(text) if fmt == "csv" else parse_jsonl(text)


def read_catalog(path: str, fmt: Optional[str] = None) -> List[CatalogRecord]:
    """Read a catalog file; "-" reads standard input"""
    fmt = fmt or infer_format(path)
    if path == STDIN:
        text = sys.stdin.read()
    else:
        text = Path(path).read_text(encoding="utf-8")
    records = parse(text, fmt)
    logger.debug(f"Read {len(records)} records from {path}")
    return records
