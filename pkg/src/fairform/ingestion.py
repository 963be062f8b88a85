"""Pool and reference-table ingestion.

Loads candidate pools from CSV or JSON with field-level validation, applies
the eligibility exclusions, and reads the auxiliary tables (world-GDP CSV,
EPSCoR state list, threshold configuration).

Ingestion is tolerant where exclusion is strict: an empty cell or a literal
``unknown`` is carried forward as a missing-value marker for the exclusion
pass to act on, while a value that cannot be interpreted at all (a bad enum
token, a non-numeric rank) is a row-level error that drops the row at load
time. The eligibility rules are applied in fixed order (no scholar
profile, then missing feature, then industry) and the first matching rule
is the one logged.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .errors import ConfigError, IntegrityError, SchemaError
from .profiles import (
    UNRANKED,
    RawCandidate,
    ThresholdConfig,
    resolve_career_stage,
)

POOL_COLUMNS = (
    "id",
    "full_name",
    "gender",
    "ethnicity",
    "country",
    "us_state",
    "university_rank",
    "career_stage",
    "h_index",
    "has_scholar_profile",
    "sector",
)
REQUIRED_COLUMNS = tuple(c for c in POOL_COLUMNS if c != "full_name")

EXCLUSION_REASONS = ("no_scholar_profile", "missing_feature", "industry")

# Five-way name-inference ethnicity codes collapsed to the binary label.
_ETHNICITY_CODES = {
    "w_nl": "white",
    "b_nl": "non_white",
    "hl": "non_white",
    "a": "non_white",
    "ai_an": "non_white",
}

_TRUE_TOKENS = {"true", "1", "yes", "y"}
_FALSE_TOKENS = {"false", "0", "no", "n"}


@dataclass(frozen=True)
class RowIssue:
    """A field-level problem found while loading a pool file."""

    row: int
    column: str
    message: str


@dataclass(frozen=True)
class ExclusionEntry:
    candidate_id: str
    reason: str


@dataclass
class PoolFile:
    """A parsed pool plus its provenance and any rows dropped at load time."""

    format: str
    records: list[RawCandidate]
    source: str = ""
    snapshot_date: Optional[str] = None
    errors: list[RowIssue] = field(default_factory=list)


class _RowError(Exception):
    def __init__(self, column: str, message: str):
        self.column = column
        self.message = message


def _cell(value) -> str:
    if value is None:
        return ""
    return str(value).strip()


def _parse_gender(value) -> str:
    norm = _cell(value).lower()
    if norm in ("", "unknown"):
        return "unknown"
    if norm in ("female", "male"):
        return norm
    raise _RowError("gender", f"unknown gender value {norm!r}")


def _parse_ethnicity(value) -> str:
    norm = _cell(value).lower().replace("-", "_")
    if norm in ("", "unknown"):
        return "unknown"
    if norm in ("white", "non_white"):
        return norm
    if norm in _ETHNICITY_CODES:
        return _ETHNICITY_CODES[norm]
    raise _RowError("ethnicity", f"unknown ethnicity value {norm!r}")


def _parse_sector(value) -> str:
    norm = _cell(value).lower()
    if norm in ("", "unknown"):
        return "unknown"
    if norm in ("academia", "industry"):
        return norm
    raise _RowError("sector", f"unknown sector value {norm!r}")


def _parse_int(value, column: str, lo: int, hi: int) -> Optional[int]:
    norm = _cell(value)
    if norm == "":
        return None
    try:
        number = int(norm)
    except ValueError:
        raise _RowError(column, f"not an integer: {norm!r}") from None
    if not lo <= number <= hi:
        raise _RowError(column, f"{number} outside [{lo}, {hi}]")
    return number


def _parse_bool(value, column: str) -> bool:
    if isinstance(value, bool):
        return value
    norm = _cell(value).lower()
    if norm == "":
        return False
    if norm in _TRUE_TOKENS:
        return True
    if norm in _FALSE_TOKENS:
        return False
    raise _RowError(column, f"not a boolean: {norm!r}")


def _parse_record(row: dict) -> RawCandidate:
    candidate_id = _cell(row.get("id"))
    if not candidate_id:
        raise _RowError("id", "empty id")
    country = _cell(row.get("country")).upper() or None
    us_state = _cell(row.get("us_state")).upper() or None
    if us_state is not None and country != "US":
        raise _RowError("us_state", f"us_state {us_state!r} set but country is {country!r}")
    full_name = _cell(row.get("full_name")) or None
    return RawCandidate(
        id=candidate_id,
        gender=_parse_gender(row.get("gender")),
        ethnicity=_parse_ethnicity(row.get("ethnicity")),
        country=country,
        us_state=us_state,
        university_rank=_parse_int(row.get("university_rank"), "university_rank", 1, UNRANKED),
        career_stage=_cell(row.get("career_stage")) or "unknown",
        h_index=_parse_int(row.get("h_index"), "h_index", 0, 10**9),
        has_scholar_profile=_parse_bool(row.get("has_scholar_profile"), "has_scholar_profile"),
        sector=_parse_sector(row.get("sector")),
        full_name=full_name,
    )


def _ingest_rows(rows: Iterable[tuple[int, dict]], fmt: str, source: str) -> PoolFile:
    records: list[RawCandidate] = []
    issues: list[RowIssue] = []
    seen: dict[str, int] = {}
    for row_no, row in rows:
        raw_id = _cell(row.get("id"))
        if raw_id and raw_id in seen:
            raise IntegrityError(
                f"{source}: duplicate candidate id {raw_id!r} "
                f"(rows {seen[raw_id]} and {row_no})"
            )
        if raw_id:
            seen[raw_id] = row_no
        try:
            records.append(_parse_record(row))
        except _RowError as err:
            issues.append(RowIssue(row=row_no, column=err.column, message=err.message))
    return PoolFile(format=fmt, records=records, source=source, errors=issues)


def load_pool(path: Union[str, Path], format: Optional[str] = None) -> PoolFile:
    """Load and validate a candidate pool from a CSV or JSON file.

    The format is inferred from the extension unless given. A duplicate id
    anywhere in the file is a hard error; a row with an uninterpretable
    field is dropped and recorded in the returned ``errors`` list.
    """
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt not in ("csv", "json"):
        raise SchemaError(f"unsupported pool format {fmt!r}; expected csv or json")

    if fmt == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in REQUIRED_COLUMNS if c not in header]
            if missing:
                raise SchemaError(f"{path.name}: missing required columns: {', '.join(missing)}")
            rows = [(i, row) for i, row in enumerate(reader, start=2)]
    else:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if not isinstance(payload, list):
            raise SchemaError(f"{path.name}: expected a JSON array of candidate objects")
        for i, item in enumerate(payload, start=1):
            if not isinstance(item, dict):
                raise SchemaError(f"{path.name}: record {i} is not an object")
        rows = [(i, item) for i, item in enumerate(payload, start=1)]

    return _ingest_rows(rows, fmt, path.name)


def _record_to_row(c: RawCandidate) -> dict:
    return {
        "id": c.id,
        "full_name": c.full_name or "",
        "gender": c.gender,
        "ethnicity": c.ethnicity,
        "country": c.country or "",
        "us_state": c.us_state or "",
        "university_rank": "" if c.university_rank is None else c.university_rank,
        "career_stage": c.career_stage,
        "h_index": "" if c.h_index is None else c.h_index,
        "has_scholar_profile": "true" if c.has_scholar_profile else "false",
        "sector": c.sector,
    }


def dump_pool(
    records: Sequence[RawCandidate], path: Union[str, Path], format: Optional[str] = None
) -> None:
    """Write records in the pool schema; the output reloads identically."""
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=POOL_COLUMNS)
            writer.writeheader()
            for c in records:
                writer.writerow(_record_to_row(c))
    elif fmt == "json":
        rows = []
        for c in records:
            row = _record_to_row(c)
            rows.append({k: (None if v == "" else v) for k, v in row.items()})
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
    else:
        raise SchemaError(f"unsupported pool format {fmt!r}; expected csv or json")


def _missing_feature(c: RawCandidate) -> bool:
    if c.gender == "unknown" or c.ethnicity == "unknown":
        return True
    if resolve_career_stage(c.career_stage) == "unknown":
        return True
    if c.country is None or c.university_rank is None or c.h_index is None:
        return True
    if c.country == "US" and c.us_state is None:
        return True  # EPSCoR membership undecidable
    if c.sector == "unknown":
        return True
    return False


def apply_exclusions(
    pool: Union[PoolFile, Sequence[RawCandidate]],
) -> tuple[list[RawCandidate], list[ExclusionEntry]]:
    """Apply the eligibility rules; returns (retained, exclusion log).

    Rules fire in fixed order and the first match is logged: candidates
    without a scholar profile, then candidates missing any feature value
    (including an undecidable geolocation or sector), then candidates from
    industry. Every input candidate lands in exactly one of the two outputs.
    """
    records = pool.records if isinstance(pool, PoolFile) else list(pool)
    retained: list[RawCandidate] = []
    log: list[ExclusionEntry] = []
    for c in records:
        if not c.has_scholar_profile:
            log.append(ExclusionEntry(c.id, "no_scholar_profile"))
        elif _missing_feature(c):
            log.append(ExclusionEntry(c.id, "missing_feature"))
        elif c.sector == "industry":
            log.append(ExclusionEntry(c.id, "industry"))
        else:
            retained.append(c)
    if records and not retained:
        raise IntegrityError("every candidate was excluded; nothing to select from")
    return retained, log


def load_gdp_table(path: Union[str, Path, None] = None) -> dict[str, float]:
    """Read a two-column (country_code, gdp) CSV into a mapping.

    A non-numeric second field in the first row is treated as a header and
    skipped. ``None`` loads the bundled sample table.
    """
    text = _read_input(path, "world_gdp_sample.csv")
    table: dict[str, float] = {}
    reader = csv.reader(io.StringIO(text))
    for i, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if row[0].lstrip().startswith("#"):
            continue
        if len(row) < 2:
            raise SchemaError(f"GDP table row {i}: expected two columns, got {row!r}")
        code = row[0].strip().upper()
        try:
            gdp = float(row[1])
        except ValueError:
            if i == 1:
                continue  # header row
            raise SchemaError(f"GDP table row {i}: non-numeric GDP {row[1]!r}") from None
        if code in table:
            raise SchemaError(f"GDP table row {i}: duplicate country code {code!r}")
        table[code] = gdp
    if not table:
        raise ConfigError("GDP table is empty")
    return table


def load_epscor_states(path: Union[str, Path, None] = None) -> frozenset[str]:
    """Read the EPSCoR jurisdiction list (one state code per line).

    Blank lines and ``#`` comments are skipped. ``None`` loads the bundled
    list of NSF EPSCoR jurisdictions.
    """
    text = _read_input(path, "epscor_states.txt")
    states = set()
    for i, line in enumerate(text.splitlines(), start=1):
        code = line.split("#", 1)[0].strip().upper()
        if not code:
            continue
        if len(code) != 2 or not code.isalpha():
            raise SchemaError(f"EPSCoR list line {i}: bad state code {line.strip()!r}")
        states.add(code)
    if not states:
        raise ConfigError("EPSCoR state list is empty")
    return frozenset(states)


def load_threshold_config(path: Union[str, Path]) -> ThresholdConfig:
    """Read a threshold configuration JSON file."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict):
        raise ConfigError(f"{Path(path).name}: expected a JSON object")
    allowed = {"rank_cutoff_mode", "fixed_rank_cutoff", "senior_titles"}
    unknown = set(payload) - allowed
    if unknown:
        raise ConfigError(f"unknown threshold config keys: {', '.join(sorted(unknown))}")
    kwargs: dict = {}
    if "rank_cutoff_mode" in payload:
        kwargs["rank_cutoff_mode"] = payload["rank_cutoff_mode"]
    if "fixed_rank_cutoff" in payload:
        kwargs["fixed_rank_cutoff"] = float(payload["fixed_rank_cutoff"])
    if "senior_titles" in payload:
        titles = payload["senior_titles"]
        if not isinstance(titles, list) or not all(isinstance(t, str) for t in titles):
            raise ConfigError("senior_titles must be a list of strings")
        kwargs["senior_titles"] = frozenset(t.lower() for t in titles)
    return ThresholdConfig(**kwargs)


def _read_input(path: Union[str, Path, None], bundled_name: str) -> str:
    if path is not None:
        return Path(path).read_text(encoding="utf-8")
    return (resources.files("fairform") / "data" / bundled_name).read_text(encoding="utf-8")
