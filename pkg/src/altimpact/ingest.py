"""Parse and validate the literature-review sample spreadsheet."""

from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass

from .errors import DuplicateLocalId, MalformedCsv

REQUIRED_COLUMNS = ("id", "authors", "title", "doi")
AUTHOR_DELIMITER = ";"


@dataclass(frozen=True)
class PaperRecord:
    """One row of the sample: an article awaiting indicator harvesting."""

    local_id: str
    authors: tuple[str, ...]
    title: str
    doi: str | None
    publication_date: dt.date | None
    journal: str | None = None

    @property
    def first_author(self) -> str | None:
        return self.authors[0] if self.authors else None


@dataclass(frozen=True)
class SampleSet:
    """All parsed records plus the observation window they belong to."""

    records: tuple[PaperRecord, ...]
    window_start: dt.date
    window_end: dt.date

    def __post_init__(self):
        if self.window_start > self.window_end:
            raise ValueError("window_start is after window_end")

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class ValidationWarning:
    """A non-fatal data-quality note attached to one record."""

    local_id: str
    kind: str
    message: str


def _parse_date(text: str, local_id: str) -> dt.date | None:
    text = text.strip()
    if not text:
        return None
    try:
        return dt.date.fromisoformat(text)
    except ValueError as exc:
        raise MalformedCsv(
            "row %s: bad publication_date %r (expected YYYY-MM-DD)"
            % (local_id, text)) from exc


def normalize_doi(text: str | None) -> str | None:
    """Lower-case and trim a DOI cell; empty cells become None."""
    if text is None:
        return None
    text = text.strip().lower()
    return text or None


def parse_sample(csv_bytes: bytes, window: tuple[dt.date, dt.date]) -> SampleSet:
    """Parse the sample CSV into records.

    The header must contain at least id, authors, title and doi. Author
    cells are split on ";". Raises MalformedCsv for structural problems and
    DuplicateLocalId when two rows share an id.
    """
    try:
        text = csv_bytes.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedCsv("input is not valid UTF-8") from exc
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise MalformedCsv("missing header row")
    missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise MalformedCsv("missing columns: %s" % ", ".join(missing))

    records = []
    seen = set()
    for row in reader:
        local_id = (row.get("id") or "").strip()
        if not local_id:
            raise MalformedCsv("row with empty id")
        if local_id in seen:
            raise DuplicateLocalId("duplicate id %r" % local_id)
        seen.add(local_id)
        title = (row.get("title") or "").strip()
        if not title:
            raise MalformedCsv("row %s: empty title" % local_id)
        authors = tuple(a.strip()
                        for a in (row.get("authors") or "").split(AUTHOR_DELIMITER)
                        if a.strip())
        records.append(PaperRecord(
            local_id=local_id,
            authors=authors,
            title=title,
            doi=normalize_doi(row.get("doi")),
            publication_date=_parse_date(row.get("publication_date") or "",
                                         local_id),
            journal=(row.get("journal") or "").strip() or None,
        ))
    return SampleSet(records=tuple(records),
                     window_start=window[0], window_end=window[1])


def validate_sample(sample: SampleSet) -> list[ValidationWarning]:
    """Collect non-fatal warnings, ordered by record id.

    Flags records dated outside the window, records without a DOI, and
    records with an empty author list. Never raises.
    """
    warnings = []
    for rec in sorted(sample.records, key=lambda r: r.local_id):
        date = rec.publication_date
        if date is not None and not (
                sample.window_start <= date <= sample.window_end):
            warnings.append(ValidationWarning(
                rec.local_id, "OutOfWindow",
                "publication date %s outside [%s, %s]"
                % (date, sample.window_start, sample.window_end)))
        if rec.doi is None:
            warnings.append(ValidationWarning(
                rec.local_id, "MissingDoi", "record has no DOI"))
        if not rec.authors:
            warnings.append(ValidationWarning(
                rec.local_id, "EmptyAuthors", "record has no authors"))
    return warnings


def serialize_sample(sample: SampleSet) -> bytes:
    """Write records back to CSV; parse_sample inverts this exactly."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "authors", "title", "doi", "publication_date",
                     "journal"])
    for rec in sample.records:
        writer.writerow([
            rec.local_id,
            AUTHOR_DELIMITER.join(rec.authors),
            rec.title,
            rec.doi or "",
            rec.publication_date.isoformat() if rec.publication_date else "",
            rec.journal or "",
        ])
    return buf.getvalue().encode("utf-8")
