"""CSV ingestion for reference texts and OCR transcripts.

Both files are RFC 4180 CSV, UTF-8, with a mandatory header row:

    references.csv   reference_id,reference_text,category
    transcripts.csv  reference_id,image_index,repetition_index,text

Row numbers in diagnostics count the header as row 1.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Collection, Iterable, Iterator

from .errors import (
    DuplicateKey,
    DuplicateReferenceId,
    EmptyReferenceText,
    MalformedCsv,
    UnknownReferenceId,
)
from .metric import normalize

REFERENCE_HEADER = ("reference_id", "reference_text", "category")
TRANSCRIPT_HEADER = ("reference_id", "image_index", "repetition_index", "text")


class Category(str, enum.Enum):
    KNOWN = "known"
    UNKNOWN = "unknown"
    OTHER = "other"


@dataclass(frozen=True)
class ReferenceEntry:
    reference_id: str
    reference_text: str
    category: Category
    text_length: int


@dataclass(frozen=True)
class TranscriptRecord:
    reference_id: str
    image_index: int
    repetition_index: int
    text: str

    @property
    def key(self) -> tuple[str, int, int]:
        return (self.reference_id, self.image_index, self.repetition_index)


def _rows(path: Path, header: tuple[str, ...]) -> Iterator[tuple[int, list[str]]]:
    """Yield (row_number, fields) for each data row, checking header and arity."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise MalformedCsv(path, 0, f"cannot open: {exc.strerror}") from exc
    with fh:
        reader = csv.reader(fh, strict=True)
        row_no = 0
        try:
            for fields in reader:
                row_no += 1
                if row_no == 1:
                    got = tuple(f.strip().lstrip("﻿") for f in fields)
                    if got != header:
                        raise MalformedCsv(
                            path, 1, f"expected header {','.join(header)}, got {','.join(fields)}"
                        )
                    continue
                if not fields:
                    continue
                if len(fields) != len(header):
                    raise MalformedCsv(
                        path, row_no, f"expected {len(header)} fields, got {len(fields)}"
                    )
                yield row_no, fields
        except csv.Error as exc:
            raise MalformedCsv(path, row_no + 1, f"bad quoting: {exc}") from exc
        except UnicodeDecodeError as exc:
            raise MalformedCsv(path, row_no + 1, "not valid UTF-8") from exc
        if row_no == 0:
            raise MalformedCsv(path, 1, "missing header row")


def _parse_category(path, row: int, value: str) -> Category:
    try:
        return Category(value.strip().lower())
    except ValueError:
        raise MalformedCsv(
            path, row, f"category must be known, unknown or other, got {value!r}"
        ) from None


def _parse_index(path, row: int, column: str, value: str) -> int:
    try:
        index = int(value.strip())
    except ValueError:
        raise MalformedCsv(path, row, f"{column} is not an integer: {value!r}") from None
    if index < 1:
        raise MalformedCsv(path, row, f"{column} must be >= 1, got {index}")
    return index


def load_references(path: str | Path) -> list[ReferenceEntry]:
    path = Path(path)
    entries: list[ReferenceEntry] = []
    seen: set[str] = set()
    for row, (ref_id, text, category) in _rows(path, REFERENCE_HEADER):
        if not ref_id:
            raise MalformedCsv(path, row, "empty reference_id")
        if ref_id in seen:
            raise DuplicateReferenceId(path, row, f"duplicate reference_id {ref_id!r}")
        length = normalize(text).char_len
        if length == 0:
            raise EmptyReferenceText(path, row, f"reference {ref_id!r} has empty text")
        seen.add(ref_id)
        entries.append(
            ReferenceEntry(ref_id, text, _parse_category(path, row, category), length)
        )
    return entries


def load_transcripts(
    path: str | Path, known_ids: Collection[str] | None = None
) -> list[TranscriptRecord]:
    """Load transcripts in file order.

    An empty ``text`` cell is a successful read that saw nothing. When
    ``known_ids`` is given, every reference_id must belong to it.
    """
    path = Path(path)
    records: list[TranscriptRecord] = []
    seen: set[tuple[str, int, int]] = set()
    for row, (ref_id, image, rep, text) in _rows(path, TRANSCRIPT_HEADER):
        if not ref_id:
            raise MalformedCsv(path, row, "empty reference_id")
        if known_ids is not None and ref_id not in known_ids:
            raise UnknownReferenceId(ref_id, row=row, path=path)
        record = TranscriptRecord(
            ref_id,
            _parse_index(path, row, "image_index", image),
            _parse_index(path, row, "repetition_index", rep),
            text,
        )
        if record.key in seen:
            raise DuplicateKey(
                path, row, f"duplicate (reference_id, image_index, repetition_index) {record.key}"
            )
        seen.add(record.key)
        records.append(record)
    return records


def write_transcripts(records: Iterable[TranscriptRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(TRANSCRIPT_HEADER)
        for r in records:
            writer.writerow([r.reference_id, r.image_index, r.repetition_index, r.text])


def write_references(entries: Iterable[ReferenceEntry], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(REFERENCE_HEADER)
        for e in entries:
            writer.writerow([e.reference_id, e.reference_text, e.category.value])
