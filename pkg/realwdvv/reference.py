"""Embedded copy of the published ℙ³ table and the cell-by-cell diff against it."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from realwdvv.errors import ReferenceDataError
from realwdvv.insertions import TableRow

logger = logging.getLogger(__name__)

TABLE_PATH = Path(__file__).parent / "data" / "p3_open_invariants.json"
TABLE_SHA256 = "db78d8529670bf684cab0a0b50cf2972964e1914824abd8e971a74d631e74426"

COLUMNS = ("averaged", "expansion", "minimum", "complex")


@dataclass(frozen=True)
class ReferenceRow:
    degree: int
    lines: int
    points: int
    averaged: int
    expansion: tuple[int, ...]
    minimum: int
    complex_count: int
    # The printed label is kept; ``corrected`` is the (d, a, b) the values belong to.
    suspect_label: bool = False
    corrected: tuple[int, int, int] | None = None

    @property
    def label(self) -> tuple[int, int, int]:
        return self.degree, self.lines, self.points

    def cell(self, column: str):
        if column == "complex":
            return self.complex_count
        return getattr(self, column)


@dataclass(frozen=True)
class ReferenceDataset:
    rows: tuple[ReferenceRow, ...]

    @property
    def max_degree(self) -> int:
        return max(row.degree for row in self.rows)

    def lookup(
        self, degree: int, lines: int, points: int
    ) -> tuple[ReferenceRow, bool] | None:
        """The row for a label, and whether it matched through its corrected label."""
        label = (degree, lines, points)
        for row in self.rows:
            if not row.suspect_label and row.label == label:
                return row, False
        for row in self.rows:
            if row.suspect_label and row.corrected == label:
                return row, True
        return None

    def effective_labels(self) -> list[tuple[int, int, int]]:
        return [row.corrected if row.suspect_label else row.label for row in self.rows]


def load_reference(
    path: Path = TABLE_PATH, checksum: str = TABLE_SHA256
) -> ReferenceDataset:
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ReferenceDataError(f"cannot read reference table {path}: {e}") from e
    digest = hashlib.sha256(raw).hexdigest()
    if digest != checksum:
        raise ReferenceDataError(
            f"reference table checksum mismatch: expected {checksum}, got {digest}"
        )
    try:
        document = json.loads(raw)
        rows = tuple(
            ReferenceRow(
                degree=entry["d"],
                lines=entry["a"],
                points=entry["b"],
                averaged=entry["averaged"],
                expansion=tuple(entry["expansion"]),
                minimum=entry["minimum"],
                complex_count=entry["complex"],
                suspect_label=entry.get("suspect_label", False),
                corrected=(
                    (
                        entry["corrected"]["d"],
                        entry["corrected"]["a"],
                        entry["corrected"]["b"],
                    )
                    if "corrected" in entry
                    else None
                ),
            )
            for entry in document["rows"]
        )
    except (ValueError, KeyError, TypeError) as e:
        raise ReferenceDataError(f"malformed reference table {path}: {e}") from e
    logger.debug("loaded %d reference rows from %s", len(rows), path)
    return ReferenceDataset(rows)


class CellStatus(str, Enum):
    MATCH = "match"
    MISMATCH = "mismatch"
    CORRECTED_LABEL = "corrected-label"
    EXTRAPOLATED = "extrapolated"


@dataclass(frozen=True)
class CellDiff:
    label: tuple[int, int, int]
    column: str
    status: CellStatus
    expected: object
    actual: object


@dataclass(frozen=True)
class DiffReport:
    cells: tuple[CellDiff, ...]
    missing: tuple[tuple[int, int, int], ...] = ()

    @property
    def passed(self) -> bool:
        return not self.missing and not self.mismatches()

    def mismatches(self) -> list[CellDiff]:
        return [cell for cell in self.cells if cell.status is CellStatus.MISMATCH]

    def row_status(self, label: tuple[int, int, int]) -> CellStatus | None:
        statuses = {cell.status for cell in self.cells if cell.label == label}
        for status in (
            CellStatus.MISMATCH,
            CellStatus.CORRECTED_LABEL,
            CellStatus.EXTRAPOLATED,
            CellStatus.MATCH,
        ):
            if status in statuses:
                return status
        return None


def _actual(row: TableRow, column: str):
    if column == "complex":
        return row.complex_count
    return getattr(row, column)


def compare_table(rows: Iterable[TableRow], dataset: ReferenceDataset) -> DiffReport:
    cells: list[CellDiff] = []
    seen: set[tuple[int, int, int]] = set()
    for row in rows:
        label = (row.degree, row.lines, row.points)
        seen.add(label)
        if row.degree > dataset.max_degree:
            cells.extend(
                CellDiff(
                    label, column, CellStatus.EXTRAPOLATED, None, _actual(row, column)
                )
                for column in COLUMNS
            )
            continue
        found = dataset.lookup(*label)
        if found is None:
            cells.extend(
                CellDiff(label, column, CellStatus.MISMATCH, None, _actual(row, column))
                for column in COLUMNS
            )
            continue
        reference, corrected = found
        for column in COLUMNS:
            expected, actual = reference.cell(column), _actual(row, column)
            if expected != actual:
                status = CellStatus.MISMATCH
            elif corrected:
                status = CellStatus.CORRECTED_LABEL
            else:
                status = CellStatus.MATCH
            cells.append(CellDiff(label, column, status, expected, actual))
        if corrected:
            logger.info(
                "row printed as d=%d a=%d b=%d compared under d=%d a=%d b=%d",
                *reference.label,
                *label,
            )

    degrees = {label[0] for label in seen}
    missing = tuple(
        label
        for label in dataset.effective_labels()
        if label[0] in degrees and label not in seen
    )
    return DiffReport(tuple(cells), missing)
