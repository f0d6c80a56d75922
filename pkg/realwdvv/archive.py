"""Plain JSON cache of solved stores, with exact rationals written as "p/q"."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from realwdvv.algebra import format_rational, parse_rational
from realwdvv.complex_gw import ComplexKey, ComplexStore
from realwdvv.errors import ArchiveError
from realwdvv.real_wdvv import RealKey, RealStore
from realwdvv.target import ProjectiveSpaceP3

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class InvariantArchive:
    target: str
    seed: int
    complex_degree: int
    real_degree: int
    complex_entries: tuple[tuple[int, int, int, Fraction], ...]
    real_entries: tuple[tuple[int, int, int, int, Fraction], ...]
    created: str
    format_version: int = FORMAT_VERSION

    @classmethod
    def from_stores(
        cls, complex_store: ComplexStore, real_store: RealStore
    ) -> InvariantArchive:
        target = real_store.target
        return cls(
            target=target.name,
            seed=real_store.seed,
            complex_degree=complex_store.solved_up_to,
            real_degree=real_store.solved_up_to,
            complex_entries=tuple(
                (key.degree, key.lines, key.points, value)
                for key, value in complex_store.items()
            ),
            real_entries=tuple(
                (
                    key.degree,
                    *target.line_point_counts(key.insertions),
                    key.points,
                    value,
                )
                for key, value in real_store.items()
            ),
            created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )

    def to_stores(self, target: ProjectiveSpaceP3) -> tuple[ComplexStore, RealStore]:
        if target.name != self.target:
            raise ArchiveError(
                f"archive is for target {self.target!r}, not {target.name!r}"
            )
        complex_values = {
            ComplexKey(d, a, b): value for d, a, b, value in self.complex_entries
        }
        real_values = {}
        for d, a, b, k, value in self.real_entries:
            insertions = target.insertions(a, b)
            expected = target.real_dimension(d, insertions)
            if expected != k:
                raise ArchiveError(
                    f"real entry ({d},{a},{b}) has k={k}, expected {expected}"
                )
            real_values[RealKey(d, insertions, k)] = value
        return (
            ComplexStore(target, complex_values, self.complex_degree),
            RealStore(target, real_values, self.real_degree, self.seed),
        )

    def to_json(self) -> str:
        document = {
            "format_version": self.format_version,
            "target": self.target,
            "seed": self.seed,
            "created": self.created,
            "complex_degree": self.complex_degree,
            "real_degree": self.real_degree,
            "complex": [
                [d, a, b, format_rational(value)]
                for d, a, b, value in self.complex_entries
            ],
            "real": [
                [d, a, b, k, format_rational(value)]
                for d, a, b, k, value in self.real_entries
            ],
        }
        return json.dumps(document, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> InvariantArchive:
        try:
            document = json.loads(text)
        except ValueError as e:
            raise ArchiveError(f"archive is not valid JSON: {e}") from e
        if document.get("format_version") != FORMAT_VERSION:
            raise ArchiveError(
                f"unsupported archive version {document.get('format_version')!r}"
            )
        try:
            return cls(
                target=document["target"],
                seed=int(document["seed"]),
                complex_degree=int(document["complex_degree"]),
                real_degree=int(document["real_degree"]),
                complex_entries=tuple(
                    (int(d), int(a), int(b), parse_rational(value))
                    for d, a, b, value in document["complex"]
                ),
                real_entries=tuple(
                    (int(d), int(a), int(b), int(k), parse_rational(value))
                    for d, a, b, k, value in document["real"]
                ),
                created=document.get("created", ""),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise ArchiveError(f"malformed archive: {e}") from e

    def save(self, path: Path) -> None:
        try:
            path.write_text(self.to_json(), encoding="utf-8")
        except OSError as e:
            raise ArchiveError(f"cannot write archive {path}: {e}") from e
        logger.info("saved archive to %s", path)

    @classmethod
    def load(cls, path: Path) -> InvariantArchive:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ArchiveError(f"cannot read archive {path}: {e}") from e
        return cls.from_json(text)
