"""Ingestion, validation and serialization of published study summaries.

A "study" here is one three-cell ANOVA result as printed in a publication:
the per-cell sample size ``n``, the three cell means and the three cell
standard deviations.  Collections of studies are kept in a
:class:`StudyLedger` and can be read from / written to a small CSV dialect
(hand-typed tables) or a JSON mapping (tooling).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

#: Mandatory CSV header, fixed order.
COLUMNS = ("id", "n", "x1", "x2", "x3", "s1", "s2", "s3")


class LedgerError(ValueError):
    """Malformed or invalid ledger input.

    Carries optional context: the 1-based input row, the column name and
    the offending study id.
    """

    def __init__(self, message, row=None, column=None, study_id=None):
        super().__init__(message)
        self.row = row
        self.column = column
        self.study_id = study_id


@dataclass(frozen=True)
class StudySummary:
    """Summary statistics of one three-cell study.

    ``n`` is a positive real, not an integer: published tables often report
    a total sample size over unequal cells, so the per-cell size is a
    quotient like 141/6 = 23.5.
    """

    id: str
    n: float
    means: tuple[float, float, float]
    sds: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "means", tuple(float(x) for x in self.means))
        object.__setattr__(self, "sds", tuple(float(s) for s in self.sds))


@dataclass(frozen=True)
class StudyLedger:
    """An ordered collection of studies with unique ids."""

    studies: tuple[StudySummary, ...]
    source: str = "<unknown>"

    def __post_init__(self):
        object.__setattr__(self, "studies", tuple(self.studies))

    def __len__(self):
        return len(self.studies)

    def __iter__(self):
        return iter(self.studies)


def validate(study: StudySummary) -> list[str]:
    """Return every violated invariant of *study* (empty list when valid).

    Violations are returned rather than raised so callers can report all
    problems of a row at once.
    """
    violations = []
    if len(study.means) != 3:
        violations.append("means must have exactly three entries")
    if len(study.sds) != 3:
        violations.append("sds must have exactly three entries")
    if not (isinstance(study.n, (int, float)) and math.isfinite(study.n)):
        violations.append("n must be finite")
    elif study.n <= 0:
        violations.append("n must be positive")
    if not all(math.isfinite(x) for x in study.means):
        violations.append("means must be finite")
    if not all(math.isfinite(s) for s in study.sds):
        violations.append("sds must be finite")
    elif any(s <= 0 for s in study.sds):
        violations.append("sds must be positive")
    return violations


def study_warnings(study: StudySummary) -> list[str]:
    """Non-fatal data quirks worth surfacing next to the results."""
    notes = []
    if study.n != int(study.n):
        notes.append(f"n = {study.n:g} is not an integer (averaged unequal cells?)")
    if study.n < 5:
        notes.append(f"n = {study.n:g} < 5: normal approximation is unreliable")
    return notes


def _parse_n(cell: str) -> float:
    # "141/6" style quotients are accepted for n only.
    if "/" in cell:
        num, _, den = cell.partition("/")
        return float(Fraction(int(num.strip()), int(den.strip())))
    return float(cell)


def _parse_csv(text: str, source: str):
    studies: list[StudySummary] = []
    errors: list[LedgerError] = []
    seen: dict[str, int] = {}
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in line.split(",")]
        if not header_seen:
            if tuple(c.lower() for c in cells) != COLUMNS:
                raise LedgerError(
                    f"row {lineno}: header must be '{','.join(COLUMNS)}', got '{line}'",
                    row=lineno,
                )
            header_seen = True
            continue
        if len(cells) != len(COLUMNS):
            errors.append(
                LedgerError(
                    f"row {lineno}: expected {len(COLUMNS)} columns, got {len(cells)}",
                    row=lineno,
                )
            )
            continue
        study_id = cells[0]
        values = {}
        bad = False
        for name, cell in zip(COLUMNS[1:], cells[1:]):
            try:
                values[name] = _parse_n(cell) if name == "n" else float(cell)
            except (ValueError, ZeroDivisionError):
                errors.append(
                    LedgerError(
                        f"row {lineno}, column {name}: could not parse '{cell}'",
                        row=lineno,
                        column=name,
                        study_id=study_id,
                    )
                )
                bad = True
        if bad:
            continue
        study = StudySummary(
            id=study_id,
            n=values["n"],
            means=(values["x1"], values["x2"], values["x3"]),
            sds=(values["s1"], values["s2"], values["s3"]),
        )
        problems = validate(study)
        if problems:
            errors.append(
                LedgerError(
                    f"study '{study_id}': " + "; ".join(problems),
                    row=lineno,
                    study_id=study_id,
                )
            )
            continue
        if study_id in seen:
            errors.append(
                LedgerError(
                    f"row {lineno}: duplicate study id '{study_id}' (first at row {seen[study_id]})",
                    row=lineno,
                    study_id=study_id,
                )
            )
            continue
        seen[study_id] = lineno
        studies.append(study)
    if not header_seen:
        raise LedgerError(f"no header row found; expected '{','.join(COLUMNS)}'")
    return studies, errors


def ledger_from_mapping(obj: dict, source: str = "<mapping>") -> StudyLedger:
    """Build a ledger from the structured (JSON-shaped) form."""
    if not isinstance(obj, dict) or "studies" not in obj:
        raise LedgerError("mapping form requires a top-level 'studies' list")
    studies = []
    seen = set()
    for k, entry in enumerate(obj["studies"]):
        try:
            n = entry["n"]
            n = _parse_n(n) if isinstance(n, str) else float(n)
            study = StudySummary(
                id=str(entry["id"]),
                n=n,
                means=tuple(entry["means"]),
                sds=tuple(entry["sds"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise LedgerError(f"studies[{k}]: {exc}") from exc
        problems = validate(study)
        if problems:
            raise LedgerError(
                f"study '{study.id}': " + "; ".join(problems), study_id=study.id
            )
        if study.id in seen:
            raise LedgerError(f"duplicate study id '{study.id}'", study_id=study.id)
        seen.add(study.id)
        studies.append(study)
    return StudyLedger(studies=tuple(studies), source=obj.get("source", source))


def ledger_to_mapping(ledger: StudyLedger) -> dict:
    return {
        "source": ledger.source,
        "studies": [
            {"id": s.id, "n": s.n, "means": list(s.means), "sds": list(s.sds)}
            for s in ledger
        ],
    }


def parse_ledger(text: str, source: str = "<string>") -> StudyLedger:
    """Parse a ledger document (CSV dialect or JSON mapping).

    CSV: UTF-8, comma-delimited, mandatory header ``id,n,x1,x2,x3,s1,s2,s3``,
    comment lines start with ``#``.  The ``n`` column accepts quotients like
    ``141/6``.  The first error encountered is raised; use
    :func:`parse_ledger_lenient` to collect errors and keep valid rows.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return ledger_from_mapping(json.loads(text), source=source)
    studies, errors = _parse_csv(text, source)
    if errors:
        raise errors[0]
    return StudyLedger(studies=tuple(studies), source=source)


def parse_ledger_lenient(text: str, source: str = "<string>"):
    """Like :func:`parse_ledger` but returns ``(ledger, errors)``.

    Rows that fail to parse or validate are dropped from the ledger and
    reported in *errors*; well-formed rows survive.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return ledger_from_mapping(json.loads(text), source=source), []
        except (LedgerError, json.JSONDecodeError) as exc:
            if isinstance(exc, json.JSONDecodeError):
                exc = LedgerError(f"invalid JSON: {exc}")
            return StudyLedger(studies=(), source=source), [exc]
    studies, errors = _parse_csv(text, source)
    return StudyLedger(studies=tuple(studies), source=source), errors


def serialize_ledger(ledger: StudyLedger) -> str:
    """Render a ledger as CSV text (12 significant digits, round-trip safe)."""
    lines = [",".join(COLUMNS)]
    for s in ledger:
        if "," in s.id or "\n" in s.id:
            raise LedgerError(f"study id {s.id!r} cannot be serialized to CSV")
        fields = [s.id, f"{s.n:.12g}"]
        fields += [f"{x:.12g}" for x in s.means]
        fields += [f"{x:.12g}" for x in s.sds]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def load_ledger(path) -> StudyLedger:
    """Read and parse a ledger file (CSV or JSON, sniffed by content)."""
    p = Path(path)
    return parse_ledger(p.read_text(encoding="utf-8"), source=str(p))
