"""Explicit knowledge store: gait-pattern categories, member patients, ranges.

Categories hold previously assigned patients and one [min, max] range per STP.
Ranges are derived from member extrema unless a clinician overrides them by
hand; manual ranges survive patient additions until an explicit reset.

All operations are functional: they return a new store and never mutate their
input, so a held reference is always a consistent snapshot.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    Duplicate,
    InvalidRange,
    NotFound,
    PersistenceError,
    VersionError,
)
from .stps import N_STPS, STP_IDS, StpVector
from .trial import Gender, PatientMeta

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class PatientRecord:
    meta: PatientMeta
    stps: StpVector
    added_at: str  # ISO 8601


@dataclass(frozen=True)
class ParameterRange:
    """Value range of one STP; empty until the category has data for it."""

    stp_id: int
    min: float | None
    max: float | None
    manual: bool = False

    def __post_init__(self) -> None:
        if (self.min is None) != (self.max is None):
            raise InvalidRange("min and max must both be set or both be empty")
        if self.min is not None and self.min > self.max:
            raise InvalidRange(f"stp {self.stp_id}: min {self.min} > max {self.max}")

    @property
    def is_empty(self) -> bool:
        return self.min is None

    def contains(self, value: float) -> bool:
        return not self.is_empty and self.min <= value <= self.max


@dataclass(frozen=True)
class GaitCategory:
    id: str
    name: str
    patients: tuple[PatientRecord, ...] = ()
    ranges: tuple[ParameterRange, ...] = ()

    def __post_init__(self) -> None:
        if not self.ranges:
            object.__setattr__(self, "ranges", _auto_ranges(self.patients))
        if [r.stp_id for r in self.ranges] != list(STP_IDS):
            raise ValueError("category needs exactly one range per stp id, in order")

    def range_for(self, stp_id: int) -> ParameterRange:
        return self.ranges[stp_id - 1]

    def values_for(self, stp_id: int) -> list[float]:
        return [
            p.stps.value(stp_id) for p in self.patients if p.stps.value(stp_id) is not None
        ]

    def manual_stp_ids(self) -> tuple[int, ...]:
        return tuple(r.stp_id for r in self.ranges if r.manual)


@dataclass(frozen=True)
class KnowledgeStore:
    norm_category: GaitCategory
    pathology_categories: tuple[GaitCategory, ...] = ()
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        ids = [c.id for c in self.categories()]
        if len(ids) != len(set(ids)):
            raise ValueError("category ids must be unique")

    def categories(self) -> tuple[GaitCategory, ...]:
        return (self.norm_category, *self.pathology_categories)

    def category(self, category_id: str) -> GaitCategory:
        for c in self.categories():
            if c.id == category_id:
                return c
        raise NotFound(f"unknown category '{category_id}'")

    def replace_category(self, updated: GaitCategory) -> "KnowledgeStore":
        if updated.id == self.norm_category.id:
            return replace(self, norm_category=updated)
        if updated.id not in {c.id for c in self.pathology_categories}:
            raise NotFound(f"unknown category '{updated.id}'")
        return replace(
            self,
            pathology_categories=tuple(
                updated if c.id == updated.id else c for c in self.pathology_categories
            ),
        )


@dataclass(frozen=True)
class DemographicFilter:
    """Inclusive demographic constraints; absent clauses never filter."""

    genders: frozenset[Gender] | None = None
    age: tuple[float, float] | None = None
    body_height_cm: tuple[float, float] | None = None
    body_mass_kg: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        for label, interval in (
            ("age", self.age),
            ("body_height_cm", self.body_height_cm),
            ("body_mass_kg", self.body_mass_kg),
        ):
            if interval is not None and interval[0] > interval[1]:
                raise InvalidRange(f"filter {label}: lo {interval[0]} > hi {interval[1]}")

    @property
    def is_empty(self) -> bool:
        return (
            self.genders is None
            and self.age is None
            and self.body_height_cm is None
            and self.body_mass_kg is None
        )

    def matches(self, meta: PatientMeta) -> bool:
        if self.genders is not None and meta.gender not in self.genders:
            return False
        for interval, value in (
            (self.age, meta.age),
            (self.body_height_cm, meta.body_height_cm),
            (self.body_mass_kg, meta.body_mass_kg),
        ):
            if interval is not None and not (interval[0] <= value <= interval[1]):
                return False
        return True


EMPTY_FILTER = DemographicFilter()


@dataclass(frozen=True)
class DistributionStats:
    """Distribution of one STP over (filtered) category members that have it."""

    stp_id: int
    n: int
    mean: float | None
    std_dev: float | None
    min: float | None
    max: float | None
    q1: float | None
    median: float | None
    q3: float | None
    raw_values: tuple[float, ...]

    @property
    def is_empty(self) -> bool:
        return self.n == 0

    @property
    def variance(self) -> float | None:
        return None if self.std_dev is None else self.std_dev * self.std_dev


def _median_of(sorted_values: Sequence[float]) -> float:
    n = len(sorted_values)
    mid = n // 2
    if n % 2:
        return sorted_values[mid]
    return 0.5 * (sorted_values[mid - 1] + sorted_values[mid])


def _tukey_hinges(sorted_values: Sequence[float]) -> tuple[float, float, float]:
    # Halves include the median element when n is odd.
    n = len(sorted_values)
    half = (n + 1) // 2
    return (
        _median_of(sorted_values[:half]),
        _median_of(sorted_values),
        _median_of(sorted_values[n - half :]),
    )


def stats_of(values: Sequence[float], stp_id: int) -> DistributionStats:
    """Population statistics (std dev divides by n) plus Tukey-hinge quartiles."""
    vals = tuple(float(v) for v in values)
    if not vals:
        return DistributionStats(stp_id, 0, None, None, None, None, None, None, None, ())
    n = len(vals)
    mean = math.fsum(vals) / n
    std = math.sqrt(math.fsum((v - mean) ** 2 for v in vals) / n)
    ordered = sorted(vals)
    q1, median, q3 = _tukey_hinges(ordered)
    return DistributionStats(
        stp_id=stp_id,
        n=n,
        mean=mean,
        std_dev=std,
        min=ordered[0],
        max=ordered[-1],
        q1=q1,
        median=median,
        q3=q3,
        raw_values=vals,
    )


def filtered_members(
    category: GaitCategory, demo_filter: DemographicFilter = EMPTY_FILTER
) -> list[PatientRecord]:
    return [p for p in category.patients if demo_filter.matches(p.meta)]


def distribution_stats(
    category: GaitCategory,
    stp_id: int,
    demo_filter: DemographicFilter = EMPTY_FILTER,
) -> DistributionStats:
    if stp_id not in set(STP_IDS):
        raise NotFound(f"unknown stp id {stp_id}")
    values = [
        v
        for p in filtered_members(category, demo_filter)
        if (v := p.stps.value(stp_id)) is not None
    ]
    return stats_of(values, stp_id)


def _auto_range(patients: Iterable[PatientRecord], stp_id: int) -> ParameterRange:
    values = [
        v for p in patients if (v := p.stps.value(stp_id)) is not None
    ]
    if not values:
        return ParameterRange(stp_id, None, None, manual=False)
    return ParameterRange(stp_id, min(values), max(values), manual=False)


def _auto_ranges(patients: Sequence[PatientRecord]) -> tuple[ParameterRange, ...]:
    return tuple(_auto_range(patients, i) for i in STP_IDS)


def _refresh_ranges(category: GaitCategory) -> GaitCategory:
    """Recompute non-manual ranges from member extrema; manual ones stay."""
    ranges = tuple(
        r if r.manual else _auto_range(category.patients, r.stp_id)
        for r in category.ranges
    )
    return replace(category, ranges=ranges)


def apply_patient(
    store: KnowledgeStore,
    category_id: str,
    patient: PatientRecord,
    subset: set[int] | None = None,
) -> KnowledgeStore:
    """Add a patient (optionally only a subset of STP values) to a category."""
    category = store.category(category_id)
    if any(p.meta.id == patient.meta.id for p in category.patients):
        raise Duplicate(
            f"patient '{patient.meta.id}' is already in category '{category_id}'"
        )
    if subset is not None:
        unknown = subset - set(STP_IDS)
        if unknown:
            raise NotFound(f"unknown stp ids in subset: {sorted(unknown)}")
        patient = replace(patient, stps=patient.stps.masked(subset))
    updated = replace(category, patients=category.patients + (patient,))
    return store.replace_category(_refresh_ranges(updated))


def reset_category(store: KnowledgeStore, category_id: str) -> KnowledgeStore:
    """Drop every manual override and recompute all ranges from members."""
    category = store.category(category_id)
    return store.replace_category(
        replace(category, ranges=_auto_ranges(category.patients))
    )


def override_range(
    store: KnowledgeStore,
    category_id: str,
    stp_id: int,
    range_min: float,
    range_max: float,
) -> KnowledgeStore:
    """Replace one range by hand; the category keeps a manual marker until reset."""
    category = store.category(category_id)
    if stp_id not in set(STP_IDS):
        raise NotFound(f"unknown stp id {stp_id}")
    for label, v in (("min", range_min), ("max", range_max)):
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            raise InvalidRange(f"{label} must be a finite number")
    if range_min > range_max:
        raise InvalidRange(f"min {range_min} > max {range_max}")
    new_range = ParameterRange(stp_id, float(range_min), float(range_max), manual=True)
    ranges = tuple(new_range if r.stp_id == stp_id else r for r in category.ranges)
    return store.replace_category(replace(category, ranges=ranges))


def empty_category(category_id: str, name: str) -> GaitCategory:
    return GaitCategory(id=category_id, name=name, patients=(), ranges=_auto_ranges(()))


DEFAULT_PATHOLOGIES = (("ankle", "Ankle"), ("calcaneus", "Calcaneus"), ("hip", "Hip"), ("knee", "Knee"))


def default_store() -> KnowledgeStore:
    """Fresh store: an empty norm category plus the standard pathology set."""
    return KnowledgeStore(
        norm_category=empty_category("norm", "Norm"),
        pathology_categories=tuple(empty_category(i, n) for i, n in DEFAULT_PATHOLOGIES),
    )


# ---------------------------------------------------------------------------
# persistence


def _meta_to_doc(meta: PatientMeta) -> dict:
    return {
        "id": meta.id,
        "age": meta.age,
        "body_mass_kg": meta.body_mass_kg,
        "body_height_cm": meta.body_height_cm,
        "gender": meta.gender.value,
    }


def patient_record_to_doc(record: PatientRecord) -> dict:
    """Stand-alone export form of one stored patient (meta plus STP values)."""
    return {
        "meta": _meta_to_doc(record.meta),
        "stp_values": [record.stps.value(i) for i in STP_IDS],
        "added_at": record.added_at,
    }


def _category_to_doc(category: GaitCategory, is_norm: bool) -> dict:
    return {
        "id": category.id,
        "name": category.name,
        "is_norm": is_norm,
        "ranges": [
            {"stp_id": r.stp_id, "min": r.min, "max": r.max, "manual": r.manual}
            for r in category.ranges
        ],
        "patients": [patient_record_to_doc(p) for p in category.patients],
    }


def store_to_doc(store: KnowledgeStore) -> dict:
    return {
        "schema_version": store.schema_version,
        "categories": [
            _category_to_doc(c, c.id == store.norm_category.id) for c in store.categories()
        ],
    }


def _doc_get(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise PersistenceError(f"store file: missing '{key}' in {where}")
    return doc[key]


def _meta_from_doc(doc: dict, where: str) -> PatientMeta:
    try:
        return PatientMeta(
            id=_doc_get(doc, "id", where),
            age=_doc_get(doc, "age", where),
            body_mass_kg=_doc_get(doc, "body_mass_kg", where),
            body_height_cm=_doc_get(doc, "body_height_cm", where),
            gender=Gender(_doc_get(doc, "gender", where)),
        )
    except ValueError as exc:
        raise PersistenceError(f"store file: bad patient meta in {where}: {exc}") from exc


def _category_from_doc(doc: dict, index: int) -> tuple[GaitCategory, bool]:
    where = f"categories[{index}]"
    ranges_doc = _doc_get(doc, "ranges", where)
    patients_doc = _doc_get(doc, "patients", where)
    try:
        ranges = tuple(
            ParameterRange(
                stp_id=r["stp_id"], min=r["min"], max=r["max"], manual=r["manual"]
            )
            for r in ranges_doc
        )
        patients = []
        for j, p in enumerate(patients_doc):
            stp_values = _doc_get(p, "stp_values", f"{where}.patients[{j}]")
            if len(stp_values) != N_STPS:
                raise PersistenceError(
                    f"store file: {where}.patients[{j}] needs {N_STPS} stp values"
                )
            patients.append(
                PatientRecord(
                    meta=_meta_from_doc(
                        _doc_get(p, "meta", f"{where}.patients[{j}]"),
                        f"{where}.patients[{j}]",
                    ),
                    stps=StpVector.from_mapping(dict(zip(STP_IDS, stp_values))),
                    added_at=_doc_get(p, "added_at", f"{where}.patients[{j}]"),
                )
            )
        category = GaitCategory(
            id=_doc_get(doc, "id", where),
            name=_doc_get(doc, "name", where),
            patients=tuple(patients),
            ranges=ranges,
        )
    except PersistenceError:
        raise
    except (KeyError, TypeError, ValueError, InvalidRange) as exc:
        raise PersistenceError(f"store file: malformed {where}: {exc}") from exc
    return category, bool(doc.get("is_norm", False))


def store_from_doc(doc: dict) -> KnowledgeStore:
    version = _doc_get(doc, "schema_version", "store")
    if version != SCHEMA_VERSION:
        raise VersionError(
            f"store schema version {version} is not supported (expected {SCHEMA_VERSION})"
        )
    categories_doc = _doc_get(doc, "categories", "store")
    if not isinstance(categories_doc, list) or not categories_doc:
        raise PersistenceError("store file: 'categories' must be a non-empty list")
    norm: GaitCategory | None = None
    pathologies: list[GaitCategory] = []
    for i, cdoc in enumerate(categories_doc):
        category, is_norm = _category_from_doc(cdoc, i)
        if is_norm:
            if norm is not None:
                raise PersistenceError("store file: more than one norm category")
            norm = category
        else:
            pathologies.append(category)
    if norm is None:
        raise PersistenceError("store file: no norm category")
    return KnowledgeStore(norm_category=norm, pathology_categories=tuple(pathologies))


def save_store(store: KnowledgeStore, destination: str | Path) -> None:
    """Atomic write: serialize to a sibling temp file, then rename into place."""
    destination = Path(destination)
    payload = json.dumps(store_to_doc(store), indent=1)
    fd, tmp_name = tempfile.mkstemp(
        dir=destination.parent or Path("."), prefix=destination.name, suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(payload)
        os.replace(tmp_name, destination)
    except OSError as exc:
        raise PersistenceError(f"cannot write store to {destination}: {exc}") from exc
    finally:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)


def load_store(source: str | Path) -> KnowledgeStore:
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise PersistenceError(f"cannot read store from {source}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PersistenceError(
            f"store file {source} is not valid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return store_from_doc(doc)
