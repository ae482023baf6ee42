"""Trial input: patient metadata, raw force signals, and the trial file format.

A trial file is a JSON document::

    {
      "patient": {"id": "P001", "age": 34, "body_mass_kg": 80.0,
                  "body_height_cm": 178.0, "gender": "male"},
      "sample_rate_hz": 1000.0,
      "left_fv_newton": [...],
      "right_fv_newton": [...],
      "spatial": {                                  # optional
        "left":  {"step_length_m": [...], "stride_length_m": [...]},
        "right": {"step_length_m": [...], "stride_length_m": [...]},
        "walkway_distance_m": 10.0                  # optional
      }
    }

The parser rejects unknown gender strings and any non-finite number.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

from .errors import InvalidPatientMeta, InvalidTrial
from .stps import Foot


class Gender(str, Enum):
    FEMALE = "female"
    MALE = "male"
    UNSPECIFIED = "unspecified"


@dataclass(frozen=True)
class PatientMeta:
    id: str
    age: float
    body_mass_kg: float
    body_height_cm: float
    gender: Gender

    def __post_init__(self) -> None:
        if not self.id:
            raise InvalidPatientMeta("patient id must be non-empty")
        for label, value in (
            ("age", self.age),
            ("body_mass_kg", self.body_mass_kg),
            ("body_height_cm", self.body_height_cm),
        ):
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidPatientMeta(f"{label} must be a finite number")
        if self.body_mass_kg <= 0:
            raise InvalidPatientMeta("body_mass_kg must be positive")
        if self.body_height_cm <= 0:
            raise InvalidPatientMeta("body_height_cm must be positive")
        if self.age < 0:
            raise InvalidPatientMeta("age must be >= 0")


@dataclass(frozen=True)
class FootSpatial:
    """Per-step annotations for one foot, as measured on the walkway."""

    step_lengths_m: tuple[float, ...] = ()
    stride_lengths_m: tuple[float, ...] = ()


@dataclass(frozen=True)
class SpatialMeta:
    left: FootSpatial = FootSpatial()
    right: FootSpatial = FootSpatial()
    walkway_distance_m: float | None = None

    def for_foot(self, foot: Foot) -> FootSpatial:
        return self.left if foot is Foot.LEFT else self.right


@dataclass(frozen=True)
class RawTrial:
    """One recording session: vertical force per foot plus patient metadata."""

    patient_meta: PatientMeta
    left_samples: tuple[float, ...]
    right_samples: tuple[float, ...]
    sample_rate_hz: float
    spatial_meta: SpatialMeta | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.sample_rate_hz, (int, float)) or not (
            math.isfinite(self.sample_rate_hz) and self.sample_rate_hz > 0
        ):
            raise InvalidTrial("sample_rate_hz must be a positive finite number")
        for name, samples in (("left", self.left_samples), ("right", self.right_samples)):
            if len(samples) == 0:
                raise InvalidTrial(f"{name} force signal is empty")
            for i, v in enumerate(samples):
                if not math.isfinite(v):
                    raise InvalidTrial(f"{name} force signal has non-finite value at index {i}")

    def samples_for(self, foot: Foot) -> tuple[float, ...]:
        return self.left_samples if foot is Foot.LEFT else self.right_samples


def _require(doc: dict, key: str, context: str) -> Any:
    if key not in doc:
        raise InvalidTrial(f"missing field '{key}' in {context}")
    return doc[key]


def _finite_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidTrial(f"{where} must be a number")
    v = float(value)
    if not math.isfinite(v):
        raise InvalidTrial(f"{where} must be finite")
    return v


def _number_list(value: Any, where: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise InvalidTrial(f"{where} must be a list of numbers")
    return tuple(_finite_number(v, f"{where}[{i}]") for i, v in enumerate(value))


def _parse_patient(doc: Any) -> PatientMeta:
    if not isinstance(doc, dict):
        raise InvalidTrial("'patient' must be an object")
    gender_raw = _require(doc, "gender", "patient")
    try:
        gender = Gender(gender_raw)
    except ValueError:
        raise InvalidTrial(
            f"unknown gender {gender_raw!r}; expected one of "
            f"{[g.value for g in Gender]}"
        ) from None
    pid = _require(doc, "id", "patient")
    if not isinstance(pid, str):
        raise InvalidTrial("patient id must be a string")
    return PatientMeta(
        id=pid,
        age=_finite_number(_require(doc, "age", "patient"), "patient.age"),
        body_mass_kg=_finite_number(
            _require(doc, "body_mass_kg", "patient"), "patient.body_mass_kg"
        ),
        body_height_cm=_finite_number(
            _require(doc, "body_height_cm", "patient"), "patient.body_height_cm"
        ),
        gender=gender,
    )


def _parse_foot_spatial(doc: Any, where: str) -> FootSpatial:
    if not isinstance(doc, dict):
        raise InvalidTrial(f"{where} must be an object")
    return FootSpatial(
        step_lengths_m=_number_list(doc.get("step_length_m", []), f"{where}.step_length_m"),
        stride_lengths_m=_number_list(
            doc.get("stride_length_m", []), f"{where}.stride_length_m"
        ),
    )


def _parse_spatial(doc: Any) -> SpatialMeta:
    if not isinstance(doc, dict):
        raise InvalidTrial("'spatial' must be an object")
    walkway = doc.get("walkway_distance_m")
    return SpatialMeta(
        left=_parse_foot_spatial(doc.get("left", {}), "spatial.left"),
        right=_parse_foot_spatial(doc.get("right", {}), "spatial.right"),
        walkway_distance_m=None
        if walkway is None
        else _finite_number(walkway, "spatial.walkway_distance_m"),
    )


def parse_trial(text: str) -> RawTrial:
    """Parse a trial document; raises InvalidTrial / InvalidPatientMeta."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidTrial(f"trial file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidTrial("trial file must be a JSON object")

    patient = _parse_patient(_require(doc, "patient", "trial"))
    rate = _finite_number(_require(doc, "sample_rate_hz", "trial"), "sample_rate_hz")
    left = _number_list(_require(doc, "left_fv_newton", "trial"), "left_fv_newton")
    right = _number_list(_require(doc, "right_fv_newton", "trial"), "right_fv_newton")
    spatial = _parse_spatial(doc["spatial"]) if "spatial" in doc else None
    return RawTrial(
        patient_meta=patient,
        left_samples=left,
        right_samples=right,
        sample_rate_hz=rate,
        spatial_meta=spatial,
    )


def load_trial(path: str | Path) -> RawTrial:
    # OSError propagates: an unreadable file is an I/O problem, not a format one.
    return parse_trial(Path(path).read_text())


def trial_to_doc(trial: RawTrial) -> dict:
    doc: dict[str, Any] = {
        "patient": {
            "id": trial.patient_meta.id,
            "age": trial.patient_meta.age,
            "body_mass_kg": trial.patient_meta.body_mass_kg,
            "body_height_cm": trial.patient_meta.body_height_cm,
            "gender": trial.patient_meta.gender.value,
        },
        "sample_rate_hz": trial.sample_rate_hz,
        "left_fv_newton": list(trial.left_samples),
        "right_fv_newton": list(trial.right_samples),
    }
    if trial.spatial_meta is not None:
        spatial: dict[str, Any] = {
            "left": {
                "step_length_m": list(trial.spatial_meta.left.step_lengths_m),
                "stride_length_m": list(trial.spatial_meta.left.stride_lengths_m),
            },
            "right": {
                "step_length_m": list(trial.spatial_meta.right.step_lengths_m),
                "stride_length_m": list(trial.spatial_meta.right.stride_lengths_m),
            },
        }
        if trial.spatial_meta.walkway_distance_m is not None:
            spatial["walkway_distance_m"] = trial.spatial_meta.walkway_distance_m
        doc["spatial"] = spatial
    return doc


def dump_trial(trial: RawTrial, path: str | Path) -> None:
    Path(path).write_text(json.dumps(trial_to_doc(trial), indent=1))
