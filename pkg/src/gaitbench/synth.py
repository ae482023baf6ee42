"""Synthetic desk-scale cohorts: a populated store plus matching sample trials.

The norm parameter set is self-consistent (swing, cadence, and speed follow
from the timing values); pathology categories shift every parameter mean by a
configurable number of standard deviations, far enough apart that matching is
unambiguous.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .config import G0
from .eks import GaitCategory, KnowledgeStore, PatientRecord, save_store
from .stps import STP_IDS, StpVector, definition
from .trial import (
    FootSpatial,
    Gender,
    PatientMeta,
    RawTrial,
    SpatialMeta,
    dump_trial,
)

SYNTH_TIMESTAMP = "2024-01-01T00:00:00Z"

# Healthy-gait parameter means, one value per parameter kind (applied to both
# feet). Timing values are mutually consistent.
_NORM_STANCE = 0.66
_NORM_STRIDE = 1.08
_NORM_STEP = 0.54
_NORM_STRIDE_LEN = 1.36
NORM_MEANS: dict[str, float] = {
    "stance_time": _NORM_STANCE,
    "swing_time": (_NORM_STRIDE - _NORM_STANCE) / _NORM_STRIDE * 100.0,
    "step_time": _NORM_STEP,
    "stride_time": _NORM_STRIDE,
    "cadence": 60.0 / _NORM_STEP,
    "walking_speed": _NORM_STRIDE_LEN / _NORM_STRIDE,
    "step_length": 0.68,
    "stride_length": _NORM_STRIDE_LEN,
}

NORM_SIGMAS: dict[str, float] = {
    "stance_time": 0.04,
    "swing_time": 2.0,
    "step_time": 0.03,
    "stride_time": 0.06,
    "cadence": 6.0,
    "walking_speed": 0.12,
    "step_length": 0.05,
    "stride_length": 0.09,
}


@dataclass(frozen=True)
class CategorySpec:
    """One synthetic pathology: every mean moves ``shift_sigmas`` upward."""

    id: str
    name: str
    shift_sigmas: float
    sigma_scale: float = 1.0


@dataclass(frozen=True)
class CohortConfig:
    means: dict[str, float] = field(default_factory=lambda: dict(NORM_MEANS))
    sigmas: dict[str, float] = field(default_factory=lambda: dict(NORM_SIGMAS))
    # Positive, pairwise-distinct shifts keep all values positive and every
    # pair of categories at least 5.5 sigma apart on every parameter.
    categories: tuple[CategorySpec, ...] = (
        CategorySpec("ankle", "Ankle", 5.5),
        CategorySpec("calcaneus", "Calcaneus", 11.0),
        CategorySpec("hip", "Hip", 16.5),
        CategorySpec("knee", "Knee", 22.0),
    )
    trial_sample_rate_hz: float = 250.0
    trial_steps_per_foot: int = 8

    @classmethod
    def from_file(cls, path: str | Path) -> "CohortConfig":
        doc = json.loads(Path(path).read_text())
        base = cls()
        categories = base.categories
        if "categories" in doc:
            categories = tuple(
                CategorySpec(
                    id=c["id"],
                    name=c["name"],
                    shift_sigmas=float(c["shift_sigmas"]),
                    sigma_scale=float(c.get("sigma_scale", 1.0)),
                )
                for c in doc["categories"]
            )
        return cls(
            means={**base.means, **doc.get("means", {})},
            sigmas={**base.sigmas, **doc.get("sigmas", {})},
            categories=categories,
            trial_sample_rate_hz=float(
                doc.get("trial_sample_rate_hz", base.trial_sample_rate_hz)
            ),
            trial_steps_per_foot=int(
                doc.get("trial_steps_per_foot", base.trial_steps_per_foot)
            ),
        )

    def mean_for(self, stp_id: int, shift_sigmas: float) -> float:
        key = definition(stp_id).key
        return self.means[key] + shift_sigmas * self.sigmas[key]

    def sigma_for(self, stp_id: int, sigma_scale: float = 1.0) -> float:
        return self.sigmas[definition(stp_id).key] * sigma_scale


def _draw_meta(rng: np.random.Generator, pid: str) -> PatientMeta:
    return PatientMeta(
        id=pid,
        age=float(round(rng.uniform(18.0, 85.0), 1)),
        body_mass_kg=float(round(rng.uniform(52.0, 102.0), 1)),
        body_height_cm=float(round(rng.uniform(152.0, 198.0), 1)),
        gender=Gender.FEMALE if rng.uniform() < 0.5 else Gender.MALE,
    )


def _draw_patient(
    rng: np.random.Generator, pid: str, config: CohortConfig, spec: CategorySpec | None
) -> PatientRecord:
    shift = spec.shift_sigmas if spec else 0.0
    scale = spec.sigma_scale if spec else 1.0
    values = {
        i: config.mean_for(i, shift)
        + config.sigma_for(i, scale) * float(rng.standard_normal())
        for i in STP_IDS
    }
    return PatientRecord(
        meta=_draw_meta(rng, pid),
        stps=StpVector.from_mapping(values),
        added_at=SYNTH_TIMESTAMP,
    )


def generate_store(
    n_norm: int = 489,
    n_per_category: int = 50,
    seed: int = 1,
    config: CohortConfig | None = None,
) -> KnowledgeStore:
    """Deterministic store with the given cohort sizes."""
    config = config or CohortConfig()
    rng = np.random.default_rng(seed)
    norm = GaitCategory(
        id="norm",
        name="Norm",
        patients=tuple(
            _draw_patient(rng, f"norm-{k:04d}", config, None) for k in range(n_norm)
        ),
    )
    pathologies = tuple(
        GaitCategory(
            id=spec.id,
            name=spec.name,
            patients=tuple(
                _draw_patient(rng, f"{spec.id}-{k:04d}", config, spec)
                for k in range(n_per_category)
            ),
        )
        for spec in config.categories
    )
    return KnowledgeStore(norm_category=norm, pathology_categories=pathologies)


def _stance_bumps(
    n_steps: int,
    stance_s: float,
    stride_s: float,
    offset_s: float,
    rate: float,
    mass: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Classic double-peaked vertical force profile per stance, zero elsewhere."""
    total = int(round((offset_s + n_steps * stride_s + 0.5) * rate))
    signal = np.zeros(total)
    stance_n = max(int(round(stance_s * rate)), 4)
    u = np.arange(1, stance_n + 1) / (stance_n + 1)
    peaks = np.exp(-((u - 0.27) ** 2) / (2 * 0.11**2)) + np.exp(
        -((u - 0.73) ** 2) / (2 * 0.11**2)
    )
    shape = 1.12 * peaks + 0.25 * np.sin(np.pi * u)
    for k in range(n_steps):
        start = int(round((offset_s + k * stride_s) * rate))
        wobble = 1.0 + 0.02 * float(rng.standard_normal())
        signal[start : start + stance_n] = mass * G0 * shape * wobble
    return signal


def generate_trial(
    category_id: str,
    seed: int = 1,
    config: CohortConfig | None = None,
) -> RawTrial:
    """Sample trial whose timing matches the category's timing means."""
    config = config or CohortConfig()
    spec = None
    if category_id != "norm":
        spec = next((s for s in config.categories if s.id == category_id), None)
        if spec is None:
            raise KeyError(f"no category spec '{category_id}'")
    shift = spec.shift_sigmas if spec else 0.0
    stride = config.means["stride_time"] + shift * config.sigmas["stride_time"]
    stance = config.means["stance_time"] + shift * config.sigmas["stance_time"]
    stance = min(stance, 0.85 * stride)  # stance must leave room for swing
    step = config.means["step_time"] + shift * config.sigmas["step_time"]
    step = min(step, 0.9 * stride)
    step_len = config.means["step_length"] + shift * config.sigmas["step_length"]
    stride_len = config.means["stride_length"] + shift * config.sigmas["stride_length"]

    # zlib.crc32 is stable across processes, unlike hash() on strings.
    rng = np.random.default_rng(seed + zlib.crc32(category_id.encode()) % 1000)
    rate = config.trial_sample_rate_hz
    n_steps = config.trial_steps_per_foot
    meta = replace(_draw_meta(rng, f"sample-{category_id}"), id=f"sample-{category_id}")
    left = _stance_bumps(n_steps, stance, stride, 0.3, rate, meta.body_mass_kg, rng)
    right = _stance_bumps(
        n_steps, stance, stride, 0.3 + step, rate, meta.body_mass_kg, rng
    )
    length = max(len(left), len(right))
    left = np.pad(left, (0, length - len(left)))
    right = np.pad(right, (0, length - len(right)))
    spatial = SpatialMeta(
        left=FootSpatial(
            step_lengths_m=tuple([round(step_len, 3)] * n_steps),
            stride_lengths_m=tuple([round(stride_len, 3)] * (n_steps - 1)),
        ),
        right=FootSpatial(
            step_lengths_m=tuple([round(step_len, 3)] * n_steps),
            stride_lengths_m=tuple([round(stride_len, 3)] * (n_steps - 1)),
        ),
        walkway_distance_m=10.0,
    )
    return RawTrial(
        patient_meta=meta,
        left_samples=tuple(round(float(v), 3) for v in left),
        right_samples=tuple(round(float(v), 3) for v in right),
        sample_rate_hz=rate,
        spatial_meta=spatial,
    )


def generate_cohort_files(
    out_dir: str | Path,
    n_norm: int = 489,
    n_per_category: int = 50,
    seed: int = 1,
    config: CohortConfig | None = None,
) -> dict[str, Path]:
    """Write store.json plus one sample trial per category; returns the paths."""
    config = config or CohortConfig()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trials_dir = out / "trials"
    trials_dir.mkdir(exist_ok=True)

    store = generate_store(n_norm, n_per_category, seed, config)
    store_path = out / "store.json"
    save_store(store, store_path)

    paths = {"store": store_path}
    for category_id in ["norm"] + [s.id for s in config.categories]:
        trial = generate_trial(category_id, seed, config)
        path = trials_dir / f"{category_id}.json"
        dump_trial(trial, path)
        paths[f"trial:{category_id}"] = path
    return paths
