"""Shared builders for synthetic trials, patients, and stores."""

from __future__ import annotations

import numpy as np
import pytest

from gaitbench.config import G0
from gaitbench.eks import (
    KnowledgeStore,
    PatientRecord,
    apply_patient,
    default_store,
)
from gaitbench.stps import STP_IDS, StpVector
from gaitbench.trial import (
    FootSpatial,
    Gender,
    PatientMeta,
    RawTrial,
    SpatialMeta,
)

FIXED_TS = "2024-01-01T00:00:00Z"


def make_meta(
    pid: str = "P001",
    age: float = 40.0,
    mass: float = 80.0,
    height: float = 175.0,
    gender: Gender = Gender.FEMALE,
) -> PatientMeta:
    return PatientMeta(
        id=pid, age=age, body_mass_kg=mass, body_height_cm=height, gender=gender
    )


def make_record(
    pid: str,
    values: dict[int, float],
    *,
    age: float = 40.0,
    mass: float = 80.0,
    height: float = 175.0,
    gender: Gender = Gender.FEMALE,
) -> PatientRecord:
    return PatientRecord(
        meta=make_meta(pid, age, mass, height, gender),
        stps=StpVector.from_mapping(values),
        added_at=FIXED_TS,
    )


def full_values(base: float) -> dict[int, float]:
    """A complete 16-value mapping spread around ``base``."""
    return {i: base + 0.01 * i for i in STP_IDS}


def pulse_signal(
    length: int, bursts: list[tuple[int, int]], level: float
) -> list[float]:
    """Zero signal with rectangular bursts of ``level`` over [start, end]."""
    signal = np.zeros(length)
    for start, end in bursts:
        signal[start : end + 1] = level
    return signal.tolist()


def walking_signal(
    n_steps: int,
    stance_s: float,
    stride_s: float,
    offset_s: float,
    rate: float,
    mass: float,
    peak_bw: float = 1.15,
) -> tuple[list[float], int]:
    """Half-sine stance bumps at regular stride intervals; returns (signal, length)."""
    total = int(round((offset_s + n_steps * stride_s + 1.0) * rate))
    signal = np.zeros(total)
    stance_n = int(round(stance_s * rate))
    for k in range(n_steps):
        start = int(round((offset_s + k * stride_s) * rate))
        t = np.arange(stance_n)
        signal[start : start + stance_n] = (
            peak_bw * mass * G0 * np.sin(np.pi * (t + 1) / (stance_n + 1))
        )
    return signal.tolist(), total


def make_walking_trial(
    *,
    pid: str = "P100",
    mass: float = 80.0,
    n_steps: int = 10,
    stance_s: float = 0.66,
    stride_s: float = 1.1,
    step_offset_s: float = 0.55,
    rate: float = 1000.0,
    spatial: bool = False,
) -> RawTrial:
    left, total_l = walking_signal(n_steps, stance_s, stride_s, 0.2, rate, mass)
    right, total_r = walking_signal(
        n_steps, stance_s, stride_s, 0.2 + step_offset_s, rate, mass
    )
    length = max(total_l, total_r)
    left = left + [0.0] * (length - len(left))
    right = right + [0.0] * (length - len(right))
    spatial_meta = None
    if spatial:
        spatial_meta = SpatialMeta(
            left=FootSpatial(
                step_lengths_m=tuple([0.62] * n_steps),
                stride_lengths_m=tuple([1.25] * (n_steps - 1)),
            ),
            right=FootSpatial(
                step_lengths_m=tuple([0.64] * n_steps),
                stride_lengths_m=tuple([1.27] * (n_steps - 1)),
            ),
            walkway_distance_m=10.0,
        )
    return RawTrial(
        patient_meta=make_meta(pid, mass=mass),
        left_samples=tuple(left),
        right_samples=tuple(right),
        sample_rate_hz=rate,
        spatial_meta=spatial_meta,
    )


def seeded_store(n_norm: int = 6, n_each: int = 4) -> KnowledgeStore:
    """Small deterministic store with distinct means per category."""
    rng = np.random.default_rng(20240101)
    store = default_store()
    offsets = {"norm": 1.0, "ankle": 3.0, "calcaneus": 5.0, "hip": 7.0, "knee": 9.0}
    for category_id, offset in offsets.items():
        count = n_norm if category_id == "norm" else n_each
        for k in range(count):
            values = {
                i: offset + 0.05 * i + 0.01 * float(rng.standard_normal())
                for i in STP_IDS
            }
            record = make_record(
                f"{category_id}-{k}",
                values,
                age=30.0 + k,
                mass=60.0 + 2 * k,
                height=160.0 + k,
                gender=Gender.FEMALE if k % 2 == 0 else Gender.MALE,
            )
            store = apply_patient(store, category_id, record)
    return store


@pytest.fixture
def small_store() -> KnowledgeStore:
    return seeded_store()


@pytest.fixture
def walking_trial() -> RawTrial:
    return make_walking_trial(spatial=True)
