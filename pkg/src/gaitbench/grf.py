"""Vertical ground reaction force processing.

Pipeline: threshold-based step segmentation, amplitude normalization to body
weight, time normalization to 0..100% of stance, per-foot consistency graphs,
and the 16-parameter STP vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import G0, EngineConfig
from .errors import DegenerateSegment, InvalidPatientMeta, InvalidTrial, NoSteps
from .stps import Foot, StpVector, stp_id_for
from .trial import RawTrial

N_CURVE_SAMPLES = 101  # 0%, 1%, ..., 100% of stance


@dataclass(frozen=True)
class StepSegment:
    """One stance phase: a maximal run of samples above the contact threshold."""

    foot: Foot
    start_index: int
    end_index: int  # inclusive
    samples: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.start_index >= self.end_index:
            raise ValueError("a stance spans an interval: start_index < end_index")
        if len(self.samples) != self.end_index - self.start_index + 1:
            raise ValueError("samples length does not match index span")

    def duration_s(self, sample_rate_hz: float) -> float:
        return len(self.samples) / sample_rate_hz

    def start_time_s(self, sample_rate_hz: float) -> float:
        return self.start_index / sample_rate_hz


@dataclass(frozen=True)
class NormalizedStepCurve:
    """One stance resampled to 101 points, amplitude in body-weight units."""

    foot: Foot
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != N_CURVE_SAMPLES:
            raise ValueError(f"curve must have {N_CURVE_SAMPLES} samples")
        for i, v in enumerate(self.values):
            if not math.isfinite(v):
                raise ValueError(f"curve value at {i}% is not finite")
            if v < 0:
                raise ValueError(f"curve value at {i}% is negative")


@dataclass(frozen=True)
class ConsistencyGraph:
    """All normalized step curves of one foot plus their pointwise mean."""

    foot: Foot
    step_curves: tuple[NormalizedStepCurve, ...]
    mean_curve: NormalizedStepCurve


def contact_threshold_newton(body_mass_kg: float, config: EngineConfig) -> float:
    return config.contact_threshold_fraction * body_mass_kg * G0


def segment_steps(
    trial: RawTrial, foot: Foot, config: EngineConfig = EngineConfig()
) -> list[StepSegment]:
    """Maximal contiguous runs above the contact threshold, in temporal order.

    Runs shorter than the minimum stance duration are discarded as noise.
    """
    samples = trial.samples_for(foot)
    if len(samples) == 0:
        raise InvalidTrial(f"{foot.value} force signal is empty")
    theta = contact_threshold_newton(trial.patient_meta.body_mass_kg, config)
    # A stance is an interval, so 2 samples minimum even at very low rates.
    min_samples = max(
        2, math.ceil(config.min_stance_duration_s * trial.sample_rate_hz - 1e-9)
    )

    above = np.asarray(samples) > theta
    runs: list[tuple[int, int]] = []
    start: int | None = None
    for i, flag in enumerate(above):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(samples) - 1))
    return [
        StepSegment(
            foot=foot,
            start_index=a,
            end_index=b,
            samples=tuple(samples[a : b + 1]),
        )
        for a, b in runs
        if b - a + 1 >= min_samples
    ]


def amplitude_normalize(samples: Sequence[float], body_mass_kg: float) -> tuple[float, ...]:
    """Scale forces to body-weight units: value / (mass * g0)."""
    if body_mass_kg <= 0:
        raise InvalidPatientMeta("body_mass_kg must be positive")
    scale = 1.0 / (body_mass_kg * G0)
    return tuple(v * scale for v in samples)


def time_normalize(segment: StepSegment, body_mass_kg: float) -> NormalizedStepCurve:
    """Resample one stance to 101 points via linear interpolation.

    Point t sits at fractional sample index t/100 * (n-1) of the
    amplitude-normalized segment.
    """
    n = len(segment.samples)
    if n < 2:
        raise DegenerateSegment("cannot resample a segment with fewer than 2 samples")
    normalized = np.asarray(amplitude_normalize(segment.samples, body_mass_kg))
    positions = np.linspace(0.0, n - 1.0, N_CURVE_SAMPLES)
    values = np.interp(positions, np.arange(n), normalized)
    return NormalizedStepCurve(foot=segment.foot, values=tuple(float(v) for v in values))


def build_consistency_graph(
    segments: Sequence[StepSegment], body_mass_kg: float
) -> ConsistencyGraph:
    """Normalized curve per step plus their pointwise arithmetic mean."""
    if not segments:
        raise NoSteps("no step segments to build a consistency graph from")
    foot = segments[0].foot
    curves = tuple(time_normalize(s, body_mass_kg) for s in segments)
    stacked = np.asarray([c.values for c in curves])
    mean = NormalizedStepCurve(foot=foot, values=tuple(float(v) for v in stacked.mean(axis=0)))
    return ConsistencyGraph(foot=foot, step_curves=curves, mean_curve=mean)


def _mean(values: Sequence[float]) -> float | None:
    return float(np.mean(values)) if len(values) else None


def _temporal_parameters(
    own: Sequence[StepSegment],
    other: Sequence[StepSegment],
    rate: float,
) -> dict[str, float | None]:
    """Per-foot timing parameters from contact events.

    Initial contact is the segment start. A stride spans two consecutive
    contacts of the same foot; a step runs from a contact of the other foot to
    the next contact of this foot.
    """
    own_contacts = [s.start_time_s(rate) for s in own]
    other_contacts = [s.start_time_s(rate) for s in other]

    stance = _mean([s.duration_s(rate) for s in own])
    stride = _mean(np.diff(own_contacts)) if len(own_contacts) >= 2 else None

    # Adjacent opposite->own contact pairs in the merged event sequence.
    events = sorted(
        [(t, True) for t in own_contacts] + [(t, False) for t in other_contacts]
    )
    step_intervals = [
        b[0] - a[0] for a, b in zip(events, events[1:]) if b[1] and not a[1]
    ]
    step = _mean(step_intervals)

    swing = None
    if stance is not None and stride is not None and stride > 0:
        swing = (stride - stance) / stride * 100.0
    cadence = 60.0 / step if step is not None and step > 0 else None
    return {
        "stance_time": stance,
        "swing_time": swing,
        "step_time": step,
        "stride_time": stride,
        "cadence": cadence,
    }


def compute_stps(
    trial: RawTrial,
    left_segments: Sequence[StepSegment],
    right_segments: Sequence[StepSegment],
) -> StpVector:
    """The 16-parameter vector; inputs that cannot be derived stay missing.

    Spatial parameters come only from the trial's walkway annotations; they are
    never inferred from force data.
    """
    rate = trial.sample_rate_hz
    values: dict[int, float | None] = {}
    for foot, own, other in (
        (Foot.LEFT, left_segments, right_segments),
        (Foot.RIGHT, right_segments, left_segments),
    ):
        temporal = _temporal_parameters(own, other, rate)
        spatial = trial.spatial_meta.for_foot(foot) if trial.spatial_meta else None
        step_length = _mean(spatial.step_lengths_m) if spatial else None
        stride_length = _mean(spatial.stride_lengths_m) if spatial else None
        stride_time = temporal["stride_time"]
        speed = None
        if stride_length is not None and stride_time is not None and stride_time > 0:
            speed = stride_length / stride_time

        for key, value in {
            **temporal,
            "walking_speed": speed,
            "step_length": step_length,
            "stride_length": stride_length,
        }.items():
            values[stp_id_for(key, foot)] = value
    return StpVector.from_mapping(values)


def process_trial(
    trial: RawTrial, config: EngineConfig = EngineConfig()
) -> tuple[ConsistencyGraph, ConsistencyGraph, StpVector]:
    """Segment both feet and derive graphs plus the STP vector.

    Raises NoSteps when neither foot yields a usable step.
    """
    left = segment_steps(trial, Foot.LEFT, config)
    right = segment_steps(trial, Foot.RIGHT, config)
    if not left and not right:
        raise NoSteps("no steps detected on either foot")
    if not left or not right:
        raise NoSteps(f"no steps detected on the {'left' if not left else 'right'} foot")
    mass = trial.patient_meta.body_mass_kg
    return (
        build_consistency_graph(left, mass),
        build_consistency_graph(right, mass),
        compute_stps(trial, left, right),
    )
