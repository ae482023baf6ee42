"""The 16 spatio-temporal gait parameters (STPs): registry and per-patient vector.

Eight parameters are computed per foot. Ids 1..8 are the left foot, 9..16 the
right foot, both in the order listed in ``PARAMETER_KINDS``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping


class Foot(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def other(self) -> "Foot":
        return Foot.RIGHT if self is Foot.LEFT else Foot.LEFT


# (key, display name, unit); order fixes the id layout.
PARAMETER_KINDS: tuple[tuple[str, str, str], ...] = (
    ("stance_time", "Stance time", "s"),
    ("swing_time", "Swing time", "% of stride"),
    ("step_time", "Step time", "s"),
    ("stride_time", "Stride time", "s"),
    ("cadence", "Cadence", "steps/min"),
    ("walking_speed", "Walking speed", "m/s"),
    ("step_length", "Step length", "m"),
    ("stride_length", "Stride length", "m"),
)

N_PER_FOOT = len(PARAMETER_KINDS)
N_STPS = 2 * N_PER_FOOT
STP_IDS = tuple(range(1, N_STPS + 1))


@dataclass(frozen=True)
class StpDefinition:
    stp_id: int
    key: str
    name: str
    unit: str
    foot: Foot

    @property
    def label(self) -> str:
        return f"{self.name} ({self.foot.value})"


def _build_registry() -> tuple[StpDefinition, ...]:
    defs = []
    for foot_index, foot in enumerate((Foot.LEFT, Foot.RIGHT)):
        for kind_index, (key, name, unit) in enumerate(PARAMETER_KINDS):
            defs.append(
                StpDefinition(
                    stp_id=foot_index * N_PER_FOOT + kind_index + 1,
                    key=key,
                    name=name,
                    unit=unit,
                    foot=foot,
                )
            )
    return tuple(defs)


STP_DEFINITIONS: tuple[StpDefinition, ...] = _build_registry()
_BY_ID = {d.stp_id: d for d in STP_DEFINITIONS}
_BY_KEY_FOOT = {(d.key, d.foot): d for d in STP_DEFINITIONS}


def definition(stp_id: int) -> StpDefinition:
    if stp_id not in _BY_ID:
        raise KeyError(f"unknown stp_id {stp_id}")
    return _BY_ID[stp_id]


def stp_id_for(key: str, foot: Foot) -> int:
    return _BY_KEY_FOOT[(key, foot)].stp_id


def mirror_id(stp_id: int) -> int:
    """Id of the same parameter on the other foot."""
    d = definition(stp_id)
    return stp_id_for(d.key, d.foot.other)


@dataclass(frozen=True)
class StpValue:
    stp_id: int
    value: float | None

    def __post_init__(self) -> None:
        if self.stp_id not in _BY_ID:
            raise ValueError(f"unknown stp_id {self.stp_id}")
        if self.value is not None and not math.isfinite(self.value):
            raise ValueError(f"stp {self.stp_id} value must be finite")


@dataclass(frozen=True)
class StpVector:
    """All 16 parameter values of one patient; missing values stay ``None``."""

    entries: tuple[StpValue, ...]

    def __post_init__(self) -> None:
        ids = [e.stp_id for e in self.entries]
        if ids != list(STP_IDS):
            raise ValueError("StpVector requires exactly the 16 stp ids in order")

    @classmethod
    def from_mapping(cls, values: Mapping[int, float | None]) -> "StpVector":
        unknown = set(values) - set(STP_IDS)
        if unknown:
            raise ValueError(f"unknown stp ids: {sorted(unknown)}")
        return cls(tuple(StpValue(i, values.get(i)) for i in STP_IDS))

    @classmethod
    def empty(cls) -> "StpVector":
        return cls.from_mapping({})

    def value(self, stp_id: int) -> float | None:
        return self.entries[stp_id - 1].value

    def masked(self, keep: set[int]) -> "StpVector":
        """Copy with every value outside ``keep`` dropped."""
        return StpVector.from_mapping(
            {i: self.value(i) for i in STP_IDS if i in keep}
        )

    def present_ids(self) -> tuple[int, ...]:
        return tuple(e.stp_id for e in self.entries if e.value is not None)

    def __iter__(self) -> Iterator[StpValue]:
        return iter(self.entries)
