"""Patient-to-category matching and the derived visual data products.

The match score sums, over all STPs where both sides have data,
``std_dev / max(|mean - x|^2, epsilon)``: it grows as the patient's values
approach a category's means, with epsilon guarding the division when a value
hits the mean exactly. The inter-category difference is the Fisher criterion
``(mean_k - mean_l)^2 / (var_k + var_l)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .eks import (
    DemographicFilter,
    DistributionStats,
    EMPTY_FILTER,
    GaitCategory,
    KnowledgeStore,
    ParameterRange,
    distribution_stats,
)
from .errors import EmptyDistribution, InvalidEpsilon
from .stps import STP_IDS, Foot, StpVector, definition, stp_id_for
from .config import DEFAULT_EPSILON


class ParamState(Enum):
    IN_RANGE = "in_range"
    OUT_OF_RANGE = "out_of_range"
    NO_DATA = "no_data"


@dataclass(frozen=True)
class MatchResult:
    category_id: str
    category_name: str
    score: float
    summary: tuple[ParamState, ...]
    n_used: int
    epsilon: float


@dataclass(frozen=True)
class CategoryDifference:
    stp_id: int
    d: float
    degenerate: bool = False  # both variances zero but the means differ


@dataclass(frozen=True)
class ItbpData:
    """One twin-box-plot row: norm vs selected distributions plus the patient."""

    stp_id: int
    norm_stats: DistributionStats
    selected_stats: DistributionStats
    patient_value_left: float | None
    patient_value_right: float | None
    difference: CategoryDifference | None


def _score_terms(
    patient_stps: StpVector,
    stats_by_id: Mapping[int, DistributionStats],
    epsilon: float,
) -> tuple[float, int]:
    if not (isinstance(epsilon, (int, float)) and epsilon > 0):
        raise InvalidEpsilon(f"epsilon must be positive, got {epsilon}")
    total = 0.0
    n_used = 0
    for stp_id in STP_IDS:
        x = patient_stps.value(stp_id)
        stats = stats_by_id.get(stp_id)
        if x is None or stats is None or stats.is_empty:
            continue
        deviation = (stats.mean - x) ** 2
        total += stats.std_dev / max(deviation, epsilon)
        n_used += 1
    return total, n_used


def match_score(
    patient_stps: StpVector,
    stats_by_id: Mapping[int, DistributionStats],
    epsilon: float = DEFAULT_EPSILON,
) -> float:
    """Raw match score; STPs missing on either side are skipped."""
    total, _ = _score_terms(patient_stps, stats_by_id, epsilon)
    return total


def graphical_summary(
    patient_stps: StpVector, ranges: Sequence[ParameterRange]
) -> tuple[ParamState, ...]:
    """Three-state overview: in range, out of range, or no data per STP.

    Boundaries are inclusive: a value sitting exactly on min or max is in range.
    """
    by_id = {r.stp_id: r for r in ranges}
    states = []
    for stp_id in STP_IDS:
        x = patient_stps.value(stp_id)
        r = by_id.get(stp_id)
        if x is None or r is None or r.is_empty:
            states.append(ParamState.NO_DATA)
        elif x < r.min or x > r.max:
            states.append(ParamState.OUT_OF_RANGE)
        else:
            states.append(ParamState.IN_RANGE)
    return tuple(states)


def _effective_ranges(
    category: GaitCategory, stats_by_id: Mapping[int, DistributionStats]
) -> tuple[ParameterRange, ...]:
    """Manual ranges as stored; automatic ranges from the filtered extrema."""
    ranges = []
    for stp_id in STP_IDS:
        stored = category.range_for(stp_id)
        if stored.manual:
            ranges.append(stored)
        else:
            stats = stats_by_id[stp_id]
            ranges.append(ParameterRange(stp_id, stats.min, stats.max, manual=False))
    return tuple(ranges)


def evaluate_category(
    patient_stps: StpVector,
    category: GaitCategory,
    demo_filter: DemographicFilter = EMPTY_FILTER,
    epsilon: float = DEFAULT_EPSILON,
) -> MatchResult:
    stats_by_id = {
        stp_id: distribution_stats(category, stp_id, demo_filter) for stp_id in STP_IDS
    }
    score, n_used = _score_terms(patient_stps, stats_by_id, epsilon)
    summary = graphical_summary(patient_stps, _effective_ranges(category, stats_by_id))
    return MatchResult(
        category_id=category.id,
        category_name=category.name,
        score=score,
        summary=summary,
        n_used=n_used,
        epsilon=epsilon,
    )


def rank_categories(
    patient_stps: StpVector,
    store: KnowledgeStore,
    demo_filter: DemographicFilter = EMPTY_FILTER,
    epsilon: float = DEFAULT_EPSILON,
) -> list[MatchResult]:
    """Every category scored against the patient, best match first.

    Ties are broken by category name so the ordering is reproducible.
    """
    results = [
        evaluate_category(patient_stps, category, demo_filter, epsilon)
        for category in store.categories()
    ]
    results.sort(key=lambda r: (-r.score, r.category_name))
    return results


def category_difference(
    stats_k: DistributionStats, stats_l: DistributionStats
) -> CategoryDifference:
    """Fisher-criterion distance between two distributions of the same STP."""
    if stats_k.is_empty or stats_l.is_empty:
        raise EmptyDistribution(
            f"stp {stats_k.stp_id}: cannot compare empty distributions"
        )
    if stats_k.stp_id != stats_l.stp_id:
        raise ValueError("distributions describe different stp ids")
    numerator = (stats_k.mean - stats_l.mean) ** 2
    denominator = stats_k.variance + stats_l.variance
    if denominator == 0.0:
        if numerator == 0.0:
            return CategoryDifference(stats_k.stp_id, 0.0)
        return CategoryDifference(stats_k.stp_id, math.inf, degenerate=True)
    return CategoryDifference(stats_k.stp_id, numerator / denominator)


def itbp_data(
    store: KnowledgeStore,
    selected_category_id: str,
    stp_id: int,
    patient_stps: StpVector | None,
    demo_filter: DemographicFilter = EMPTY_FILTER,
) -> ItbpData:
    """Twin-box-plot bundle for one STP of the selected category.

    Both feet's patient values ride along so left/right asymmetry stays visible
    in every row.
    """
    selected = store.category(selected_category_id)
    norm_stats = distribution_stats(store.norm_category, stp_id, demo_filter)
    selected_stats = distribution_stats(selected, stp_id, demo_filter)
    difference = None
    if not norm_stats.is_empty and not selected_stats.is_empty:
        difference = category_difference(norm_stats, selected_stats)
    key = definition(stp_id).key
    left = patient_stps.value(stp_id_for(key, Foot.LEFT)) if patient_stps else None
    right = patient_stps.value(stp_id_for(key, Foot.RIGHT)) if patient_stps else None
    return ItbpData(
        stp_id=stp_id,
        norm_stats=norm_stats,
        selected_stats=selected_stats,
        patient_value_left=left,
        patient_value_right=right,
        difference=difference,
    )


def itbp_table(
    store: KnowledgeStore,
    selected_category_id: str,
    patient_stps: StpVector | None,
    demo_filter: DemographicFilter = EMPTY_FILTER,
) -> list[ItbpData]:
    return [
        itbp_data(store, selected_category_id, stp_id, patient_stps, demo_filter)
        for stp_id in STP_IDS
    ]
