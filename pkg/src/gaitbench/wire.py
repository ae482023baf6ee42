"""Canonical JSON payloads shared by the HTTP service and the CLI.

Every payload goes through ``canonical_dumps`` so identical inputs produce
byte-identical output regardless of which front end asked.
"""

from __future__ import annotations

import json
import math
from typing import Any, Sequence

from .analysis import CategoryDifference, ItbpData, MatchResult
from .eks import DistributionStats, GaitCategory, KnowledgeStore
from .grf import ConsistencyGraph
from .stps import STP_IDS, StpVector, definition
from .trial import PatientMeta, RawTrial


def canonical_dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def patient_meta_wire(meta: PatientMeta) -> dict:
    return {
        "id": meta.id,
        "age": meta.age,
        "body_mass_kg": meta.body_mass_kg,
        "body_height_cm": meta.body_height_cm,
        "gender": meta.gender.value,
    }


def stp_vector_wire(stps: StpVector) -> list[dict]:
    rows = []
    for stp_id in STP_IDS:
        d = definition(stp_id)
        rows.append(
            {
                "stp_id": stp_id,
                "name": d.name,
                "foot": d.foot.value,
                "unit": d.unit,
                "value": stps.value(stp_id),
            }
        )
    return rows


def graph_wire(graph: ConsistencyGraph) -> dict:
    return {
        "foot": graph.foot.value,
        "step_curves": [list(c.values) for c in graph.step_curves],
        "mean_curve": list(graph.mean_curve.values),
    }


def combined_wire(trial: RawTrial, values_scale: float) -> dict:
    """Both feet's amplitude-normalized signals on the shared trial time axis."""
    step = 1.0 / trial.sample_rate_hz
    return {
        "sample_rate_hz": trial.sample_rate_hz,
        "left": {
            "times_s": [i * step for i in range(len(trial.left_samples))],
            "values_bw": [v * values_scale for v in trial.left_samples],
        },
        "right": {
            "times_s": [i * step for i in range(len(trial.right_samples))],
            "values_bw": [v * values_scale for v in trial.right_samples],
        },
    }


def match_result_wire(result: MatchResult) -> dict:
    return {
        "category_id": result.category_id,
        "category_name": result.category_name,
        "score": result.score,
        "n_used": result.n_used,
        "epsilon": result.epsilon,
        "summary": [state.value for state in result.summary],
    }


def match_payload(results: Sequence[MatchResult]) -> dict:
    return {"results": [match_result_wire(r) for r in results]}


def stats_wire(stats: DistributionStats) -> dict:
    return {
        "stp_id": stats.stp_id,
        "n": stats.n,
        "mean": stats.mean,
        "std_dev": stats.std_dev,
        "min": stats.min,
        "max": stats.max,
        "q1": stats.q1,
        "median": stats.median,
        "q3": stats.q3,
        "raw_values": list(stats.raw_values),
    }


def difference_wire(difference: CategoryDifference | None) -> dict | None:
    if difference is None:
        return None
    # JSON has no infinity; a degenerate comparison ships d as null.
    return {
        "d": None if math.isinf(difference.d) else difference.d,
        "degenerate": difference.degenerate,
    }


def itbp_wire(row: ItbpData) -> dict:
    d = definition(row.stp_id)
    return {
        "stp_id": row.stp_id,
        "name": d.name,
        "foot": d.foot.value,
        "unit": d.unit,
        "norm": stats_wire(row.norm_stats),
        "selected": stats_wire(row.selected_stats),
        "patient_left": row.patient_value_left,
        "patient_right": row.patient_value_right,
        "difference": difference_wire(row.difference),
    }


def parameters_payload(rows: Sequence[ItbpData], category: GaitCategory) -> dict:
    return {
        "category_id": category.id,
        "category_name": category.name,
        "parameters": [itbp_wire(r) for r in rows],
    }


def category_node_wire(category: GaitCategory, is_norm: bool) -> dict:
    return {
        "id": category.id,
        "name": category.name,
        "is_norm": is_norm,
        "n_patients": len(category.patients),
        "manual_stp_ids": list(category.manual_stp_ids()),
        "has_manual_override": bool(category.manual_stp_ids()),
        "patients": [
            {"id": p.meta.id, "added_at": p.added_at} for p in category.patients
        ],
        "ranges": [
            {"stp_id": r.stp_id, "min": r.min, "max": r.max, "manual": r.manual}
            for r in category.ranges
        ],
    }


def tree_payload(store: KnowledgeStore) -> dict:
    return {
        "categories": [
            category_node_wire(c, c.id == store.norm_category.id)
            for c in store.categories()
        ]
    }
