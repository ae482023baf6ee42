"""HTTP API over the engine: owns the live store and the loaded patient.

Mutations are serialized behind a lock and autosaved before they become
visible; a failed request therefore leaves both store and session unchanged.
Run with ``python -m gaitbench.service`` (see README for the env settings).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .analysis import itbp_table, rank_categories
from .config import G0, ServiceConfig
from .eks import (
    DemographicFilter,
    EMPTY_FILTER,
    KnowledgeStore,
    PatientRecord,
    apply_patient,
    default_store,
    load_store,
    override_range,
    reset_category,
    save_store,
)
from .errors import (
    DegenerateSegment,
    Duplicate,
    EmptyDistribution,
    GaitError,
    InvalidEpsilon,
    InvalidPatientMeta,
    InvalidRange,
    InvalidTrial,
    NoSteps,
    NotFound,
)
from .grf import ConsistencyGraph, process_trial
from .stps import StpVector
from .trial import Gender, RawTrial, parse_trial
from .wire import (
    canonical_dumps,
    combined_wire,
    graph_wire,
    match_payload,
    parameters_payload,
    patient_meta_wire,
    stp_vector_wire,
    tree_payload,
)

_STATUS_BY_ERROR: tuple[tuple[type, int], ...] = (
    (NotFound, 404),
    (Duplicate, 409),
    (InvalidRange, 400),
    (InvalidEpsilon, 400),
    (InvalidTrial, 422),
    (InvalidPatientMeta, 422),
    (NoSteps, 422),
    (DegenerateSegment, 422),
    (EmptyDistribution, 422),
)


class NoPatientLoaded(GaitError):
    """A patient-dependent endpoint was called before POST /patients/load."""


@dataclass
class Session:
    trial: RawTrial
    left_graph: ConsistencyGraph
    right_graph: ConsistencyGraph
    stps: StpVector


@dataclass
class EngineState:
    config: ServiceConfig
    store: KnowledgeStore
    session: Session | None = None
    # Filter is in-memory only, so it falls back to empty on every restart.
    active_filter: DemographicFilter = EMPTY_FILTER
    lock: threading.Lock = field(default_factory=threading.Lock)

    def mutate(self, op: Callable[[KnowledgeStore], KnowledgeStore]) -> KnowledgeStore:
        """Apply op, persist, then publish; any failure leaves state untouched."""
        with self.lock:
            updated = op(self.store)
            save_store(updated, self.config.store_path)
            self.store = updated
            return updated

    def require_session(self) -> Session:
        if self.session is None:
            raise NoPatientLoaded("no patient loaded; POST /patients/load first")
        return self.session


def _status_for(exc: GaitError) -> int:
    if isinstance(exc, NoPatientLoaded):
        return 409
    for err_type, status in _STATUS_BY_ERROR:
        if isinstance(exc, err_type):
            return status
    return 500


def parse_filter_params(
    gender: str | None,
    age_min: float | None,
    age_max: float | None,
    height_min: float | None,
    height_max: float | None,
    mass_min: float | None,
    mass_max: float | None,
) -> DemographicFilter:
    genders = None
    if gender:
        try:
            genders = frozenset(Gender(g.strip()) for g in gender.split(",") if g.strip())
        except ValueError as exc:
            raise InvalidRange(f"unknown gender in filter: {exc}") from exc

    def interval(lo: float | None, hi: float | None) -> tuple[float, float] | None:
        if lo is None and hi is None:
            return None
        return (lo if lo is not None else float("-inf"), hi if hi is not None else float("inf"))

    return DemographicFilter(
        genders=genders,
        age=interval(age_min, age_max),
        body_height_cm=interval(height_min, height_max),
        body_mass_kg=interval(mass_min, mass_max),
    )


class ApplyBody(BaseModel):
    subset: list[int] | None = None


class RangeBody(BaseModel):
    min: float
    max: float


def _canonical(payload: dict) -> Response:
    return Response(content=canonical_dumps(payload), media_type="application/json")


def initial_store(config: ServiceConfig) -> KnowledgeStore:
    if Path(config.store_path).exists():
        return load_store(config.store_path)
    return default_store()


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    state = EngineState(config=config, store=initial_store(config))

    app = FastAPI(title="gaitbench service", version="0.1.0")
    app.state.engine = state
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(GaitError)
    def gait_error_handler(request: Request, exc: GaitError) -> JSONResponse:
        return JSONResponse(status_code=_status_for(exc), content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"ok": True}

    @app.post("/patients/load")
    async def load_patient(request: Request) -> Response:
        body = await request.body()
        if not body:
            raise InvalidTrial("empty request body")
        trial = parse_trial(body.decode("utf-8", errors="replace"))
        left, right, stps = process_trial(trial, config.engine)
        state.session = Session(trial=trial, left_graph=left, right_graph=right, stps=stps)
        payload = {
            "patient": patient_meta_wire(trial.patient_meta),
            "stps": stp_vector_wire(stps),
            "graphs": {
                "left": graph_wire(left),
                "right": graph_wire(right),
                "combined": combined_wire(
                    trial, 1.0 / (trial.patient_meta.body_mass_kg * G0)
                ),
            },
        }
        return _canonical(payload)

    def current_match_payload(demo_filter: DemographicFilter) -> dict:
        session = state.require_session()
        results = rank_categories(
            session.stps, state.store, demo_filter, config.engine.epsilon
        )
        return match_payload(results)

    @app.get("/match")
    def get_match(request: Request) -> Response:
        demo_filter = parse_filter_params(**_filter_kwargs(request))
        state.active_filter = demo_filter
        return _canonical(current_match_payload(demo_filter))

    @app.get("/categories/{category_id}/parameters")
    def get_parameters(category_id: str, request: Request) -> Response:
        demo_filter = parse_filter_params(**_filter_kwargs(request))
        category = state.store.category(category_id)
        stps = state.session.stps if state.session else None
        rows = itbp_table(state.store, category_id, stps, demo_filter)
        return _canonical(parameters_payload(rows, category))

    @app.post("/categories/{category_id}/apply")
    def post_apply(category_id: str, body: ApplyBody | None = None) -> Response:
        session = state.require_session()
        subset = set(body.subset) if body and body.subset is not None else None
        record = PatientRecord(
            meta=session.trial.patient_meta,
            stps=session.stps,
            added_at=datetime.now(timezone.utc).isoformat(),
        )
        state.mutate(lambda s: apply_patient(s, category_id, record, subset))
        return _canonical(current_match_payload(state.active_filter))

    @app.post("/categories/{category_id}/reset")
    def post_reset(category_id: str) -> Response:
        store = state.mutate(lambda s: reset_category(s, category_id))
        return _canonical(tree_payload(store))

    @app.post("/categories/{category_id}/ranges/{stp_id}")
    def post_range(category_id: str, stp_id: int, body: RangeBody) -> Response:
        store = state.mutate(
            lambda s: override_range(s, category_id, stp_id, body.min, body.max)
        )
        return _canonical(tree_payload(store))

    @app.get("/tree")
    def get_tree() -> Response:
        return _canonical(tree_payload(state.store))

    return app


_FILTER_KEYS = (
    "gender",
    "age_min",
    "age_max",
    "height_min",
    "height_max",
    "mass_min",
    "mass_max",
)


def _filter_kwargs(request: Request) -> dict:
    params = request.query_params

    def number(key: str) -> float | None:
        raw = params.get(key)
        if raw is None or raw == "":
            return None
        try:
            return float(raw)
        except ValueError as exc:
            raise InvalidRange(f"filter {key} must be a number") from exc

    return {
        "gender": params.get("gender"),
        **{key: number(key) for key in _FILTER_KEYS if key != "gender"},
    }


def main() -> None:
    import uvicorn

    config = ServiceConfig.from_env()
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")


if __name__ == "__main__":
    main()
