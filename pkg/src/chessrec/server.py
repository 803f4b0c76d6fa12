"""HTTP API for the validation queue, labeling job, monitor, and tracking
reads, plus static hosting for the review UI.

All mutation goes through the pipeline store's single writer; errors come
back as ``{"code": ..., "message": ...}`` with a matching status code.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import board as cb
from .pipeline import (
    AlreadyValidatedError,
    InvalidPlacementError,
    MonitorConfig,
    NoValidatedItemsError,
    PipelineStore,
    UnknownItemError,
)
from .tracking import RunStore, UnknownRunError

__all__ = ["create_app", "ApiError"]


class ApiError(Exception):
    def __init__(self, status_code: int, code: str, message: str):
        self.status_code = status_code
        self.code = code
        self.message = message


def _item_json(item, include_observation=False, store: Optional[PipelineStore] = None) -> dict:
    data = item.to_dict()
    if include_observation and store is not None:
        data["observation"] = store.observation_for(item.item_id).to_dict()
    return data


def create_app(
    pipeline_store: PipelineStore,
    run_store: RunStore,
    monitor_config: MonitorConfig = MonitorConfig(),
    static_dir=None,
) -> FastAPI:
    app = FastAPI(title="chessrec review API")

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": exc.code, "message": exc.message},
        )

    @app.get("/api/validations")
    def list_validations(status: Optional[str] = None):
        if status is not None and status not in ("pending", "accepted", "corrected"):
            raise ApiError(400, "bad_status", f"unknown status {status!r}")
        items = pipeline_store.list_items(status=status)
        return {"items": [_item_json(item) for item in items]}

    @app.get("/api/validations/{item_id}")
    def get_validation(item_id: str):
        try:
            item = pipeline_store.get_item(item_id)
        except UnknownItemError:
            raise ApiError(404, "unknown_item", f"no item {item_id!r}")
        return _item_json(item, include_observation=True, store=pipeline_store)

    @app.post("/api/validations/{item_id}")
    async def post_validation(item_id: str, request: Request):
        body = await request.json()
        verdict = body.get("verdict")
        if verdict not in ("accepted", "corrected"):
            raise ApiError(400, "bad_verdict", "verdict must be 'accepted' or 'corrected'")
        corrected = None
        if verdict == "corrected":
            placement = body.get("placement")
            if not placement:
                raise ApiError(400, "missing_placement", "corrected verdict needs a placement")
            try:
                corrected = cb.parse_board_fen(placement)
            except cb.FenError as exc:
                raise ApiError(400, "bad_placement", str(exc))
        try:
            item = pipeline_store.submit_validation(
                item_id, corrected_placement=corrected, note=body.get("note")
            )
        except UnknownItemError:
            raise ApiError(404, "unknown_item", f"no item {item_id!r}")
        except AlreadyValidatedError as exc:
            raise ApiError(409, "already_validated", str(exc))
        except InvalidPlacementError as exc:
            raise ApiError(400, "bad_placement", str(exc))
        return _item_json(item)

    @app.post("/api/labeling/run")
    def run_labeling():
        try:
            return pipeline_store.run_labeling_job()
        except NoValidatedItemsError as exc:
            raise ApiError(409, "no_validated_items", str(exc))

    @app.get("/api/monitor/status")
    def monitor_status():
        return pipeline_store.monitor_status(monitor_config).to_dict()

    @app.get("/api/runs")
    def list_runs():
        return {
            "runs": [
                {
                    "run_id": run.run_id,
                    "created_at": run.created_at,
                    "status": run.status,
                    "params": run.params,
                    "tags": run.tags,
                    "metric_keys": run_store.metric_keys(run.run_id),
                }
                for run in run_store.list_runs()
            ]
        }

    @app.get("/api/runs/{run_id}/metrics/{key}")
    def metric_series(run_id: str, key: str):
        try:
            series = run_store.metric_series(run_id, key)
        except UnknownRunError:
            raise ApiError(404, "unknown_run", f"no run {run_id!r}")
        return {
            "run_id": run_id,
            "key": key,
            "series": [
                {"step": r.step, "timestamp": r.timestamp, "value": r.value} for r in series
            ],
        }

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
