"""File-backed experiment tracking: runs, params, metric series, artifacts.

Layout under the store root:

    runs/<run_id>/meta.json      run metadata, status, tags, artifact index
    runs/<run_id>/params.json    immutable creation-time params
    runs/<run_id>/metrics/<key>.csv   append-only "step,timestamp,value"
    runs/<run_id>/artifacts/<name>    artifact bytes

Metric files are append-only and never rewritten; readers discard a
partially written trailing line, so a crash mid-append loses at most
that line. JSON is written with sorted keys for diffability.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import secrets
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

__all__ = [
    "Run",
    "MetricRecord",
    "ArtifactRef",
    "RunStore",
    "StoreError",
    "UnknownRunError",
    "RunFinishedError",
    "ParamImmutableError",
]

_METRIC_KEY_RE = re.compile(r"^[A-Za-z0-9_.-]+$")
_STATUSES = ("Running", "Finished", "Failed")


class StoreError(RuntimeError):
    pass


class UnknownRunError(KeyError):
    pass


class RunFinishedError(StoreError):
    pass


class ParamImmutableError(StoreError):
    pass


@dataclass(frozen=True)
class Run:
    run_id: str
    created_at: float
    params: dict
    status: str = "Running"
    tags: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MetricRecord:
    key: str
    value: float
    step: int
    timestamp: float


@dataclass(frozen=True)
class ArtifactRef:
    run_id: str
    path: str
    size: int
    sha256: str


def _write_json_atomic(path: Path, payload: dict) -> None:
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    os.replace(tmp, path)


class RunStore:
    """One store root; safe for one writer per run, many readers."""

    def __init__(self, root):
        self.root = Path(root)
        self.runs_dir = self.root / "runs"
        try:
            self.runs_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreError(f"store root not writable: {exc}") from exc

    # -- creation and metadata -------------------------------------------

    def create_run(self, params: dict, tags: Optional[dict] = None) -> Run:
        params = {str(k): str(v) for k, v in (params or {}).items()}
        tags = {str(k): str(v) for k, v in (tags or {}).items()}
        counter = len(list(self.runs_dir.iterdir())) + 1
        while True:
            run_id = f"{counter:06d}-{secrets.token_hex(2)}"
            run_dir = self.runs_dir / run_id
            try:
                run_dir.mkdir(parents=True, exist_ok=False)
                break
            except FileExistsError:
                counter += 1
            except OSError as exc:
                raise StoreError(f"store root not writable: {exc}") from exc
        (run_dir / "metrics").mkdir()
        (run_dir / "artifacts").mkdir()
        created_at = time.time()
        _write_json_atomic(
            run_dir / "meta.json",
            {
                "run_id": run_id,
                "created_at": created_at,
                "status": "Running",
                "tags": tags,
                "artifacts": {},
            },
        )
        _write_json_atomic(run_dir / "params.json", params)
        return Run(run_id=run_id, created_at=created_at, params=params, tags=tags)

    def _run_dir(self, run_id: str) -> Path:
        run_dir = self.runs_dir / run_id
        if not run_dir.is_dir():
            raise UnknownRunError(run_id)
        return run_dir

    def _meta(self, run_id: str) -> dict:
        return json.loads((self._run_dir(run_id) / "meta.json").read_text(encoding="utf-8"))

    def get_run(self, run_id: str) -> Run:
        meta = self._meta(run_id)
        params = json.loads((self._run_dir(run_id) / "params.json").read_text(encoding="utf-8"))
        return Run(
            run_id=meta["run_id"],
            created_at=meta["created_at"],
            params=params,
            status=meta["status"],
            tags=meta.get("tags", {}),
        )

    def set_status(self, run_id: str, status: str) -> None:
        if status not in _STATUSES:
            raise ValueError(f"status must be one of {_STATUSES}")
        meta = self._meta(run_id)
        meta["status"] = status
        _write_json_atomic(self._run_dir(run_id) / "meta.json", meta)

    def finish_run(self, run_id: str, failed: bool = False) -> None:
        self.set_status(run_id, "Failed" if failed else "Finished")

    def _require_running(self, run_id: str) -> None:
        if self._meta(run_id)["status"] != "Running":
            raise RunFinishedError(f"run {run_id} is no longer running")

    # -- logging -----------------------------------------------------------

    def log_metric(self, run_id: str, key: str, value: float, step: int = 0) -> None:
        if not _METRIC_KEY_RE.match(key):
            raise ValueError(f"invalid metric key {key!r}")
        value = float(value)
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError("metric values must be finite")
        if step < 0:
            raise ValueError("step must be >= 0")
        self._require_running(run_id)
        path = self._run_dir(run_id) / "metrics" / f"{key}.csv"
        with open(path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{step},{time.time()!r},{value!r}\n")
            fh.flush()
            os.fsync(fh.fileno())

    def log_param(self, run_id: str, key: str, value: str) -> None:
        # params are fixed at creation; this exists to make the contract loud
        raise ParamImmutableError("params are immutable after run creation")

    def log_artifact(self, run_id: str, name: str, data: bytes) -> ArtifactRef:
        if "/" in name or name.startswith("."):
            raise ValueError(f"artifact name {name!r} must be a plain file name")
        self._require_running(run_id)
        run_dir = self._run_dir(run_id)
        path = run_dir / "artifacts" / name
        path.write_bytes(data)
        digest = hashlib.sha256(data).hexdigest()
        meta = self._meta(run_id)
        meta["artifacts"][name] = {"size": len(data), "sha256": digest}
        _write_json_atomic(run_dir / "meta.json", meta)
        return ArtifactRef(run_id=run_id, path=f"artifacts/{name}", size=len(data), sha256=digest)

    def artifact_refs(self, run_id: str) -> list:
        meta = self._meta(run_id)
        return [
            ArtifactRef(run_id=run_id, path=f"artifacts/{name}", size=entry["size"],
                        sha256=entry["sha256"])
            for name, entry in sorted(meta.get("artifacts", {}).items())
        ]

    def read_artifact(self, run_id: str, name: str) -> bytes:
        return (self._run_dir(run_id) / "artifacts" / name).read_bytes()

    # -- reading -----------------------------------------------------------

    def metric_series(self, run_id: str, key: str) -> list:
        path = self._run_dir(run_id) / "metrics" / f"{key}.csv"
        if not path.exists():
            return []
        records = []
        lines = path.read_text(encoding="utf-8").split("\n")
        for i, line in enumerate(lines):
            if not line:
                continue
            parts = line.split(",")
            try:
                record = MetricRecord(
                    key=key, step=int(parts[0]), timestamp=float(parts[1]), value=float(parts[2])
                )
            except (ValueError, IndexError):
                if i >= len(lines) - 2:
                    continue  # partially written trailing line: discard
                raise StoreError(f"corrupt metric file {path}")
            records.append(record)
        return records

    def metric_keys(self, run_id: str) -> list:
        metrics = self._run_dir(run_id) / "metrics"
        return sorted(p.stem for p in metrics.glob("*.csv"))

    def list_runs(self) -> list:
        runs = [self.get_run(p.name) for p in self.runs_dir.iterdir() if p.is_dir()]
        runs.sort(key=lambda r: (r.created_at, r.run_id), reverse=True)
        return runs

    def query_runs(
        self,
        params: Optional[dict] = None,
        tags: Optional[dict] = None,
        status: Optional[str] = None,
    ) -> list:
        """Runs matching every given predicate, newest first."""
        out = []
        for run in self.list_runs():
            if status is not None and run.status != status:
                continue
            if params and any(run.params.get(k) != str(v) for k, v in params.items()):
                continue
            if tags and any(run.tags.get(k) != str(v) for k, v in tags.items()):
                continue
            out.append(run)
        return out

    def compare_runs(self, run_ids, key: str, aggregate: str = "last") -> list:
        """One row per run with the aggregated metric (None when missing)."""
        if aggregate not in ("last", "min", "max", "median"):
            raise ValueError(f"unknown aggregate {aggregate!r}")
        rows = []
        for run_id in run_ids:
            run = self.get_run(run_id)  # raises UnknownRunError
            series = self.metric_series(run_id, key)
            value = None
            if series:
                if aggregate == "last":
                    value = series[-1].value
                else:
                    values = sorted(r.value for r in series)
                    if aggregate == "min":
                        value = values[0]
                    elif aggregate == "max":
                        value = values[-1]
                    else:
                        n = len(values)
                        value = (
                            values[n // 2]
                            if n % 2
                            else (values[n // 2 - 1] + values[n // 2]) / 2.0
                        )
            rows.append({"run_id": run_id, "params": run.params, "value": value})
        return rows
