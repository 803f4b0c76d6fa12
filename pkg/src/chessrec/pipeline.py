"""Operation-time capture, expert validation queue, labeling job, and the
accuracy/latency monitor.

Store layout under the pipeline root:

    games.json                  registered game ids -> initial position
    state.json                  validation sequence counter
    items/<game>-<ply>.json     one validation item per recorded inference
    observations/<item>.json    observation referenced by the item
    labeled/labeled.csv         output of the labeling job

Items are append-only; a validated verdict is never mutated or deleted.
All writes go through a single store instance (one mutation queue);
reads are safe at any time.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from . import board as cb
from .recognize import Prediction
from .simulate import Observation

__all__ = [
    "ValidationItem",
    "MonitorConfig",
    "MonitorStatus",
    "PipelineStore",
    "PipelineError",
    "UnknownGameError",
    "UnknownItemError",
    "AlreadyValidatedError",
    "InvalidPlacementError",
    "NoValidatedItemsError",
    "LABELED_HEADER",
]

LABELED_HEADER = (
    "game_id,ply,square,label,p_occ,p_white,"
    + ",".join(f"type_{i}" for i in range(cb.NUM_CLASSES))
    + ",source"
)

PENDING, ACCEPTED, CORRECTED = "pending", "accepted", "corrected"


class PipelineError(RuntimeError):
    pass


class UnknownGameError(KeyError):
    pass


class UnknownItemError(KeyError):
    pass


class AlreadyValidatedError(PipelineError):
    pass


class InvalidPlacementError(ValueError):
    pass


class NoValidatedItemsError(PipelineError):
    pass


@dataclass(frozen=True)
class ValidationItem:
    item_id: str
    game_id: str
    ply: int
    predicted_placement: tuple
    status: str = PENDING
    corrected_placement: Optional[tuple] = None
    note: Optional[str] = None
    correct: Optional[bool] = None
    latency_s: float = 0.0
    recorded_at: float = 0.0
    validated_at: Optional[float] = None
    validation_seq: Optional[int] = None

    @property
    def validated_placement(self) -> Optional[tuple]:
        if self.status == ACCEPTED:
            return self.predicted_placement
        if self.status == CORRECTED:
            return self.corrected_placement
        return None

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "game_id": self.game_id,
            "ply": self.ply,
            "predicted_placement": cb.board_fen(self.predicted_placement),
            "status": self.status,
            "corrected_placement": (
                None
                if self.corrected_placement is None
                else cb.board_fen(self.corrected_placement)
            ),
            "note": self.note,
            "correct": self.correct,
            "latency_s": self.latency_s,
            "recorded_at": self.recorded_at,
            "validated_at": self.validated_at,
            "validation_seq": self.validation_seq,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ValidationItem":
        corrected = data.get("corrected_placement")
        return cls(
            item_id=data["item_id"],
            game_id=data["game_id"],
            ply=data["ply"],
            predicted_placement=cb.parse_board_fen(data["predicted_placement"]),
            status=data["status"],
            corrected_placement=None if corrected is None else cb.parse_board_fen(corrected),
            note=data.get("note"),
            correct=data.get("correct"),
            latency_s=data.get("latency_s", 0.0),
            recorded_at=data.get("recorded_at", 0.0),
            validated_at=data.get("validated_at"),
            validation_seq=data.get("validation_seq"),
        )


@dataclass(frozen=True)
class MonitorConfig:
    accuracy_threshold: float = 0.90
    latency_budget_s: float = 2.0
    window: int = 50

    def __post_init__(self) -> None:
        if not 0.0 < self.accuracy_threshold < 1.0:
            raise ValueError("accuracy threshold must lie in (0, 1)")
        if self.latency_budget_s <= 0:
            raise ValueError("latency budget must be positive")
        if self.window < 1:
            raise ValueError("window must be >= 1")


@dataclass(frozen=True)
class MonitorStatus:
    validated: int
    window: int
    accuracy: Optional[float]
    alert: bool
    latency_violations: int
    accuracy_threshold: float
    latency_budget_s: float

    @property
    def no_data(self) -> bool:
        return self.accuracy is None

    def to_dict(self) -> dict:
        return {
            "validated": self.validated,
            "window": self.window,
            "accuracy": self.accuracy,
            "alert": self.alert,
            "latency_violations": self.latency_violations,
            "accuracy_threshold": self.accuracy_threshold,
            "latency_budget_s": self.latency_budget_s,
            "no_data": self.no_data,
        }


def validate_placement(placement) -> tuple:
    """Check the placement-level board invariants (kings, pawn ranks)."""
    placement = tuple(int(c) for c in placement)
    if len(placement) != 64:
        raise InvalidPlacementError("placement must cover 64 squares")
    if any(not 0 <= c < cb.NUM_CLASSES for c in placement):
        raise InvalidPlacementError("placement contains an unknown class code")
    for color in (cb.Color.WHITE, cb.Color.BLACK):
        kings = placement.count(cb.piece_code(color, cb.PieceKind.KING))
        if kings != 1:
            raise InvalidPlacementError(
                f"expected exactly one {color.name.lower()} king, found {kings}"
            )
    pawns = (
        cb.piece_code(cb.Color.WHITE, cb.PieceKind.PAWN),
        cb.piece_code(cb.Color.BLACK, cb.PieceKind.PAWN),
    )
    for sq in range(0, 8):
        if placement[sq] in pawns or placement[56 + sq] in pawns:
            raise InvalidPlacementError("pawn on a back rank")
    return placement


class PipelineStore:
    def __init__(self, root):
        self.root = Path(root)
        self.items_dir = self.root / "items"
        self.obs_dir = self.root / "observations"
        self.labeled_dir = self.root / "labeled"
        for d in (self.items_dir, self.obs_dir, self.labeled_dir):
            d.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    # -- games ---------------------------------------------------------------

    def _games(self) -> dict:
        path = self.root / "games.json"
        if not path.exists():
            return {}
        return json.loads(path.read_text(encoding="utf-8"))

    def register_game(self, game_id: str, initial_fen: str = cb.STARTING_FEN) -> None:
        with self._lock:
            games = self._games()
            games[game_id] = initial_fen
            (self.root / "games.json").write_text(
                json.dumps(games, sort_keys=True, indent=1) + "\n", encoding="utf-8"
            )

    def games(self) -> dict:
        return self._games()

    # -- items -----------------------------------------------------------------

    @staticmethod
    def _item_id(game_id: str, ply: int) -> str:
        return f"{game_id}-{ply:04d}"

    def _item_path(self, item_id: str) -> Path:
        return self.items_dir / f"{item_id}.json"

    def _write_item(self, item: ValidationItem) -> None:
        self._item_path(item.item_id).write_text(
            json.dumps(item.to_dict(), sort_keys=True, indent=1) + "\n", encoding="utf-8"
        )

    def get_item(self, item_id: str) -> ValidationItem:
        path = self._item_path(item_id)
        if not path.exists():
            raise UnknownItemError(item_id)
        return ValidationItem.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def list_items(self, status: Optional[str] = None) -> list:
        items = [
            ValidationItem.from_dict(json.loads(p.read_text(encoding="utf-8")))
            for p in sorted(self.items_dir.glob("*.json"))
        ]
        if status is not None:
            items = [item for item in items if item.status == status]
        return items

    def record_inference(
        self,
        game_id: str,
        ply: int,
        prediction: Prediction,
        observation: Observation,
    ) -> ValidationItem:
        """Persist one operation-time prediction as a Pending item.

        Recording the same (game, ply) twice returns the existing item.
        """
        with self._lock:
            if game_id not in self._games():
                raise UnknownGameError(game_id)
            item_id = self._item_id(game_id, ply)
            path = self._item_path(item_id)
            if path.exists():
                return self.get_item(item_id)
            obs_path = self.obs_dir / f"{item_id}.json"
            obs_path.write_text(
                json.dumps(observation.to_dict(), sort_keys=True) + "\n", encoding="utf-8"
            )
            item = ValidationItem(
                item_id=item_id,
                game_id=game_id,
                ply=ply,
                predicted_placement=tuple(prediction.predicted_placement),
                latency_s=prediction.latency_s,
                recorded_at=time.time(),
            )
            self._write_item(item)
            return item

    def observation_for(self, item_id: str) -> Observation:
        path = self.obs_dir / f"{item_id}.json"
        if not path.exists():
            raise UnknownItemError(item_id)
        return Observation.from_dict(json.loads(path.read_text(encoding="utf-8")))

    # -- validation --------------------------------------------------------------

    def _next_validation_seq(self) -> int:
        path = self.root / "state.json"
        state = json.loads(path.read_text(encoding="utf-8")) if path.exists() else {}
        seq = state.get("validation_seq", 0) + 1
        state["validation_seq"] = seq
        path.write_text(json.dumps(state, sort_keys=True) + "\n", encoding="utf-8")
        return seq

    def submit_validation(
        self,
        item_id: str,
        corrected_placement=None,
        note: Optional[str] = None,
    ) -> ValidationItem:
        """Accept (no placement) or correct (with placement) a pending item."""
        with self._lock:
            item = self.get_item(item_id)
            if item.status != PENDING:
                raise AlreadyValidatedError(f"item {item_id} already {item.status}")
            if corrected_placement is None:
                updated = replace(
                    item,
                    status=ACCEPTED,
                    correct=True,
                    note=note,
                    validated_at=time.time(),
                    validation_seq=self._next_validation_seq(),
                )
            else:
                placement = validate_placement(corrected_placement)
                if placement == item.predicted_placement and not note:
                    raise InvalidPlacementError(
                        "correction equals the prediction; accept it or add a note"
                    )
                updated = replace(
                    item,
                    status=CORRECTED,
                    corrected_placement=placement,
                    correct=placement == item.predicted_placement,
                    note=note,
                    validated_at=time.time(),
                    validation_seq=self._next_validation_seq(),
                )
            self._write_item(updated)
            return updated

    def validated_items(self) -> list:
        """Validated items in validation order."""
        items = [item for item in self.list_items() if item.status != PENDING]
        items.sort(key=lambda item: item.validation_seq)
        return items

    # -- labeling ------------------------------------------------------------------

    def run_labeling_job(self) -> dict:
        """Emit one row per square per validated item; deterministic bytes.

        Re-running overwrites the previous output. Returns a summary with
        the row count and per-class label counts.
        """
        with self._lock:
            validated = [item for item in self.list_items() if item.status != PENDING]
            if not validated:
                raise NoValidatedItemsError("no validated items to label")
            validated.sort(key=lambda item: (item.game_id, item.ply))
            lines = [LABELED_HEADER]
            per_class = {i: 0 for i in range(cb.NUM_CLASSES)}
            for item in validated:
                observation = self.observation_for(item.item_id)
                truth = item.validated_placement
                for sq in range(64):
                    label = truth[sq]
                    per_class[label] += 1
                    source = "predicted"
                    if item.status == CORRECTED and truth[sq] != item.predicted_placement[sq]:
                        source = "corrected"
                    fields = [
                        item.game_id,
                        str(item.ply),
                        str(sq),
                        str(label),
                        repr(float(observation.occupancy[sq])),
                        repr(float(observation.color[sq])),
                    ]
                    fields += [repr(float(v)) for v in observation.types[sq]]
                    fields.append(source)
                    lines.append(",".join(fields))
            out = self.labeled_dir / "labeled.csv"
            out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
            return {
                "items": len(validated),
                "rows": 64 * len(validated),
                "per_class": per_class,
                "path": str(out),
            }

    # -- monitoring -----------------------------------------------------------------

    def monitor_status(self, config: MonitorConfig = MonitorConfig()) -> MonitorStatus:
        """Windowed accuracy over the most recently validated boards.

        The alert fires when windowed accuracy drops below the threshold;
        latency violations count window items whose recognition latency
        exceeded the budget. With nothing validated yet this isuneventful
        no-data, not an alert.
        """
        validated = self.validated_items()
        window_items = validated[-config.window:]
        if not window_items:
            return MonitorStatus(
                validated=0,
                window=config.window,
                accuracy=None,
                alert=False,
                latency_violations=0,
                accuracy_threshold=config.accuracy_threshold,
                latency_budget_s=config.latency_budget_s,
            )
        accuracy = sum(1 for item in window_items if item.correct) / len(window_items)
        violations = sum(
            1 for item in window_items if item.latency_s > config.latency_budget_s
        )
        return MonitorStatus(
            validated=len(validated),
            window=config.window,
            accuracy=accuracy,
            alert=accuracy < config.accuracy_threshold,
            latency_violations=violations,
            accuracy_threshold=config.accuracy_threshold,
            latency_budget_s=config.latency_budget_s,
        )
