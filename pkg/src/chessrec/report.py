"""Per-algorithm summary table over benchmark measurements.

Domain-free rows (sd, esd) render board accuracy with the median square
accuracy in parentheses, e.g. ``0.00% (71.88%)``; the machine-readable
CSV form keeps full precision and parses back losslessly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .recognize import ALGORITHM_ORDER
from .stats import descriptive

__all__ = ["ReportRow", "build_report", "render_text", "write_report_csv", "read_report_csv"]

REPORT_HEADER = (
    "algorithm,accuracy,median_square_accuracy,median_latency_s,median_energy_j,"
    "median_occ_calls,median_color_calls,median_type_calls"
)

_PARENTHETICAL = ("sd", "esd")  # per-square classifiers: board accuracy alone is opaque


@dataclass(frozen=True)
class ReportRow:
    algorithm: str
    accuracy: float
    median_square_accuracy: float
    median_latency_s: float
    median_energy_j: float
    median_occ_calls: float
    median_color_calls: float
    median_type_calls: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError("accuracy must lie in [0, 1]")


def _algorithm_sort_key(name: str):
    try:
        return (0, ALGORITHM_ORDER.index(name))
    except ValueError:
        return (1, name)


def build_report(measurements) -> list:
    """Aggregate measurements into one row per algorithm."""
    if not measurements:
        raise ValueError("no measurements to report")
    by_algorithm = {}
    for m in measurements:
        by_algorithm.setdefault(m.algorithm, []).append(m)
    rows = []
    for name in sorted(by_algorithm, key=_algorithm_sort_key):
        ms = by_algorithm[name]
        rows.append(
            ReportRow(
                algorithm=name,
                accuracy=sum(1 for m in ms if m.correct) / len(ms),
                median_square_accuracy=descriptive([m.square_accuracy for m in ms])["median"],
                median_latency_s=descriptive([m.latency_s for m in ms])["median"],
                median_energy_j=descriptive([m.energy_j for m in ms])["median"],
                median_occ_calls=descriptive([m.invocations.occupancy for m in ms])["median"],
                median_color_calls=descriptive([m.invocations.color for m in ms])["median"],
                median_type_calls=descriptive([m.invocations.type for m in ms])["median"],
            )
        )
    return rows


def _accuracy_cell(row: ReportRow) -> str:
    cell = f"{row.accuracy * 100:.2f}%"
    if row.algorithm in _PARENTHETICAL:
        cell += f" ({row.median_square_accuracy * 100:.2f}%)"
    return cell


def render_text(rows: Sequence[ReportRow]) -> str:
    """Fixed-width table mirroring the measurement-overview layout."""
    header = (
        "Algorithm",
        "Accuracy",
        "Median latency (s)",
        "Median energy (J)",
        "Median calls (occ/col/type)",
    )
    body = [
        (
            row.algorithm,
            _accuracy_cell(row),
            f"{row.median_latency_s:.3f}",
            f"{row.median_energy_j:.3f}",
            f"{row.median_occ_calls:g}/{row.median_color_calls:g}/{row.median_type_calls:g}",
        )
        for row in rows
    ]
    widths = [max(len(h), *(len(r[i]) for r in body)) for i, h in enumerate(header)]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for r in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def write_report_csv(rows: Sequence[ReportRow], path) -> None:
    lines = [REPORT_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                (
                    r.algorithm,
                    repr(r.accuracy),
                    repr(r.median_square_accuracy),
                    repr(r.median_latency_s),
                    repr(r.median_energy_j),
                    repr(r.median_occ_calls),
                    repr(r.median_color_calls),
                    repr(r.median_type_calls),
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_report_csv(path) -> list:
    lines = [l for l in Path(path).read_text(encoding="utf-8").splitlines() if l.strip()]
    if not lines or lines[0] != REPORT_HEADER:
        raise ValueError(f"report file must start with header {REPORT_HEADER!r}")
    rows = []
    for line in lines[1:]:
        f = line.split(",")
        rows.append(
            ReportRow(
                algorithm=f[0],
                accuracy=float(f[1]),
                median_square_accuracy=float(f[2]),
                median_latency_s=float(f[3]),
                median_energy_j=float(f[4]),
                median_occ_calls=float(f[5]),
                median_color_calls=float(f[6]),
                median_type_calls=float(f[7]),
            )
        )
    return rows
