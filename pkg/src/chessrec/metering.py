"""Latency and energy measurement with the warm-up / batch / cool-down
benchmark protocol.

Latency is a monotonic-clock window around exactly the recognition call.
Energy comes from a pluggable meter: a constant-power synthetic source,
a power-trace file integrated over the call's wall-clock window, or a
platform energy-counter file read before and after. Outliers are kept;
no filtering happens here.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .recognize import InvocationCounts, Prediction, RecognizerConfig, make_recognizer

__all__ = [
    "PowerTrace",
    "PartialCoverageError",
    "MeterError",
    "InsufficientDataError",
    "EnergyMeter",
    "SyntheticConstantMeter",
    "TraceFileMeter",
    "RaplFileMeter",
    "BenchmarkPlan",
    "Measurement",
    "time_call",
    "integrate_energy",
    "run_benchmark",
    "write_measurements",
    "read_measurements",
    "MEASUREMENT_HEADER",
]

TRACE_HEADER = "timestamp,power_watts"
MEASUREMENT_HEADER = (
    "algorithm,sample,latency_s,energy_j,correct,square_accuracy,"
    "occ_calls,color_calls,type_calls"
)


class PartialCoverageError(ValueError):
    """The trace does not span the requested window."""

    def __init__(self, message: str, covered_fraction: float):
        super().__init__(f"{message} (covered fraction {covered_fraction:.3f})")
        self.covered_fraction = covered_fraction


class MeterError(RuntimeError):
    """A meter failed mid-benchmark; partial results are attached."""

    def __init__(self, message: str, partial_results=None):
        super().__init__(message)
        self.partial_results = partial_results or []


class InsufficientDataError(ValueError):
    """The dataset has fewer plies than the benchmark needs."""


@dataclass(frozen=True)
class PowerTrace:
    """Time-ordered (seconds-since-epoch, watts) samples."""

    times: tuple
    watts: tuple

    def __post_init__(self) -> None:
        if len(self.times) != len(self.watts):
            raise ValueError("times and watts must have equal length")
        if len(self.times) < 2:
            raise ValueError("a trace needs at least two samples")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("timestamps must be strictly increasing")
        if any(p < 0 for p in self.watts):
            raise ValueError("power must be non-negative")

    @classmethod
    def from_pairs(cls, pairs) -> "PowerTrace":
        times, watts = zip(*pairs)
        return cls(times=tuple(float(t) for t in times), watts=tuple(float(p) for p in watts))

    @classmethod
    def from_csv(cls, path) -> "PowerTrace":
        text = Path(path).read_text(encoding="utf-8")
        lines = text.splitlines()
        if not lines or lines[0].strip() != TRACE_HEADER:
            raise ValueError(f"trace file must start with header {TRACE_HEADER!r}")
        pairs = []
        for line in lines[1:]:
            if not line.strip():
                continue
            t, p = line.split(",")
            pairs.append((float(t), float(p)))
        return cls.from_pairs(pairs)

    def to_csv(self, path) -> None:
        rows = [TRACE_HEADER]
        rows += [f"{t!r},{p!r}" for t, p in zip(self.times, self.watts)]
        Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8", newline="\n")


def _interp_power(trace: PowerTrace, t: float) -> float:
    return float(np.interp(t, trace.times, trace.watts))


def integrate_energy(trace: PowerTrace, start: float, stop: float) -> float:
    """Trapezoidal integral of power over [start, stop], joules.

    The window endpoints are linearly interpolated between trace samples;
    a window outside the trace raises PartialCoverageError with the
    covered fraction.
    """
    if start >= stop:
        raise ValueError("start must precede stop")
    t0, t1 = trace.times[0], trace.times[-1]
    if start < t0 or stop > t1:
        overlap = max(0.0, min(stop, t1) - max(start, t0))
        raise PartialCoverageError(
            "window extends outside the power trace",
            covered_fraction=overlap / (stop - start),
        )
    times = [start]
    watts = [_interp_power(trace, start)]
    for t, p in zip(trace.times, trace.watts):
        if start < t < stop:
            times.append(t)
            watts.append(p)
    times.append(stop)
    watts.append(_interp_power(trace, stop))
    total = 0.0
    for i in range(len(times) - 1):
        total += 0.5 * (watts[i] + watts[i + 1]) * (times[i + 1] - times[i])
    return total


def time_call(work: Callable[[], object]) -> tuple:
    """Run ``work`` and return (result, latency seconds) from a monotonic clock."""
    t0 = time.perf_counter()
    result = work()
    return result, time.perf_counter() - t0


class EnergyMeter:
    """Interface: ``begin()`` returns a token, ``end(token, latency_s)`` joules."""

    def begin(self):
        raise NotImplementedError

    def end(self, token, latency_s: float) -> float:
        raise NotImplementedError


class SyntheticConstantMeter(EnergyMeter):
    """Constant-power source: energy is exactly watts x latency."""

    def __init__(self, watts: float):
        if watts < 0:
            raise ValueError("watts must be non-negative")
        self.watts = watts

    def begin(self):
        return None

    def end(self, token, latency_s: float) -> float:
        return self.watts * latency_s


class TraceFileMeter(EnergyMeter):
    """Integrates a recorded machine-level power trace over the call window."""

    def __init__(self, trace: PowerTrace):
        self.trace = trace

    @classmethod
    def from_csv(cls, path) -> "TraceFileMeter":
        return cls(PowerTrace.from_csv(path))

    def begin(self):
        return time.time()

    def end(self, token, latency_s: float) -> float:
        stop = time.time()
        if stop <= token:
            stop = token + max(latency_s, 1e-9)
        return integrate_energy(self.trace, token, stop)


class RaplFileMeter(EnergyMeter):
    """Reads a platform cumulative energy counter file (microjoules)."""

    def __init__(self, path, max_range_uj: Optional[int] = None):
        self.path = Path(path)
        self.max_range_uj = max_range_uj

    def _read(self) -> int:
        return int(self.path.read_text().strip())

    def begin(self):
        return self._read()

    def end(self, token, latency_s: float) -> float:
        value = self._read()
        delta = value - token
        if delta < 0:
            if self.max_range_uj is None:
                raise MeterError("energy counter decreased and no wrap range is known")
            delta += self.max_range_uj
        return delta / 1e6


@dataclass(frozen=True)
class BenchmarkPlan:
    """Warm-up, batch, and cool-down durations are in seconds; the batch
    and cool-down defaults scale down the measurement protocol's 15-minute
    batches with 4-minute pauses to desk size."""

    warmup_duration: float = 1.0
    batch_duration: float = 60.0
    cooldown_duration: float = 10.0
    samples_target: int = 2000
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.warmup_duration, self.batch_duration, self.cooldown_duration) < 0:
            raise ValueError("durations must be non-negative")
        if self.samples_target < 1:
            raise ValueError("samples_target must be >= 1")


@dataclass(frozen=True)
class Measurement:
    algorithm: str
    sample: int
    latency_s: float
    energy_j: float
    correct: bool
    square_accuracy: float
    invocations: InvocationCounts

    def __post_init__(self) -> None:
        if self.latency_s <= 0:
            raise ValueError("latency must be positive")
        if self.energy_j < 0:
            raise ValueError("energy must be non-negative")


def _flatten(dataset) -> list:
    samples = []
    for record in dataset:
        state = record.initial_state
        for ply in record.plies:
            samples.append((state, ply.observation, ply.state_after))
            state = ply.state_after
    return samples


def run_benchmark(
    plan: BenchmarkPlan,
    algorithms: Sequence[RecognizerConfig],
    dataset,
    meter: EnergyMeter,
    sleep: Callable[[float], None] = time.sleep,
) -> list:
    """Measure every algorithm on the same sample sequence.

    Warm-up recognitions are untimed; timed work happens in batches with a
    cool-down pause between them, algorithms interleaved round-robin inside
    each batch so thermal drift hits all of them alike. Every sample yields
    one Measurement per algorithm; outliers are kept.
    """
    samples = _flatten(dataset)
    if len(samples) < plan.samples_target:
        raise InsufficientDataError(
            f"dataset supplies {len(samples)} plies, need {plan.samples_target}"
        )
    rng = np.random.default_rng(plan.seed)
    order = rng.permutation(len(samples))[: plan.samples_target]
    recognizers = [(config.name, make_recognizer(config)) for config in algorithms]

    if plan.warmup_duration > 0:
        deadline = time.perf_counter() + plan.warmup_duration
        i = 0
        while time.perf_counter() < deadline:
            prev, obs, _ = samples[order[i % len(order)]]
            for _, recognize in recognizers:
                recognize(prev, obs)
            i += 1

    results = []
    batch_started = time.perf_counter()
    for sample_index in order:
        if (
            plan.batch_duration > 0
            and time.perf_counter() - batch_started > plan.batch_duration
        ):
            if plan.cooldown_duration > 0:
                sleep(plan.cooldown_duration)
            batch_started = time.perf_counter()
        prev, obs, truth = samples[sample_index]
        for name, recognize in recognizers:
            try:
                token = meter.begin()
                prediction, latency = time_call(lambda: recognize(prev, obs))
                energy = meter.end(token, latency)
            except (MeterError, OSError, ValueError) as exc:
                raise MeterError(f"meter failed: {exc}", partial_results=results) from exc
            matches = sum(
                1
                for a, b in zip(prediction.predicted_placement, truth.board)
                if a == b
            )
            results.append(
                Measurement(
                    algorithm=name,
                    sample=int(sample_index),
                    latency_s=latency,
                    energy_j=energy,
                    correct=matches == 64,
                    square_accuracy=matches / 64.0,
                    invocations=prediction.invocations,
                )
            )
    return results


def write_measurements(measurements: Sequence[Measurement], path) -> None:
    lines = [MEASUREMENT_HEADER]
    for m in measurements:
        lines.append(
            ",".join(
                (
                    m.algorithm,
                    str(m.sample),
                    repr(m.latency_s),
                    repr(m.energy_j),
                    "1" if m.correct else "0",
                    repr(m.square_accuracy),
                    str(m.invocations.occupancy),
                    str(m.invocations.color),
                    str(m.invocations.type),
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_measurements(path) -> list:
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != MEASUREMENT_HEADER:
        raise ValueError(f"measurements file must start with header {MEASUREMENT_HEADER!r}")
    out = []
    for line in lines[1:]:
        fields = line.split(",")
        if len(fields) != 9:
            raise ValueError(f"malformed measurement row: {line!r}")
        out.append(
            Measurement(
                algorithm=fields[0],
                sample=int(fields[1]),
                latency_s=float(fields[2]),
                energy_j=float(fields[3]),
                correct=fields[4] == "1",
                square_accuracy=float(fields[5]),
                invocations=InvocationCounts(
                    occupancy=int(fields[6]), color=int(fields[7]), type=int(fields[8])
                ),
            )
        )
    return out
