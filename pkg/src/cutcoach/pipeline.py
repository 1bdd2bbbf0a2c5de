"""Engine composition: pose in, feedback out.

CuttingSession wires the geometry, sensing and feedback modules into the
per-tick pipeline shared by the headless simulator, the replay verifier
and the interactive session service. EngineConfig bundles every knob the
pipeline needs and (de)serializes the config file format.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .feedback import (
    AudioCue,
    FeedbackConfig,
    FeedbackState,
    Phase,
    VisualFrame,
    step,
)
from .geometry import (
    DeviationMeasure,
    LinePath,
    ScissorsPose,
    is_complete,
    nearest_point,
    progress,
)
from .sensing import (
    ConfigError,
    DwellConfig,
    FaultInjector,
    FaultModel,
    SensorMountConfig,
    SensorReading,
    Severity,
    SeverityEstimator,
    SeverityThresholds,
    oracle_severity,
    sample_sensors,
)

MODES = ("sensor", "oracle")


def _section(cls, data: dict, name: str):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"config section {name!r} must be an object")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(
            f"config section {name!r} has unknown field(s): {sorted(unknown)}"
        )
    return cls(**data)


@dataclass(frozen=True)
class EngineConfig:
    """Everything the per-tick pipeline needs, minus the path itself."""

    mount: SensorMountConfig = SensorMountConfig()
    thresholds: SeverityThresholds = SeverityThresholds()
    feedback: FeedbackConfig = FeedbackConfig()
    dwell: DwellConfig = DwellConfig()
    faults: FaultModel | None = None
    mode: str = "sensor"

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "mount": asdict(self.mount),
            "thresholds": asdict(self.thresholds),
            "feedback": asdict(self.feedback),
            "dwell": asdict(self.dwell),
            "faults": asdict(self.faults) if self.faults else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {"mode", "mount", "thresholds", "feedback", "dwell", "faults"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"config has unknown field(s): {sorted(unknown)}")
        return cls(
            mount=_section(SensorMountConfig, data.get("mount"), "mount"),
            thresholds=_section(SeverityThresholds, data.get("thresholds"), "thresholds"),
            feedback=_section(FeedbackConfig, data.get("feedback"), "feedback"),
            dwell=_section(DwellConfig, data.get("dwell"), "dwell"),
            faults=(
                _section(FaultModel, data["faults"], "faults")
                if data.get("faults")
                else None
            ),
            mode=data.get("mode", "sensor"),
        )


def load_config(source: str | Path) -> EngineConfig:
    text = Path(source).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {source}: invalid JSON ({exc})") from exc
    return EngineConfig.from_dict(data)


def save_config(config: EngineConfig, destination: str | Path) -> None:
    Path(destination).write_text(
        json.dumps(config.to_dict(), indent=2) + "\n", encoding="utf-8"
    )


def config_hash(path: LinePath, config: EngineConfig, extra: dict | None = None) -> str:
    """Stable digest of everything that determines a session's outputs."""
    blob = {
        "path": path.to_dict(),
        "engine": config.to_dict(),
        "extra": extra or {},
    }
    canonical = json.dumps(blob, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class TickResult:
    """Everything one pose tick produced."""

    pose: ScissorsPose
    measure: DeviationMeasure
    reading: SensorReading
    severity: Severity
    state: FeedbackState
    frame: VisualFrame
    cues: tuple[AudioCue, ...]
    progress: float
    completed: bool


class CuttingSession:
    """One learner's run: feed poses in timestamp order, get feedback out.

    Single-owner and strictly sequential; the severity source (sensor
    estimate vs pose oracle) comes from config.mode. With a fault model
    configured, sensor faults are injected deterministically from `seed`.
    """

    def __init__(self, path: LinePath, config: EngineConfig, seed: int = 0) -> None:
        self.path = path
        self.config = config
        self._estimator = SeverityEstimator(config.mount, config.dwell)
        self._injector = (
            FaultInjector(config.faults, seed) if config.faults is not None else None
        )
        self.state = FeedbackState.initial()
        self._last_ts: int | None = None

    @property
    def completed(self) -> bool:
        return self.state.phase is Phase.COMPLETED

    def tick(self, pose: ScissorsPose) -> TickResult:
        if self._last_ts is not None and pose.timestamp <= self._last_ts:
            raise ValueError(
                f"pose timestamps must strictly increase: {pose.timestamp} "
                f"after {self._last_ts}"
            )
        self._last_ts = pose.timestamp

        measure = nearest_point(pose, self.path)
        reading = sample_sensors(pose, self.path, self.config.mount)
        if self._injector is not None:
            reading = self._injector.apply(reading)
        if self.config.mode == "sensor":
            severity = self._estimator.push(reading)
        else:
            severity = oracle_severity(measure, self.config.thresholds)
        done = is_complete(measure, self.path)
        self.state, frame, cues = step(
            self.state,
            severity,
            done,
            pose.timestamp,
            self.config.feedback,
            heading_deg=pose.heading,
        )
        return TickResult(
            pose=pose,
            measure=measure,
            reading=reading,
            severity=severity,
            state=self.state,
            frame=frame,
            cues=tuple(cues),
            progress=progress(measure, self.path),
            completed=self.completed,
        )
