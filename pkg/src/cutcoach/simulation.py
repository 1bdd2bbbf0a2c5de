"""Synthetic cutting behavior, session traces and golden replay.

run_behavior closes the loop: a kinematic cutter model advances along
the path, drifts, trembles, and steers back after it "perceives" a
corrective cue. Every run is a pure function of (path, configs, seed),
recorded as a newline-delimited trace that replay() can re-derive
record-for-record (the golden-replay determinism backbone).

The cutter model is kinematic, not biomechanical: it produces plausible
closed-loop traces, not child-motor realism.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass
from pathlib import Path as FsPath

from .feedback import Color, CueKind, FeedbackState, Phase, VisualFrame
from .geometry import LinePath, ScissorsPose, DeviationMeasure
from .pipeline import ConfigError, CuttingSession, EngineConfig, TickResult, config_hash
from .sensing import SensorReading, Severity, SeverityLevel, Side

TICK_MS = 20  # simulation step, matches the 50 Hz sensor sample rate
TRACE_FORMAT_VERSION = 1

_CORRECTIVE = (CueKind.UH_OH, CueKind.WOAH_THERE)


class ReplayError(RuntimeError):
    """Trace cannot be replayed (wrong version or tampered header)."""


@dataclass(frozen=True)
class CutterBehaviorModel:
    """Kinematic cutter: speed, bias, tremor, and cue-triggered steering.

    After a corrective cue the model starts steering back toward the line
    once the perceiving modality's reaction delay has passed; moderate
    cues are noticed via the screen and severe cues via audio unless
    response_modality pins one channel.
    """

    advance_speed: float = 40.0  # mm/s along the path
    drift_rate: float = 0.0  # mm/s lateral bias (signed, + = left)
    tremor_amplitude: float = 0.0  # mm
    tremor_frequency: float = 0.0  # Hz
    correction_gain: float = 0.0  # 1/s steering rate once reacting
    reaction_delay_visual: float = 250.0  # ms
    reaction_delay_audio: float = 600.0  # ms
    response_modality: str = "auto"  # auto | visual | audio
    seed: int = 0

    def __post_init__(self) -> None:
        for name in (
            "advance_speed",
            "tremor_amplitude",
            "tremor_frequency",
            "correction_gain",
            "reaction_delay_visual",
            "reaction_delay_audio",
        ):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.response_modality not in ("auto", "visual", "audio"):
            raise ConfigError("response_modality must be auto, visual or audio")

    def reaction_delay_for(self, cue: CueKind) -> float:
        if self.response_modality == "visual":
            return self.reaction_delay_visual
        if self.response_modality == "audio":
            return self.reaction_delay_audio
        # Field observation: learners answered the moderate tier after the
        # screen change and the severe tier after the spoken cue.
        if cue is CueKind.WOAH_THERE:
            return self.reaction_delay_audio
        return self.reaction_delay_visual


@dataclass(frozen=True)
class TraceRecord:
    """One tick of a recorded session, rich enough to replay and diff."""

    t: int
    pose: ScissorsPose
    measure: DeviationMeasure
    reading: SensorReading
    severity: Severity
    state: FeedbackState
    frame: VisualFrame
    cues: tuple[CueKind, ...]
    progress: float
    completed: bool

    @classmethod
    def from_tick(cls, tick: TickResult) -> "TraceRecord":
        return cls(
            t=tick.pose.timestamp,
            pose=tick.pose,
            measure=tick.measure,
            reading=tick.reading,
            severity=tick.severity,
            state=tick.state,
            frame=tick.frame,
            cues=tuple(c.kind for c in tick.cues),
            progress=tick.progress,
            completed=tick.completed,
        )

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "pose": {
                "x": self.pose.position[0],
                "y": self.pose.position[1],
                "heading": self.pose.heading,
            },
            "measure": {
                "offset": self.measure.lateral_offset,
                "heading_dev": self.measure.heading_deviation,
                "arc": self.measure.arc_position,
                "segment": self.measure.nearest_segment,
            },
            "reading": {
                "left_on_ink": self.reading.left_on_ink,
                "right_on_ink": self.reading.right_on_ink,
                "left_fault": self.reading.left_fault,
                "right_fault": self.reading.right_fault,
            },
            "severity": {
                "level": self.severity.level.name.lower(),
                "side": self.severity.side.value,
            },
            "state": {
                "phase": self.state.phase.value,
                "side": self.state.side.value,
                "entered_at": self.state.phase_entered_at,
                "last_cue_at": self.state.last_positive_cue_at,
            },
            "frame": {
                "color": self.frame.chameleon_color.value,
                "heading": self.frame.chameleon_heading,
                "tint": self.frame.side_tint.value,
                "dashed": self.frame.dashed_line_visible,
                "end_screen": self.frame.end_screen,
            },
            "cues": [k.value for k in self.cues],
            "progress": self.progress,
            "completed": self.completed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TraceRecord":
        return cls(
            t=d["t"],
            pose=ScissorsPose(
                position=(d["pose"]["x"], d["pose"]["y"]),
                heading=d["pose"]["heading"],
                timestamp=d["t"],
            ),
            measure=DeviationMeasure(
                lateral_offset=d["measure"]["offset"],
                heading_deviation=d["measure"]["heading_dev"],
                arc_position=d["measure"]["arc"],
                nearest_segment=d["measure"]["segment"],
            ),
            reading=SensorReading(
                timestamp=d["t"],
                left_on_ink=d["reading"]["left_on_ink"],
                right_on_ink=d["reading"]["right_on_ink"],
                left_fault=d["reading"]["left_fault"],
                right_fault=d["reading"]["right_fault"],
            ),
            severity=Severity(
                level=SeverityLevel[d["severity"]["level"].upper()],
                side=Side(d["severity"]["side"]),
            ),
            state=FeedbackState(
                phase=Phase(d["state"]["phase"]),
                side=Side(d["state"]["side"]),
                phase_entered_at=d["state"]["entered_at"],
                last_positive_cue_at=d["state"]["last_cue_at"],
            ),
            frame=VisualFrame(
                chameleon_color=Color(d["frame"]["color"]),
                chameleon_heading=d["frame"]["heading"],
                side_tint=Side(d["frame"]["tint"]),
                dashed_line_visible=d["frame"]["dashed"],
                end_screen=d["frame"]["end_screen"],
            ),
            cues=tuple(CueKind(k) for k in d["cues"]),
            progress=d["progress"],
            completed=d["completed"],
        )


@dataclass
class SessionTrace:
    """Self-contained session record: header plus per-tick records."""

    path: LinePath
    engine: EngineConfig
    behavior: CutterBehaviorModel | None
    seed: int
    records: list[TraceRecord]
    tick_ms: int = TICK_MS
    max_duration_ms: int = 120_000
    truncated: bool = False
    stored_hash: str | None = None  # as read from disk; None = freshly built

    def expected_hash(self) -> str:
        extra = {
            "behavior": asdict(self.behavior) if self.behavior else None,
            "seed": self.seed,
            "tick_ms": self.tick_ms,
            "max_duration_ms": self.max_duration_ms,
        }
        return config_hash(self.path, self.engine, extra=extra)

    def header_dict(self) -> dict:
        return {
            "format_version": TRACE_FORMAT_VERSION,
            "kind": "cutcoach-trace",
            "config_hash": self.stored_hash or self.expected_hash(),
            "seed": self.seed,
            "tick_ms": self.tick_ms,
            "max_duration_ms": self.max_duration_ms,
            "truncated": self.truncated,
            "path": self.path.to_dict(),
            "engine": self.engine.to_dict(),
            "behavior": asdict(self.behavior) if self.behavior else None,
        }

    def serialize(self) -> str:
        lines = [json.dumps(self.header_dict(), sort_keys=True, separators=(",", ":"))]
        lines += [
            json.dumps(r.to_dict(), sort_keys=True, separators=(",", ":"))
            for r in self.records
        ]
        return "\n".join(lines) + "\n"

    def save(self, destination: str | FsPath) -> None:
        FsPath(destination).write_text(self.serialize(), encoding="utf-8")

    @classmethod
    def deserialize(cls, text: str) -> "SessionTrace":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ReplayError("empty trace file")
        header = json.loads(lines[0])
        if header.get("kind") != "cutcoach-trace":
            raise ReplayError("not a trace file")
        if header.get("format_version") != TRACE_FORMAT_VERSION:
            raise ReplayError(
                f"unsupported trace format version {header.get('format_version')!r}"
            )
        behavior = header.get("behavior")
        return cls(
            path=LinePath.from_dict(header["path"]),
            engine=EngineConfig.from_dict(header["engine"]),
            behavior=CutterBehaviorModel(**behavior) if behavior else None,
            seed=header["seed"],
            records=[TraceRecord.from_dict(json.loads(line)) for line in lines[1:]],
            tick_ms=header["tick_ms"],
            max_duration_ms=header["max_duration_ms"],
            truncated=header["truncated"],
            stored_hash=header["config_hash"],
        )

    @classmethod
    def load(cls, source: str | FsPath) -> "SessionTrace":
        return cls.deserialize(FsPath(source).read_text(encoding="utf-8"))


def run_behavior(
    path: LinePath,
    model: CutterBehaviorModel,
    engine: EngineConfig,
    max_duration_ms: int = 120_000,
) -> SessionTrace:
    """Closed-loop synthetic session at TICK_MS resolution.

    A run that neither completes nor errors by max_duration_ms stops with
    the truncated flag set in the header.
    """
    rng = random.Random(model.seed)
    tremor_phase = rng.uniform(0.0, 2.0 * math.pi)
    session = CuttingSession(path, engine, seed=model.seed)

    records: list[TraceRecord] = []
    arc = 0.0
    offset = 0.0
    prev_eff: float | None = None
    pending_at: float | None = None
    correcting = False
    dt = TICK_MS / 1000.0
    completed = False

    for t in range(0, max_duration_ms + TICK_MS, TICK_MS):
        tremor = (
            model.tremor_amplitude
            * math.sin(2.0 * math.pi * model.tremor_frequency * (t / 1000.0) + tremor_phase)
            if model.tremor_amplitude > 0.0
            else 0.0
        )
        eff = offset + tremor
        base = path.point_at(arc)
        tangent = path.tangent_heading_at(arc)
        rad = math.radians(tangent)
        nx, ny = -math.sin(rad), math.cos(rad)
        lateral_velocity = 0.0 if prev_eff is None else (eff - prev_eff) / dt
        heading = tangent + math.degrees(math.atan2(lateral_velocity, model.advance_speed))
        pose = ScissorsPose(
            position=(base[0] + eff * nx, base[1] + eff * ny),
            heading=heading,
            timestamp=t,
        )

        tick = session.tick(pose)
        records.append(TraceRecord.from_tick(tick))
        if tick.completed:
            completed = True
            break

        for cue in tick.cues:
            if cue.kind in _CORRECTIVE:
                react_at = t + model.reaction_delay_for(cue.kind)
                pending_at = react_at if pending_at is None else min(pending_at, react_at)
            elif cue.kind is CueKind.STAY_ON_TRACK:
                # The learner eases off once the screen says they're back:
                # display hysteresis keeps steering active through the
                # sensors' blind band instead of parking at its edge.
                correcting = False
                pending_at = None
        if pending_at is not None and t >= pending_at:
            correcting = True
            pending_at = None

        steer = model.correction_gain * offset if correcting else 0.0
        offset += (model.drift_rate - steer) * dt
        arc += model.advance_speed * dt
        prev_eff = eff

    return SessionTrace(
        path=path,
        engine=engine,
        behavior=model,
        seed=model.seed,
        records=records,
        tick_ms=TICK_MS,
        max_duration_ms=max_duration_ms,
        truncated=not completed,
    )


def replay(trace: SessionTrace) -> SessionTrace:
    """Re-run sensing and feedback over the recorded poses.

    Refuses traces whose header hash does not match the header contents
    (someone edited the configs) or whose format version is unknown.
    Returns a trace with identical header and freshly computed records;
    golden verification is an equality check against the original.
    """
    if trace.stored_hash is not None and trace.stored_hash != trace.expected_hash():
        raise ReplayError(
            "config hash mismatch: header was modified after recording "
            f"(stored {trace.stored_hash[:12]}.., expected "
            f"{trace.expected_hash()[:12]}..)"
        )
    session = CuttingSession(trace.path, trace.engine, seed=trace.seed)
    new_records = [TraceRecord.from_tick(session.tick(r.pose)) for r in trace.records]
    return replace_records(trace, new_records)


def replace_records(trace: SessionTrace, records: list[TraceRecord]) -> SessionTrace:
    return SessionTrace(
        path=trace.path,
        engine=trace.engine,
        behavior=trace.behavior,
        seed=trace.seed,
        records=records,
        tick_ms=trace.tick_ms,
        max_duration_ms=trace.max_duration_ms,
        truncated=trace.truncated,
        stored_hash=trace.stored_hash,
    )


def traces_equal(a: SessionTrace, b: SessionTrace) -> tuple[bool, str | None]:
    """Record-for-record golden comparison; names the first difference."""
    if a.header_dict() != b.header_dict():
        return False, "headers differ"
    if len(a.records) != len(b.records):
        return False, f"record counts differ: {len(a.records)} vs {len(b.records)}"
    for i, (ra, rb) in enumerate(zip(a.records, b.records)):
        if ra.to_dict() != rb.to_dict():
            return False, f"record {i} (t={ra.t}) differs"
    return True, None
