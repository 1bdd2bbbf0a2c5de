"""Feedback state machine: severity in, frames and audio cues out.

Maps a severity stream onto what the learner sees and hears. Escalations
are immediate; de-escalations wait out the displayed phase's minimum
display duration (hysteresis against flicker). Cues are edge-triggered:
each phrase fires exactly on its transition, plus a periodic reassurance
while on track. The clock is injected, never read, so sessions replay
bit-identically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .sensing import ConfigError, Severity, SeverityLevel, Side


class ClockRegressionError(RuntimeError):
    """Raised when step() is called with a timestamp in the past."""


class Phase(enum.Enum):
    ON_TRACK = "on_track"
    MODERATE = "moderate"
    SEVERE = "severe"
    RECOVERING = "recovering"
    COMPLETED = "completed"


class Color(enum.Enum):
    GREEN = "green"
    ORANGE = "orange"
    RED = "red"


class CueKind(enum.Enum):
    KEEP_GOING = "keep_going"
    UH_OH = "uh_oh"
    WOAH_THERE = "woah_there"
    GETTING_BETTER = "getting_better"
    STAY_ON_TRACK = "stay_on_track"
    FANFARE = "fanfare"


# Spoken/captioned phrases, en-dash and all. The fanfare is music, not
# speech; its caption is a stage direction for the captions track.
CUE_TEXT = {
    CueKind.KEEP_GOING: "Good job – keep going!",
    CueKind.UH_OH: "Uh-oh!",
    CueKind.WOAH_THERE: "Woah there!",
    CueKind.GETTING_BETTER: "Getting better – keep going!",
    CueKind.STAY_ON_TRACK: "Good job – now stay on track!",
    CueKind.FANFARE: "(fanfare)",
}


@dataclass(frozen=True)
class AudioCue:
    kind: CueKind
    text: str

    @classmethod
    def of(cls, kind: CueKind) -> "AudioCue":
        return cls(kind=kind, text=CUE_TEXT[kind])


@dataclass(frozen=True)
class FeedbackConfig:
    """Cadence and hysteresis policy, all in milliseconds.

    The severe minimum display must not be shorter than the moderate one:
    field observation showed the short red screen was the one learners
    missed, so the config enforces the corrected ordering.
    """

    positive_cue_interval: float = 5000.0
    min_display_moderate: float = 800.0
    min_display_severe: float = 1500.0
    de_escalation_hold: float = 300.0

    def __post_init__(self) -> None:
        for name in (
            "positive_cue_interval",
            "min_display_moderate",
            "min_display_severe",
            "de_escalation_hold",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.min_display_severe < self.min_display_moderate:
            raise ConfigError(
                "min_display_severe must be >= min_display_moderate"
            )


@dataclass(frozen=True)
class FeedbackState:
    phase: Phase
    side: Side
    phase_entered_at: int  # ms
    last_positive_cue_at: int  # ms

    def __post_init__(self) -> None:
        in_neutral = self.phase in (Phase.ON_TRACK, Phase.COMPLETED)
        if (self.side is Side.NONE) != in_neutral:
            raise ValueError("side must be NONE exactly in ON_TRACK/COMPLETED")

    @classmethod
    def initial(cls, now: int = 0) -> "FeedbackState":
        return cls(
            phase=Phase.ON_TRACK,
            side=Side.NONE,
            phase_entered_at=now,
            last_positive_cue_at=now,
        )


@dataclass(frozen=True)
class VisualFrame:
    """What the screen shows for one tick."""

    chameleon_color: Color
    chameleon_heading: float  # degrees, mirrors the scissors heading
    side_tint: Side
    dashed_line_visible: bool
    end_screen: bool


_PHASE_COLOR = {
    Phase.ON_TRACK: Color.GREEN,
    Phase.MODERATE: Color.ORANGE,
    Phase.RECOVERING: Color.ORANGE,
    Phase.SEVERE: Color.RED,
    Phase.COMPLETED: Color.GREEN,
}


def frame_for(state: FeedbackState, heading_deg: float = 0.0) -> VisualFrame:
    done = state.phase is Phase.COMPLETED
    return VisualFrame(
        chameleon_color=_PHASE_COLOR[state.phase],
        chameleon_heading=heading_deg,
        side_tint=state.side,
        dashed_line_visible=not done,
        end_screen=done,
    )


def step(
    state: FeedbackState,
    severity: Severity,
    completed: bool,
    now: int,
    config: FeedbackConfig,
    heading_deg: float = 0.0,
) -> tuple[FeedbackState, VisualFrame, list[AudioCue]]:
    """Advance the machine by one severity observation.

    Returns the new state, the frame to display, and the cues to play.
    Stepping a completed session is a no-op, not an error.
    """
    if state.phase is Phase.COMPLETED:
        return state, frame_for(state, heading_deg), []
    if now < state.phase_entered_at or now < state.last_positive_cue_at:
        raise ClockRegressionError(
            f"clock went backwards: now={now} < state at "
            f"{max(state.phase_entered_at, state.last_positive_cue_at)}"
        )

    if completed:
        new = FeedbackState(
            phase=Phase.COMPLETED,
            side=Side.NONE,
            phase_entered_at=now,
            last_positive_cue_at=state.last_positive_cue_at,
        )
        return new, frame_for(new, heading_deg), [AudioCue.of(CueKind.FANFARE)]

    phase = state.phase
    level = severity.level
    elapsed = now - state.phase_entered_at
    cues: list[AudioCue] = []
    new = state

    def enter(next_phase: Phase, side: Side, cue: CueKind | None) -> None:
        nonlocal new
        positive = now if cue in (CueKind.STAY_ON_TRACK,) else state.last_positive_cue_at
        new = FeedbackState(
            phase=next_phase,
            side=side,
            phase_entered_at=now,
            last_positive_cue_at=positive,
        )
        if cue is not None:
            cues.append(AudioCue.of(cue))

    if phase is Phase.ON_TRACK:
        if level is SeverityLevel.SEVERE:
            enter(Phase.SEVERE, severity.side, CueKind.WOAH_THERE)
        elif level is SeverityLevel.MODERATE:
            enter(Phase.MODERATE, severity.side, CueKind.UH_OH)
        elif now - state.last_positive_cue_at >= config.positive_cue_interval:
            cues.append(AudioCue.of(CueKind.KEEP_GOING))
            new = replace(state, last_positive_cue_at=now)

    elif phase is Phase.MODERATE:
        if level is SeverityLevel.SEVERE:
            enter(Phase.SEVERE, severity.side, CueKind.WOAH_THERE)
        elif level is SeverityLevel.MODERATE:
            if severity.side is not state.side:
                new = replace(state, side=severity.side)
        elif elapsed >= max(config.min_display_moderate, config.de_escalation_hold):
            enter(Phase.ON_TRACK, Side.NONE, CueKind.STAY_ON_TRACK)

    elif phase is Phase.SEVERE:
        if level is SeverityLevel.SEVERE:
            if severity.side is not state.side:
                new = replace(state, side=severity.side)
        elif level is SeverityLevel.MODERATE:
            if elapsed >= config.min_display_severe:
                enter(Phase.RECOVERING, severity.side, CueKind.GETTING_BETTER)
        elif elapsed >= max(config.min_display_severe, config.de_escalation_hold):
            # A straight severe-to-clear jump passes through the recovery
            # notion in one step; only the final phrase plays to avoid
            # stacking cues.
            enter(Phase.ON_TRACK, Side.NONE, CueKind.STAY_ON_TRACK)

    elif phase is Phase.RECOVERING:
        if level is SeverityLevel.SEVERE:
            enter(Phase.SEVERE, severity.side, CueKind.WOAH_THERE)
        elif level is SeverityLevel.MODERATE:
            if severity.side is not state.side:
                new = replace(state, side=severity.side)
        elif elapsed >= max(config.min_display_moderate, config.de_escalation_hold):
            enter(Phase.ON_TRACK, Side.NONE, CueKind.STAY_ON_TRACK)

    return new, frame_for(new, heading_deg), cues


@dataclass(frozen=True)
class FeedbackEvent:
    """One tick of a folded severity stream."""

    timestamp: int
    state: FeedbackState
    frame: VisualFrame
    cues: tuple[AudioCue, ...]


def run_session(
    stream: Iterable[tuple[int, Severity, bool]],
    config: FeedbackConfig,
    initial: FeedbackState | None = None,
) -> list[FeedbackEvent]:
    """Left-fold step() over (timestamp, severity, completed) samples.

    Timestamps must strictly increase; the offending timestamp is named
    otherwise. Output is a deterministic function of the input stream.
    """
    state = initial if initial is not None else FeedbackState.initial()
    events: list[FeedbackEvent] = []
    last_ts: int | None = None
    for ts, severity, completed in stream:
        if last_ts is not None and ts <= last_ts:
            raise ValueError(
                f"timestamps must strictly increase: {ts} after {last_ts}"
            )
        try:
            state, frame, cues = step(state, severity, completed, ts, config)
        except ClockRegressionError as exc:
            raise ClockRegressionError(f"at timestamp {ts}: {exc}") from exc
        events.append(
            FeedbackEvent(timestamp=ts, state=state, frame=frame, cues=tuple(cues))
        )
        last_ts = ts
    return events
