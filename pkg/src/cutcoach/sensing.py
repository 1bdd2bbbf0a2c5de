"""Dual line-sensor simulation and severity estimation.

Two binary reflectance sensors straddle the printed line, mounted ahead
of the blade pivot. A centered tool reads both sensors clear; ink under
one sensor means the cut point has drifted toward the opposite side.

Severity comes from two independent routes that the tests play against
each other:

  * estimate_severity: what the real device could know, computed from the
    binary reading history alone (contact dwell plus an ink-seen-then-lost
    escape inference).
  * oracle_severity: pose-space ground truth from the deviation measure,
    used for testing and as an alternative feedback source.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .geometry import DeviationMeasure, LinePath, ScissorsPose, distance_to_path


class ConfigError(ValueError):
    """Raised for out-of-range or inconsistent configuration values."""


class SeverityLevel(enum.IntEnum):
    """Deviation tier; integer order supports 'got worse/better' checks."""

    ON_TRACK = 0
    MODERATE = 1
    SEVERE = 2


class Side(enum.Enum):
    """Which way the cut point drifted (NONE only when on track)."""

    LEFT = "left"
    RIGHT = "right"
    NONE = "none"


@dataclass(frozen=True)
class Severity:
    level: SeverityLevel
    side: Side

    def __post_init__(self) -> None:
        if (self.side is Side.NONE) != (self.level is SeverityLevel.ON_TRACK):
            raise ValueError("side must be NONE exactly when level is ON_TRACK")


ON_TRACK = Severity(SeverityLevel.ON_TRACK, Side.NONE)


@dataclass(frozen=True)
class SensorMountConfig:
    """Physical layout of the sensor pair relative to the cut point.

    Defaults keep a centered 8-10 mm line well clear of both 3 mm spots,
    so one-sensor contact always implies meaningful drift.
    """

    sensor_spacing: float = 24.0  # mm center-to-center, straddling the cut point
    sensor_spot_diameter: float = 3.0  # mm sensing footprint
    forward_offset: float = 15.0  # mm ahead of the blade pivot along heading
    sample_rate: float = 50.0  # Hz

    def __post_init__(self) -> None:
        if self.sensor_spacing <= 0:
            raise ConfigError("sensor_spacing must be positive")
        if self.sensor_spot_diameter <= 0:
            raise ConfigError("sensor_spot_diameter must be positive")
        if self.forward_offset < 0:
            raise ConfigError("forward_offset must be non-negative")
        if self.sample_rate <= 0:
            raise ConfigError("sample_rate must be positive")


@dataclass(frozen=True)
class SensorReading:
    """One timestamped sample of both channels.

    A faulted channel's on_ink value is undefined; estimators must treat
    it as clear and surface the fault flag to callers.
    """

    timestamp: int  # ms
    left_on_ink: bool
    right_on_ink: bool
    left_fault: bool = False
    right_fault: bool = False


def sensor_positions(
    pose: ScissorsPose, mount: SensorMountConfig
) -> tuple[tuple[float, float], tuple[float, float]]:
    """World positions (left, right) of the two sensor spots for a pose."""
    h = math.radians(pose.heading)
    ux, uy = math.cos(h), math.sin(h)
    nx, ny = -uy, ux  # left normal
    fx = pose.position[0] + mount.forward_offset * ux
    fy = pose.position[1] + mount.forward_offset * uy
    half = mount.sensor_spacing / 2.0
    left = (fx + half * nx, fy + half * ny)
    right = (fx - half * nx, fy - half * ny)
    return left, right


def spot_overlap_fraction(center, path: LinePath, spot_radius: float) -> float:
    """Fraction of a circular spot covered by the inked stripe.

    The stripe is the polyline dilated by ink_width/2. Locally the near
    stripe edge is treated as a straight boundary (exact for a straight
    stripe wider than the spot; an approximation within a spot radius of
    corners and endpoints), giving the circular-segment area formula.
    """
    s = distance_to_path(center, path) - path.ink_width / 2.0
    r = spot_radius
    if s <= -r:
        return 1.0
    if s >= r:
        return 0.0
    return (r * r * math.acos(s / r) - s * math.sqrt(r * r - s * s)) / (
        math.pi * r * r
    )


def sample_sensors(
    pose: ScissorsPose, path: LinePath, mount: SensorMountConfig
) -> SensorReading:
    """Noise-free sensor sample: a channel fires when at least half of its
    spot sits over ink. Fault flags are clear; fault injection is a
    separate wrapper."""
    if mount.sensor_spacing <= path.ink_width:
        raise ConfigError(
            f"sensor_spacing {mount.sensor_spacing:g} mm must exceed the "
            f"{path.ink_width:g} mm ink width so the sensors straddle the line"
        )
    left, right = sensor_positions(pose, mount)
    r = mount.sensor_spot_diameter / 2.0
    return SensorReading(
        timestamp=pose.timestamp,
        left_on_ink=spot_overlap_fraction(left, path, r) >= 0.5,
        right_on_ink=spot_overlap_fraction(right, path, r) >= 0.5,
    )


# ---------------------------------------------------------------------------
# Fault injection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FaultModel:
    """Per-sample fault probabilities with an optional stuck-at dwell."""

    left_fault_prob: float = 0.0
    right_fault_prob: float = 0.0
    dwell_ms: float = 0.0

    def __post_init__(self) -> None:
        for name in ("left_fault_prob", "right_fault_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {p!r}")
        if self.dwell_ms < 0:
            raise ConfigError("dwell_ms must be non-negative")

    @classmethod
    def both(cls, prob: float, dwell_ms: float = 0.0) -> "FaultModel":
        return cls(left_fault_prob=prob, right_fault_prob=prob, dwell_ms=dwell_ms)


class FaultInjector:
    """Deterministic, seeded fault overlay over a reading stream.

    While a channel is inside a stuck-at dwell window its flag stays set
    and no new draws happen for it; output is a pure function of
    (reading stream, seed).
    """

    def __init__(self, model: FaultModel, seed: int) -> None:
        self.model = model
        self._rng = random.Random(seed)
        self._until = {"left": -math.inf, "right": -math.inf}

    def _channel_fault(self, name: str, prob: float, timestamp: int) -> bool:
        if timestamp <= self._until[name]:
            return True
        if self._rng.random() < prob:
            self._until[name] = timestamp + self.model.dwell_ms
            return True
        return False

    def apply(self, reading: SensorReading) -> SensorReading:
        lf = self._channel_fault("left", self.model.left_fault_prob, reading.timestamp)
        rf = self._channel_fault(
            "right", self.model.right_fault_prob, reading.timestamp
        )
        return replace(
            reading,
            left_fault=reading.left_fault or lf,
            right_fault=reading.right_fault or rf,
        )


def inject_faults(
    readings: Iterable[SensorReading], model: FaultModel, seed: int
) -> list[SensorReading]:
    injector = FaultInjector(model, seed)
    return [injector.apply(r) for r in readings]


# ---------------------------------------------------------------------------
# Severity from sensor history
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DwellConfig:
    """Timing knobs for the reading-history classifier.

    escalation_dwell_ms: continuous one-sensor contact at least this long
        promotes moderate to severe.
    lost_line_grace_ms: after an escalated contact clears, how long the
        line counts as escaped (severe) before quiet is read as recovery.
    """

    escalation_dwell_ms: float = 400.0
    lost_line_grace_ms: float = 800.0

    def __post_init__(self) -> None:
        if self.escalation_dwell_ms <= 0:
            raise ConfigError("escalation_dwell_ms must be positive")
        if self.lost_line_grace_ms <= 0:
            raise ConfigError("lost_line_grace_ms must be positive")


# Contact on a channel means the cut point drifted toward the OTHER side.
_CONTACT_SIDE = {"left": Side.RIGHT, "right": Side.LEFT}


class SeverityEstimator:
    """Incremental reading-history classifier.

    Contact rules: an effective sensor on ink is moderate; the same
    contact held for the escalation dwell is severe.

    Loss-of-line rule: two binary straddling sensors cannot observe which
    edge the line left by, so exit direction is inferred from how the
    contact ended. A short (still moderate) contact that clears is read
    as re-centering. A contact that had already escalated and then clears
    is read as ink seen then lost without re-centering: the line escaped
    past the sensor, which stays severe on the same side for the lost-line
    grace window (re-contact restarts contact rules; quiet past the
    window is read as recovery).

    Faulted channels count as clear for classification and never trigger
    the loss inference; callers see the fault flags on the readings.

    estimate_severity() folds this class over a history, so a fresh fold
    and an incremental feed agree by construction.
    """

    def __init__(
        self, mount: SensorMountConfig, dwell: DwellConfig | None = None
    ) -> None:
        self.mount = mount
        self.dwell = dwell if dwell is not None else DwellConfig()
        self._run_start: dict[str, int | None] = {"left": None, "right": None}
        self._active: str | None = None  # channel of the current contact
        self._active_escalated = False
        self._lost_side: Side | None = None
        self._lost_at: int | None = None

    def push(self, reading: SensorReading) -> Severity:
        ts = reading.timestamp
        on = {
            "left": reading.left_on_ink and not reading.left_fault,
            "right": reading.right_on_ink and not reading.right_fault,
        }
        fault = {"left": reading.left_fault, "right": reading.right_fault}
        for name in ("left", "right"):
            if on[name]:
                if self._run_start[name] is None:
                    self._run_start[name] = ts
            else:
                self._run_start[name] = None

        if on["left"] or on["right"]:
            # Ambiguous both-on contact defers to the earlier run (the
            # channel the line reached first); an exact tie goes to left.
            active = "left"
            if on["right"] and (
                not on["left"] or self._run_start["right"] < self._run_start["left"]
            ):
                active = "right"
            held = ts - self._run_start[active]
            escalated = held >= self.dwell.escalation_dwell_ms
            self._active = active
            self._active_escalated = escalated
            self._lost_side = None
            self._lost_at = None
            level = SeverityLevel.SEVERE if escalated else SeverityLevel.MODERATE
            return Severity(level, _CONTACT_SIDE[active])

        if self._active is not None:
            if fault[self._active]:
                # The sensor died mid-contact: the line was not observed
                # leaving, so draw no loss inference and fail toward calm.
                self._active = None
                self._active_escalated = False
            else:
                if self._active_escalated:
                    self._lost_side = _CONTACT_SIDE[self._active]
                    self._lost_at = ts
                self._active = None
                self._active_escalated = False

        if self._lost_side is not None:
            if ts - self._lost_at <= self.dwell.lost_line_grace_ms:
                return Severity(SeverityLevel.SEVERE, self._lost_side)
            self._lost_side = None
            self._lost_at = None
        return ON_TRACK


def estimate_severity(
    history: Sequence[SensorReading],
    mount: SensorMountConfig,
    dwell: DwellConfig | None = None,
) -> Severity:
    """Classify the latest reading of an ordered history (stateless call)."""
    if not history:
        raise ValueError("cannot estimate severity from an empty history")
    estimator = SeverityEstimator(mount, dwell)
    result = ON_TRACK
    for reading in history:
        result = estimator.push(reading)
    return result


# ---------------------------------------------------------------------------
# Severity from pose-space ground truth
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeverityThresholds:
    """Offset/angle cutoffs for the pose-space oracle (mm / degrees)."""

    moderate_offset: float = 6.0
    severe_offset: float = 14.0
    moderate_angle: float = 10.0
    severe_angle: float = 25.0

    def __post_init__(self) -> None:
        if not 0 < self.moderate_offset < self.severe_offset:
            raise ConfigError(
                "offset thresholds must satisfy 0 < moderate < severe"
            )
        if not 0 < self.moderate_angle < self.severe_angle:
            raise ConfigError("angle thresholds must satisfy 0 < moderate < severe")


def oracle_severity(
    measure: DeviationMeasure, thresholds: SeverityThresholds
) -> Severity:
    """Ground-truth severity from a deviation measure.

    A tier triggers when either the lateral offset or the heading
    deviation reaches its cutoff. Side comes from the offset sign;
    angle-only deviations take it from the heading sign.
    """
    off = measure.lateral_offset
    ang = measure.heading_deviation
    if abs(off) >= thresholds.severe_offset or abs(ang) >= thresholds.severe_angle:
        level = SeverityLevel.SEVERE
    elif abs(off) >= thresholds.moderate_offset or abs(ang) >= thresholds.moderate_angle:
        level = SeverityLevel.MODERATE
    else:
        return ON_TRACK
    if off > 0:
        side = Side.LEFT
    elif off < 0:
        side = Side.RIGHT
    else:
        side = Side.LEFT if ang > 0 else Side.RIGHT
    return Severity(level, side)
