"""Shared test oracles and stream generators.

oracle_step is the hand-written transition table the implementation is
judged against: a flat, string-keyed restatement of the feedback policy
kept deliberately free of the production code's structure.

The offset-sweep machinery scripts noise-free traces that drag the cut
point laterally across the line (bounced and full-escape excursions) so
the reading-history estimator can be scored against the pose oracle.
"""

import random

import numpy as np

from cutcoach.feedback import Color, CueKind, FeedbackConfig, Phase
from cutcoach.geometry import LinePath, ScissorsPose, nearest_point
from cutcoach.sensing import (
    DwellConfig,
    SensorMountConfig,
    Severity,
    SeverityEstimator,
    SeverityLevel,
    SeverityThresholds,
    Side,
    oracle_severity,
    sample_sensors,
)

# ---------------------------------------------------------------------------
# Transition-table oracle
# ---------------------------------------------------------------------------

def oracle_step(phase, side, elapsed, since_cue, level, sev_side, completed, cfg):
    """Hand-written transition table.

    All arguments are plain strings/numbers: phase and level in
    {'on_track','moderate','severe','recovering','completed'} /
    {'on_track','moderate','severe'}; side in {'left','right','none'}.
    Returns (new_phase, new_side, [cue names]).
    """
    if phase == "completed":
        return "completed", "none", []
    if completed:
        return "completed", "none", ["fanfare"]

    if phase == "on_track":
        if level == "severe":
            return "severe", sev_side, ["woah_there"]
        if level == "moderate":
            return "moderate", sev_side, ["uh_oh"]
        if since_cue >= cfg.positive_cue_interval:
            return "on_track", "none", ["keep_going"]
        return "on_track", "none", []

    if phase == "moderate":
        if level == "severe":
            return "severe", sev_side, ["woah_there"]
        if level == "moderate":
            return "moderate", sev_side, []
        if elapsed >= cfg.min_display_moderate and elapsed >= cfg.de_escalation_hold:
            return "on_track", "none", ["stay_on_track"]
        return "moderate", side, []

    if phase == "severe":
        if level == "severe":
            return "severe", sev_side, []
        if level == "moderate":
            if elapsed >= cfg.min_display_severe:
                return "recovering", sev_side, ["getting_better"]
            return "severe", side, []
        if elapsed >= cfg.min_display_severe and elapsed >= cfg.de_escalation_hold:
            return "on_track", "none", ["stay_on_track"]
        return "severe", side, []

    if phase == "recovering":
        if level == "severe":
            return "severe", sev_side, ["woah_there"]
        if level == "moderate":
            return "recovering", sev_side, []
        if elapsed >= cfg.min_display_moderate and elapsed >= cfg.de_escalation_hold:
            return "on_track", "none", ["stay_on_track"]
        return "recovering", side, []

    raise AssertionError(f"unknown phase {phase!r}")


def enumerate_transition_cases(cfg=None):
    """All (state, input, timer-bucket) combinations the oracle covers.

    Yields dicts with both enum-typed inputs for the implementation and
    plain-string inputs for the oracle. Fewer than 200 cases.
    """
    cfg = cfg if cfg is not None else FeedbackConfig()
    states = [
        (Phase.ON_TRACK, Side.NONE),
        (Phase.MODERATE, Side.LEFT),
        (Phase.MODERATE, Side.RIGHT),
        (Phase.SEVERE, Side.LEFT),
        (Phase.SEVERE, Side.RIGHT),
        (Phase.RECOVERING, Side.LEFT),
        (Phase.RECOVERING, Side.RIGHT),
        (Phase.COMPLETED, Side.NONE),
    ]
    severities = [
        Severity(SeverityLevel.ON_TRACK, Side.NONE),
        Severity(SeverityLevel.MODERATE, Side.LEFT),
        Severity(SeverityLevel.MODERATE, Side.RIGHT),
        Severity(SeverityLevel.SEVERE, Side.LEFT),
        Severity(SeverityLevel.SEVERE, Side.RIGHT),
    ]
    # Buckets straddle every timing threshold in the default config:
    # below everything / past moderate-min / past severe-min / past the
    # positive-cue interval too.
    nows = [100, 900, 1600, 6000]
    for phase, side in states:
        for severity in severities:
            for now in nows:
                yield dict(phase=phase, side=side, severity=severity, now=now,
                           completed=False, cfg=cfg)
        yield dict(phase=phase, side=side, severity=severities[0], now=100,
                   completed=True, cfg=cfg)


# ---------------------------------------------------------------------------
# Random severity streams
# ---------------------------------------------------------------------------

def random_severity_stream(seed, n_ticks=400, tick_ms=20):
    """A seeded random walk over severity levels with sticky sides.

    Returns a list of (timestamp, Severity, completed) samples; roughly
    half the streams end with a completion tick.
    """
    rng = random.Random(seed)
    level = 0
    side = rng.choice([Side.LEFT, Side.RIGHT])
    stream = []
    complete_at_end = rng.random() < 0.5
    for i in range(n_ticks):
        ts = (i + 1) * tick_ms
        r = rng.random()
        if r < 0.06:
            level = min(level + 1, 2)
        elif r < 0.12:
            level = max(level - 1, 0)
        if level == 0:
            sev = Severity(SeverityLevel.ON_TRACK, Side.NONE)
            side = rng.choice([Side.LEFT, Side.RIGHT])  # next excursion side
        else:
            sev = Severity(SeverityLevel(level), side)
        completed = complete_at_end and i == n_ticks - 1
        stream.append((ts, sev, completed))
    return stream


def assert_cue_edges(events, cfg, initial_phase=Phase.ON_TRACK,
                     initial_entered=0, initial_cue_at=0):
    """Assert every cue-edge and hysteresis property over a session fold.

    Raises AssertionError naming the offending timestamp on violation.
    """
    prev_phase = initial_phase
    prev_entered = initial_entered
    keep_going_times = []
    fanfare_count = 0

    for event in events:
        ts = event.timestamp
        state, frame, cues = event.state, event.frame, event.cues
        kinds = [c.kind for c in cues]
        assert len(kinds) <= 1, f"t={ts}: stacked cues {kinds}"

        entered_severe = state.phase is Phase.SEVERE and prev_phase is not Phase.SEVERE
        assert (CueKind.WOAH_THERE in kinds) == entered_severe, f"t={ts}"
        edge_mod = state.phase is Phase.MODERATE and prev_phase is Phase.ON_TRACK
        assert (CueKind.UH_OH in kinds) == edge_mod, f"t={ts}"
        edge_rec = state.phase is Phase.RECOVERING and prev_phase is Phase.SEVERE
        assert (CueKind.GETTING_BETTER in kinds) == edge_rec, f"t={ts}"
        edge_back = state.phase is Phase.ON_TRACK and prev_phase in (
            Phase.MODERATE, Phase.SEVERE, Phase.RECOVERING
        )
        assert (CueKind.STAY_ON_TRACK in kinds) == edge_back, f"t={ts}"
        edge_done = state.phase is Phase.COMPLETED and prev_phase is not Phase.COMPLETED
        assert (CueKind.FANFARE in kinds) == edge_done, f"t={ts}"
        fanfare_count += kinds.count(CueKind.FANFARE)

        if CueKind.KEEP_GOING in kinds:
            assert state.phase is Phase.ON_TRACK and prev_phase is Phase.ON_TRACK, (
                f"t={ts}: keep-going outside on-track"
            )
            keep_going_times.append(ts)

        # De-escalations must wait out the displayed phase's minimum.
        if prev_phase is Phase.SEVERE and state.phase in (Phase.RECOVERING, Phase.ON_TRACK):
            assert ts - prev_entered >= cfg.min_display_severe, f"t={ts}"
        if prev_phase in (Phase.MODERATE, Phase.RECOVERING) and state.phase is Phase.ON_TRACK:
            assert ts - prev_entered >= cfg.min_display_moderate, f"t={ts}"

        # Frame must be a pure function of phase and side.
        color = frame.chameleon_color.value
        expected_color = {
            Phase.ON_TRACK: "green", Phase.COMPLETED: "green",
            Phase.MODERATE: "orange", Phase.RECOVERING: "orange",
            Phase.SEVERE: "red",
        }[state.phase]
        assert color == expected_color, f"t={ts}"
        assert frame.side_tint is state.side, f"t={ts}"
        assert frame.end_screen == (state.phase is Phase.COMPLETED), f"t={ts}"
        if frame.chameleon_color is Color.GREEN:
            assert frame.side_tint is Side.NONE, f"t={ts}"

        if state.phase is not prev_phase:
            prev_entered = state.phase_entered_at
        prev_phase = state.phase

    for a, b in zip(keep_going_times, keep_going_times[1:]):
        assert b - a >= cfg.positive_cue_interval, f"keep-going gap {b - a}"
    assert fanfare_count <= 1
    return fanfare_count


# ---------------------------------------------------------------------------
# Sensor/oracle offset sweep
# ---------------------------------------------------------------------------
# Geometry picked so the sensor contact band lines up with the oracle's
# moderate threshold: spacing 22 mm and ink 10 mm put first contact at
# |offset| = 22/2 - 10/2 = 6 mm, exactly the moderate cutoff. Escape
# excursions cross the 6..16 mm band slowly enough that the escalation
# dwell fires right at the 14 mm severe cutoff (6 + 20 mm/s * 0.4 s).

SWEEP_MOUNT = SensorMountConfig(
    sensor_spacing=22.0, sensor_spot_diameter=3.0, forward_offset=0.0, sample_rate=50.0
)
SWEEP_DWELL = DwellConfig(escalation_dwell_ms=400.0, lost_line_grace_ms=800.0)
SWEEP_THRESHOLDS = SeverityThresholds()
SWEEP_INK_WIDTH = 10.0
SWEEP_SPEED = 60.0  # mm/s along the path

_BOUNCE = [(200.0, 8.0), (100.0, 8.0), (200.0, 0.0)]
_ESCAPE = [(150.0, 6.0), (400.0, 14.0), (200.0, 20.0), (300.0, 20.0), (500.0, 0.0)]


def build_offset_profile(excursions, pad_ms=1000.0):
    """Piecewise-linear lateral offset over time.

    excursions: sequence of ("bounce"|"escape", sign). Returns
    (breakpoint_times_ms, breakpoint_offsets_mm, total_duration_ms).
    """
    times = [0.0]
    offsets = [0.0]
    t = pad_ms
    times.append(t)
    offsets.append(0.0)
    for kind, sign in excursions:
        for duration, target in (_BOUNCE if kind == "bounce" else _ESCAPE):
            t += duration
            times.append(t)
            offsets.append(sign * target)
        t += pad_ms
        times.append(t)
        offsets.append(0.0)
    return np.array(times), np.array(offsets), t


def sweep_path(kind, duration_ms, speed=SWEEP_SPEED):
    """Straight or L-shaped fixture long enough for the sweep."""
    reach = speed * duration_ms / 1000.0 + 100.0
    if kind == "straight":
        verts = [[0.0, 0.0], [reach, 0.0]]
    elif kind == "l":
        leg = reach / 2.0 + 60.0
        verts = [[0.0, 0.0], [leg, 0.0], [leg, leg]]
    else:
        raise ValueError(kind)
    return LinePath(vertices=verts, ink_width=SWEEP_INK_WIDTH, capture_radius=5.0)


def run_offset_sweep(path, times, offsets, duration_ms, tick_ms=20):
    """Drive the scripted sweep; returns [(t, est_level, oracle_level)]."""
    estimator = SeverityEstimator(SWEEP_MOUNT, SWEEP_DWELL)
    rows = []
    for t in range(0, int(duration_ms) + tick_ms, tick_ms):
        e = float(np.interp(t, times, offsets))
        arc = SWEEP_SPEED * t / 1000.0
        base = path.point_at(arc)
        heading = path.tangent_heading_at(arc)
        rad = np.radians(heading)
        pose = ScissorsPose(
            position=(base[0] - e * np.sin(rad), base[1] + e * np.cos(rad)),
            heading=heading,
            timestamp=t,
        )
        est = estimator.push(sample_sensors(pose, path, SWEEP_MOUNT))
        orc = oracle_severity(nearest_point(pose, path), SWEEP_THRESHOLDS)
        rows.append((t, est.level, orc.level))
    return rows


def sweep_agreement(rows, dwell_ms=400.0):
    """(agreement fraction, disagreeing ticks not near any transition)."""
    transitions = [rows[0][0]]
    for (t0, e0, o0), (t1, e1, o1) in zip(rows, rows[1:]):
        if e1 != e0 or o1 != o0:
            transitions.append(t1)
    agree = sum(1 for _, e, o in rows if e == o)
    stray = [
        t
        for t, e, o in rows
        if e != o and not any(abs(t - tr) <= dwell_ms for tr in transitions)
    ]
    return agree / len(rows), stray


def standard_sweep(kind, n_excursions=16, seed=0):
    """Build and run the canonical mixed bounce/escape sweep."""
    rng = random.Random(seed)
    excursions = []
    for i in range(n_excursions):
        excursions.append(
            ("bounce" if i % 2 == 0 else "escape", rng.choice([-1.0, 1.0]))
        )
    times, offsets, duration = build_offset_profile(excursions)
    path = sweep_path(kind, duration)
    return run_offset_sweep(path, times, offsets, duration)
