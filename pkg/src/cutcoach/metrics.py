"""Session metrics: quantifying how a run responded to feedback."""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .feedback import CueKind
from .sensing import SeverityLevel
from .simulation import SessionTrace

_CORRECTIVE = (CueKind.UH_OH, CueKind.WOAH_THERE)


@dataclass(frozen=True)
class MetricsReport:
    """Aggregates over one trace.

    Correction latency is measured from a corrective cue to the first
    later tick whose severity level is strictly lower than at the cue;
    cues never answered are excluded from the latency stats but counted.
    Escalations count every tick-to-tick severity level increase.
    """

    ticks: int
    duration_ms: int
    on_track_fraction: float
    cue_counts: dict[str, int]
    correction_latencies_ms: tuple[int, ...]
    unanswered_corrective_cues: int
    completion_time_ms: int | None
    escalation_count: int
    truncated: bool

    @property
    def mean_correction_latency_ms(self) -> float | None:
        if not self.correction_latencies_ms:
            return None
        return statistics.fmean(self.correction_latencies_ms)

    @property
    def median_correction_latency_ms(self) -> float | None:
        if not self.correction_latencies_ms:
            return None
        return statistics.median(self.correction_latencies_ms)

    def to_dict(self) -> dict:
        return {
            "ticks": self.ticks,
            "duration_ms": self.duration_ms,
            "on_track_fraction": self.on_track_fraction,
            "cue_counts": dict(self.cue_counts),
            "correction_latencies_ms": list(self.correction_latencies_ms),
            "mean_correction_latency_ms": self.mean_correction_latency_ms,
            "median_correction_latency_ms": self.median_correction_latency_ms,
            "unanswered_corrective_cues": self.unanswered_corrective_cues,
            "completion_time_ms": self.completion_time_ms,
            "escalation_count": self.escalation_count,
            "truncated": self.truncated,
        }


def metrics(trace: SessionTrace) -> MetricsReport:
    records = trace.records
    if not records:
        raise ValueError("cannot compute metrics for an empty trace")

    levels = [r.severity.level for r in records]
    on_track = sum(1 for lv in levels if lv is SeverityLevel.ON_TRACK)
    escalations = sum(1 for a, b in zip(levels, levels[1:]) if b > a)

    cue_counts = {kind.value: 0 for kind in CueKind}
    latencies: list[int] = []
    unanswered = 0
    completion_time = None

    for i, record in enumerate(records):
        for kind in record.cues:
            cue_counts[kind.value] += 1
            if kind is CueKind.FANFARE and completion_time is None:
                completion_time = record.t
            if kind in _CORRECTIVE:
                level_at_cue = record.severity.level
                answered = None
                for later in records[i + 1 :]:
                    if later.severity.level < level_at_cue:
                        answered = later.t - record.t
                        break
                if answered is None:
                    unanswered += 1
                else:
                    latencies.append(answered)

    assert cue_counts[CueKind.FANFARE.value] <= 1, "fanfare must be unique"
    return MetricsReport(
        ticks=len(records),
        duration_ms=records[-1].t - records[0].t,
        on_track_fraction=on_track / len(records),
        cue_counts=cue_counts,
        correction_latencies_ms=tuple(latencies),
        unanswered_corrective_cues=unanswered,
        completion_time_ms=completion_time,
        escalation_count=escalations,
        truncated=trace.truncated,
    )


def format_metrics_table(rows: list[tuple[str, MetricsReport]]) -> str:
    """Human-readable aggregate table, one row per trace."""
    headers = [
        "trace", "ticks", "on-track", "uh-oh", "woah", "keep-going",
        "escalations", "mean-latency", "completed",
    ]
    body = []
    for name, r in rows:
        mean = r.mean_correction_latency_ms
        body.append(
            [
                name,
                str(r.ticks),
                f"{r.on_track_fraction:.3f}",
                str(r.cue_counts[CueKind.UH_OH.value]),
                str(r.cue_counts[CueKind.WOAH_THERE.value]),
                str(r.cue_counts[CueKind.KEEP_GOING.value]),
                str(r.escalation_count),
                "-" if mean is None else f"{mean:.0f} ms",
                "-" if r.completion_time_ms is None else f"{r.completion_time_ms} ms",
            ]
        )
    widths = [max(len(h), *(len(row[i]) for row in body)) if body else len(h)
              for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)),
        "  ".join("-" * w for w in widths),
    ]
    for row in body:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines)
