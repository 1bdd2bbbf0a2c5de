"""A first session, end to end.

A synthetic cutter with a lateral drift follows the straight 200 mm
practice line. The pose oracle grades each tick, the feedback machine
reacts, and the cutter steers back once it "hears" each cue. We print
the cue timeline and the session metrics.

Run: python3 demos/01_follow_the_line.py
"""

from cutcoach import (
    CutterBehaviorModel,
    EngineConfig,
    format_metrics_table,
    metrics,
    run_behavior,
    straight_line_path,
)

path = straight_line_path(length=200.0)

# A learner who drifts 3.5 mm/s to the left, wobbles gently (slow tremor
# keeps the wobble below the heading threshold, so excursions here are
# drift-driven), and corrects about a quarter second after feedback.
model = CutterBehaviorModel(
    advance_speed=40.0,
    drift_rate=3.5,
    tremor_amplitude=0.5,
    tremor_frequency=1.2,
    correction_gain=3.0,
    reaction_delay_visual=250.0,
    reaction_delay_audio=600.0,
    seed=7,
)

trace = run_behavior(path, model, EngineConfig(mode="oracle"))

print(f"ticks: {len(trace.records)}   truncated: {trace.truncated}")
print()
print("cue timeline (either the offset or the heading can trip a tier):")
for record in trace.records:
    for kind in record.cues:
        m = record.measure
        print(
            f"  {record.t:>6} ms  {kind.value:<14} "
            f"(offset {m.lateral_offset:+.1f} mm, heading {m.heading_deviation:+.1f} deg)"
        )

print()
print(format_metrics_table([("drifting-cutter", metrics(trace))]))
