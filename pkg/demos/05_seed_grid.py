"""Batch runs: how drift and reaction speed shape the session.

A grid of cutter models (drift rate x reaction delay) runs on a long
straight line with pose-oracle grading, five seeds each. Faster drift
means more corrective excursions per run; slower reactions stretch the
measured correction latency by roughly the added delay. (Sensor-driven
grading adds its own texture near the contact band edges; demo 02 maps
those bands.)

Run: python3 demos/05_seed_grid.py
"""

import statistics
from dataclasses import replace

from cutcoach import (
    CutterBehaviorModel,
    EngineConfig,
    metrics,
    run_behavior,
    straight_line_path,
)

path = straight_line_path(length=400.0)
engine = EngineConfig(mode="oracle")

print(f"fixture: straight {path.total_length:.0f} mm line, oracle grading")
print()
print("drift   reaction   uh-oh/run   mean latency   completed")

for drift in (2.0, 4.0):
    for delay in (200.0, 600.0):
        base = CutterBehaviorModel(
            advance_speed=50.0,
            drift_rate=drift,
            tremor_amplitude=0.3,
            tremor_frequency=1.0,
            correction_gain=4.0,
            reaction_delay_visual=delay,
            reaction_delay_audio=delay + 300.0,
        )
        reports = [
            metrics(run_behavior(path, replace(base, seed=seed), engine))
            for seed in range(1, 6)
        ]
        uh_oh = statistics.fmean(r.cue_counts["uh_oh"] for r in reports)
        lats = [
            r.mean_correction_latency_ms
            for r in reports
            if r.mean_correction_latency_ms is not None
        ]
        latency = f"{statistics.fmean(lats):7.0f} ms" if lats else "      -"
        done = sum(1 for r in reports if r.completion_time_ms is not None)
        print(f"{drift:5.1f}   {delay:6.0f}ms   {uh_oh:8.1f}   {latency}       {done}/5")
