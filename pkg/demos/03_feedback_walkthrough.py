"""The feedback machine, one excursion at a time.

A scripted severity story walks through every phrase: drift to moderate
("Uh-oh!"), worsen to severe ("Woah there!"), start correcting
("Getting better - keep going!"), recenter ("Good job - now stay on
track!"), cruise long enough to earn the periodic reassurance, then
finish to the fanfare. Note the hysteresis: the red screen refuses to
de-escalate before its minimum display time.

Run: python3 demos/03_feedback_walkthrough.py
"""

from cutcoach import (
    FeedbackConfig,
    Severity,
    SeverityLevel,
    Side,
    run_session,
)

MOD_L = Severity(SeverityLevel.MODERATE, Side.LEFT)
SEV_L = Severity(SeverityLevel.SEVERE, Side.LEFT)
ON = Severity(SeverityLevel.ON_TRACK, Side.NONE)

story = (
    [(t, ON, False) for t in range(20, 1001, 20)]
    + [(t, MOD_L, False) for t in range(1020, 2001, 20)]
    + [(t, SEV_L, False) for t in range(2020, 3001, 20)]
    + [(t, MOD_L, False) for t in range(3020, 4501, 20)]   # min display holds red
    + [(t, ON, False) for t in range(4520, 11001, 20)]
    + [(11020, ON, True)]
)

events = run_session(story, FeedbackConfig())

print(" time   phase        color   tint   cue")
last_phase = None
for event in events:
    interesting = event.cues or event.state.phase is not last_phase
    if not interesting:
        continue
    cue_text = ", ".join(f"{c.kind.value} ({c.text})" for c in event.cues) or "-"
    print(
        f"{event.timestamp:>6}  {event.state.phase.value:<12} "
        f"{event.frame.chameleon_color.value:<7} "
        f"{event.frame.side_tint.value:<6} {cue_text}"
    )
    last_phase = event.state.phase
