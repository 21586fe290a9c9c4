#!/usr/bin/env python3
"""Walk through the two command-selection modes on hand-built frame streams.

Shows the dwell counter climbing (and resetting) in asynchronous mode, and a
full synchronous trial with its sqrt(t) weight accumulation and dominance
ratio.
"""

from gazeboard.core import ClassificationFrame, Direction, EngineConfig
from gazeboard.engine import ONE_HOT, AsyncSelector, SyncSelector, agree


def frame(d_left, d_right, t):
    return ClassificationFrame(t, ONE_HOT[d_left], ONE_HOT[d_right])


print("=" * 70)
print("Asynchronous mode: dwell on East, one glance away, dwell again")
print("=" * 70)

cfg = EngineConfig(mode="async", dwell_frames=10)
sel = AsyncSelector(cfg)

stream = (
    [(Direction.E, Direction.E)] * 7      # starts dwelling on E
    + [(Direction.N, Direction.S)] * 2    # eyes disagree: progress resets
    + [(Direction.E, Direction.E)] * 12   # fresh dwell completes
)
for t, (dl, dr) in enumerate(stream, start=1):
    f = frame(dl, dr, t)
    d = agree(f)
    event = sel.step(f)
    marker = f"  -> SELECTED C{event.command}" if event else ""
    print(f"frame {t:>3}: agree={d.name if d is not None else '--':<3} delta={sel.delta:<3}{marker}")

print()
print("=" * 70)
print("Synchronous mode: one 20-frame trial, user settles on NE late")
print("=" * 70)

cfg = EngineConfig(mode="sync", trial_frames=20, alpha=6.0)
sel = SyncSelector(cfg)

# The first third of the trial wanders; sqrt(t) weighting makes the late,
# settled frames count the most.
wander = [Direction.N, Direction.W, Direction.S, Direction.N, Direction.E, Direction.W]
schedule = wander + [Direction.NE] * 14
event = None
for t, d in enumerate(schedule, start=1):
    event = sel.step(frame(d, d, t)) or event

result = sel.last_result
print(f"weights by direction:")
for d in Direction:
    bar = "#" * int(result.weights[d])
    print(f"  {d.name:<3} {result.weights[d]:>7.2f} {bar}")
print(f"dominance ratio R = max/mean = {result.ratio:.2f} (threshold alpha = {cfg.alpha})")
print(f"outcome: {'SELECTED C%d' % event.command if event else 'no selection'}")

print()
print("=" * 70)
print("Same trial split evenly over all nine targets: rejected")
print("=" * 70)

sel = SyncSelector(cfg, center_selectable=True)
event = None
for t in range(1, 21):
    d = Direction(t % 9)
    event = sel.step(frame(d, d, t)) or event
result = sel.last_result
print(f"dominance ratio R = {result.ratio:.3f} -> {'selected' if event else 'rejected (below alpha)'}")
