"""The two command-selection state machines and point-to-target mapping.

Asynchronous mode counts consecutive frames in which both eyes agree on one
target and fires once the dwell length is reached. Synchronous mode runs
fixed-length trials, accumulating sqrt(t) weight per agreeing frame, and
selects the heaviest target when its dominance ratio clears the threshold.
Both are deterministic: identical frame sequences produce identical events.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Optional

from gazeboard.core import (
    CENTER,
    ClassificationFrame,
    CommandId,
    Direction,
    EngineConfig,
    GazePointFrame,
    LayoutSpec,
    SelectionEvent,
    command_of_direction,
)


class StreamOrderError(ValueError):
    """Raised when frame timestamps are not strictly increasing."""


#: Exact one-hot probability vectors, indexed by direction.
ONE_HOT: tuple[tuple[float, ...], ...] = tuple(
    tuple(1.0 if i == d else 0.0 for i in range(9)) for d in range(9)
)


def agree(
    frame: ClassificationFrame,
    center_selectable: bool = False,
    literal_branch: bool = False,
) -> Optional[Direction]:
    """Direction both eyes agree on, or None.

    The center counts only when the current keyboard context makes it
    selectable (level 2, where it is the go-back command). Argmax ties break
    to the lowest index. With literal_branch the conditional keeps its
    printed orientation (candidate on disagreement), kept only for fidelity
    experiments.
    """
    left, right = frame.left, frame.right
    lp = left.index(max(left))
    rp = right.index(max(right))
    if literal_branch:
        if lp == rp and lp != CENTER:
            return None
        return Direction(rp)
    if lp != rp:
        return None
    if lp == CENTER and not center_selectable:
        return None
    return Direction(lp)


class AsyncSelector:
    """Dwell-based selection: fire after dwell_frames consecutive agreeing
    frames on one target.

    A fresh fixation starts counting immediately; switching target costs the
    switch frame; any disagreeing frame resets progress to zero.
    """

    def __init__(self, config: EngineConfig, center_selectable: bool = False):
        self.config = config
        self.center_selectable = center_selectable
        self.delta = 0
        self.last_selected: Optional[Direction] = None
        self._last_t_ms: Optional[int] = None

    def reset(self) -> None:
        self.delta = 0
        self.last_selected = None

    def step(self, frame: ClassificationFrame) -> Optional[SelectionEvent]:
        if self._last_t_ms is not None and frame.t_ms <= self._last_t_ms:
            raise StreamOrderError(
                f"timestamp {frame.t_ms} not after {self._last_t_ms}"
            )
        self._last_t_ms = frame.t_ms
        d = agree(frame, self.center_selectable, self.config.literal_branch)
        return self.step_direction(d, frame.t_ms)

    def step_direction(self, d: Optional[Direction], t_ms: int) -> Optional[SelectionEvent]:
        """Advance the dwell counter with an already-agreed direction."""
        if d is None:
            self.delta = 0
            self.last_selected = None
            return None
        if d == self.last_selected:
            self.delta += 1
        elif self.last_selected is None:
            self.last_selected = d
            self.delta = 1
        else:
            # Changing target resets progress; the switch frame is not counted.
            self.last_selected = d
            self.delta = 0
            return None
        if self.delta >= self.config.dwell_frames:
            event = SelectionEvent(command_of_direction(d), t_ms, "async", float(self.delta))
            self.reset()
            return event
        return None

    @property
    def progress(self) -> float:
        """Dwell progress in [0, 1] toward the current candidate."""
        return min(1.0, self.delta / self.config.dwell_frames)


class TrialResult:
    """Outcome of one synchronous trial."""

    __slots__ = ("weights", "selected", "ratio", "event")

    def __init__(self, weights: list[float], selected: Optional[Direction],
                 ratio: float, event: Optional[SelectionEvent]):
        self.weights = weights
        self.selected = selected
        self.ratio = ratio
        self.event = event


def _finish_trial(weights: list[float], config: EngineConfig, t_ms: int) -> TrialResult:
    total = sum(weights)
    if total == 0.0:
        return TrialResult(weights, None, 0.0, None)
    best = max(weights)
    selected = Direction(weights.index(best))
    ratio = best * 9.0 / total  # max / mean over all nine entries
    event = None
    if ratio >= config.alpha:
        event = SelectionEvent(command_of_direction(selected), t_ms, "sync", ratio)
    return TrialResult(weights, selected, ratio, event)


def sync_trial(
    frames: list[ClassificationFrame],
    config: EngineConfig,
    center_selectable: bool = False,
) -> TrialResult:
    """Run one complete trial over exactly trial_frames frames."""
    if len(frames) != config.trial_frames:
        raise ValueError(
            f"trial needs exactly {config.trial_frames} frames, got {len(frames)}"
        )
    last_t = None
    weights = [0.0] * 9
    for t, frame in enumerate(frames, start=1):
        if last_t is not None and frame.t_ms <= last_t:
            raise StreamOrderError(f"timestamp {frame.t_ms} not after {last_t}")
        last_t = frame.t_ms
        d = agree(frame, center_selectable, config.literal_branch)
        if d is not None:
            weights[d] += math.sqrt(t)
    return _finish_trial(weights, config, frames[-1].t_ms)


class SyncSelector:
    """Streaming form of the trial loop: feed frames, get an event (or not)
    every trial_frames frames. Trials run back to back."""

    def __init__(self, config: EngineConfig, center_selectable: bool = False):
        self.config = config
        self.center_selectable = center_selectable
        self.weights = [0.0] * 9
        self.trial_frame = 0
        self.last_result: Optional[TrialResult] = None
        self._last_t_ms: Optional[int] = None

    def reset(self) -> None:
        self.weights = [0.0] * 9
        self.trial_frame = 0

    def step(self, frame: ClassificationFrame) -> Optional[SelectionEvent]:
        if self._last_t_ms is not None and frame.t_ms <= self._last_t_ms:
            raise StreamOrderError(
                f"timestamp {frame.t_ms} not after {self._last_t_ms}"
            )
        self._last_t_ms = frame.t_ms
        d = agree(frame, self.center_selectable, self.config.literal_branch)
        return self.step_direction(d, frame.t_ms)

    def step_direction(self, d: Optional[Direction], t_ms: int) -> Optional[SelectionEvent]:
        self.trial_frame += 1
        if d is not None:
            self.weights[d] += math.sqrt(self.trial_frame)
        if self.trial_frame < self.config.trial_frames:
            return None
        result = _finish_trial(self.weights, self.config, t_ms)
        self.last_result = result
        self.reset()
        return result.event

    @property
    def progress(self) -> float:
        """Fraction of the current trial already elapsed."""
        return self.trial_frame / self.config.trial_frames

    def leader(self) -> Optional[Direction]:
        """Current argmax of the trial weights (None before any agreement)."""
        best = max(self.weights)
        if best == 0.0:
            return None
        return Direction(self.weights.index(best))


def make_selector(config: EngineConfig, center_selectable: bool = False):
    if config.mode == "async":
        return AsyncSelector(config, center_selectable)
    return SyncSelector(config, center_selectable)


def nearest_target(
    point: GazePointFrame,
    layout: LayoutSpec,
    center_selectable: bool = True,
) -> CommandId:
    """Command whose center is Euclidean-closest to the gaze point.

    With center_selectable False (level 1) the center is excluded. Ties
    break to the lowest command id.
    """
    best_c = 0
    best_d2 = math.inf
    for c in range(1, 10):
        if c == 5 and not center_selectable:
            continue
        cx, cy = layout.centers[c]
        d2 = (point.x - cx) ** 2 + (point.y - cy) ** 2
        if d2 < best_d2:
            best_d2 = d2
            best_c = c
    return best_c


def pointstream_to_frames(
    points: Iterable[GazePointFrame],
    layout: LayoutSpec,
) -> Iterator[ClassificationFrame]:
    """Present point-of-gaze input (eye tracker, mouse) to the classification
    pipeline: each point becomes a frame one-hot on its nearest target.

    All nine targets are mapped here; the engine's agreement gate decides
    whether the center is currently selectable.
    """
    last_t = None
    for p in points:
        if last_t is not None and p.t_ms <= last_t:
            raise StreamOrderError(f"timestamp {p.t_ms} not after {last_t}")
        last_t = p.t_ms
        vec = ONE_HOT[nearest_target(p, layout) - 1]
        yield ClassificationFrame(p.t_ms, vec, vec)
