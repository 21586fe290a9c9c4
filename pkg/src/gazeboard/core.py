"""Shared vocabulary for the nine-command gaze keyboard.

Directions, frames, commands, layouts and engine configuration. Everything
here is a plain value type: validation but no behaviour.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import IntEnum
from importlib import resources
from typing import NamedTuple, Optional

#: Commands are 1-based (C1..C9); direction indices are 0-based with center=4.
CommandId = int

#: The sentence used by the typing experiment: 23 characters, 46 commands.
DEFAULT_TASK_SENTENCE = "Painting which landform"

GO_BACK: CommandId = 5
DELETE: CommandId = 9

#: Commands that hold a character group at level 1.
GROUP_COMMANDS: tuple[CommandId, ...] = (1, 2, 3, 4, 6, 7, 8)

#: Level-2 slot order: peripheral positions NW..SE skipping the center.
PERIPHERAL_COMMANDS: tuple[CommandId, ...] = (1, 2, 3, 4, 6, 7, 8, 9)

N_COMMANDS = 9
CHARSET_SIZE = 56


class Direction(IntEnum):
    """One of the nine gaze targets, laid out on a 3x3 grid."""

    NW = 0
    N = 1
    NE = 2
    W = 3
    C = 4
    E = 5
    SW = 6
    S = 7
    SE = 8


CENTER = Direction.C


def direction_of_command(c: CommandId) -> Direction:
    """Map command Ck to its grid direction (C1=NW .. C9=SE)."""
    if not 1 <= c <= 9:
        raise ValueError(f"command out of range: {c}")
    return Direction(c - 1)


def command_of_direction(d: Direction) -> CommandId:
    """Inverse of direction_of_command."""
    return int(d) + 1


def grid_neighbors(d: Direction) -> tuple[Direction, ...]:
    """Directions adjacent to d on the 3x3 grid (8-neighborhood)."""
    row, col = int(d) // 3, int(d) % 3
    out = []
    for r in (row - 1, row, row + 1):
        for c in (col - 1, col, col + 1):
            if 0 <= r < 3 and 0 <= c < 3 and (r, c) != (row, col):
                out.append(Direction(r * 3 + c))
    return tuple(out)


class ClassificationFrame(NamedTuple):
    """Timestamped per-eye class-probability vectors (length 9 each)."""

    t_ms: int
    left: tuple[float, ...]
    right: tuple[float, ...]


class GazePointFrame(NamedTuple):
    """Timestamped point of gaze in normalized screen coordinates (y down)."""

    t_ms: int
    x: float
    y: float


class SelectionEvent(NamedTuple):
    """A committed command selection.

    score is the dwell counter for async mode and the weight ratio for sync.
    """

    command: CommandId
    t_ms: int
    mode: str
    score: float


def validate_probability_vector(vec, tol: float = 1e-6) -> Optional[str]:
    """Return a violation message, or None if vec is a length-9 distribution."""
    if len(vec) != N_COMMANDS:
        return f"expected 9 probabilities, got {len(vec)}"
    for i, p in enumerate(vec):
        if p < 0:
            return f"negative probability at index {i}: {p}"
    s = sum(vec)
    if abs(s - 1.0) > tol:
        return f"probabilities sum to {s}, not 1"
    return None


def validate_frame(frame: ClassificationFrame) -> list[str]:
    """Violations of the ClassificationFrame invariants (empty when valid)."""
    out = []
    for name, vec in (("left", frame.left), ("right", frame.right)):
        msg = validate_probability_vector(vec)
        if msg is not None:
            out.append(f"{name}: {msg}")
    return out


@dataclass(frozen=True)
class EngineConfig:
    """Timing and threshold parameters shared by both selection modes.

    Frame counts assume the configured frame rate; the defaults give a 1.0 s
    dwell and a 2.0 s trial at 30 fps.
    """

    mode: str = "async"
    dwell_frames: int = 30
    trial_frames: int = 60
    alpha: float = 6.0
    frame_rate: float = 30.0
    #: Use the printed branch orientation of the selection conditional
    #: (candidate only on eye *disagreement*). For fidelity experiments only.
    literal_branch: bool = False

    def __post_init__(self):
        if self.mode not in ("async", "sync"):
            raise ValueError(f"mode must be 'async' or 'sync', got {self.mode!r}")
        if self.dwell_frames < 1 or self.trial_frames < 1:
            raise ValueError("dwell_frames and trial_frames must be >= 1")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.frame_rate <= 0:
            raise ValueError("frame_rate must be positive")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "dwell_frames": self.dwell_frames,
            "trial_frames": self.trial_frames,
            "alpha": self.alpha,
            "frame_rate": self.frame_rate,
            "literal_branch": self.literal_branch,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})


def _default_centers() -> dict[CommandId, tuple[float, float]]:
    xs = (0.166667, 0.5, 0.833333)
    return {
        command_of_direction(Direction(i)): (xs[i % 3], xs[i // 3])
        for i in range(9)
    }


@dataclass
class LayoutSpec:
    """Character groups and on-screen target centers for the keyboard.

    groups maps each of the seven group commands to its eight characters in
    level-2 slot order; C5 (go-back) and C9 (delete) are reserved. Centers
    are normalized (x, y) with y growing downward.
    """

    groups: dict[CommandId, list[str]]
    centers: dict[CommandId, tuple[float, float]] = field(default_factory=_default_centers)
    version: str = "1"

    def characters(self) -> set[str]:
        return {ch for chars in self.groups.values() for ch in chars}

    def group_of(self, ch: str) -> CommandId:
        for c in GROUP_COMMANDS:
            if ch in self.groups.get(c, ()):
                return c
        raise KeyError(f"character not in layout: {ch!r}")

    def slot_of(self, ch: str) -> CommandId:
        """Level-2 command that commits ch (within its group)."""
        g = self.group_of(ch)
        return PERIPHERAL_COMMANDS[self.groups[g].index(ch)]

    def char_at(self, group: CommandId, slot: CommandId) -> str:
        """Character at a level-2 peripheral slot of the given group."""
        return self.groups[group][PERIPHERAL_COMMANDS.index(slot)]


def validate_layout(layout: LayoutSpec, task_sentence: str = DEFAULT_TASK_SENTENCE) -> list[str]:
    """Check every layout invariant; violations are data, not failures."""
    violations: list[str] = []

    expected = set(GROUP_COMMANDS)
    got = set(layout.groups)
    if got != expected:
        violations.append(
            f"group commands must be exactly C1-C4,C6-C8; got {sorted(got)}"
        )
    for c in sorted(got & expected):
        chars = layout.groups[c]
        if len(chars) != 8:
            violations.append(f"group C{c} has {len(chars)} characters, expected 8")
        for ch in chars:
            if len(ch) != 1:
                violations.append(f"group C{c} entry {ch!r} is not a single character")

    all_chars = [ch for c in sorted(got & expected) for ch in layout.groups[c]]
    seen: set[str] = set()
    for ch in all_chars:
        if ch in seen:
            violations.append(f"duplicate character {ch!r} across groups")
        seen.add(ch)
    if len(seen) != CHARSET_SIZE and not any("characters, expected 8" in v for v in violations):
        violations.append(f"layout has {len(seen)} distinct characters, expected {CHARSET_SIZE}")

    if 7 in layout.groups and " " not in layout.groups[7]:
        violations.append("group C7 must contain the space character")

    missing_centers = [c for c in range(1, 10) if c not in layout.centers]
    if missing_centers:
        violations.append(f"missing target centers for commands {missing_centers}")
    for c, (x, y) in sorted(layout.centers.items()):
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            violations.append(f"center of C{c} outside [0,1]^2: ({x}, {y})")

    unreachable = sorted({ch for ch in task_sentence if ch not in seen})
    if unreachable:
        violations.append(f"task sentence characters not in layout: {unreachable!r}")

    return violations


def layout_to_json(layout: LayoutSpec) -> str:
    """Canonical JSON form; parse . serialize is the identity on it."""
    doc = {
        "version": layout.version,
        "groups": {f"C{c}": list(layout.groups[c]) for c in sorted(layout.groups)},
        "centers": {f"C{c}": list(layout.centers[c]) for c in sorted(layout.centers)},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def layout_from_json(text: str) -> LayoutSpec:
    doc = json.loads(text)
    groups = {int(k[1:]): list(v) for k, v in doc["groups"].items()}
    centers = {int(k[1:]): (float(v[0]), float(v[1])) for k, v in doc["centers"].items()}
    return LayoutSpec(groups=groups, centers=centers, version=str(doc["version"]))


def save_layout(layout: LayoutSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(layout_to_json(layout))


def load_layout(path) -> LayoutSpec:
    with open(path, "r", encoding="utf-8") as f:
        return layout_from_json(f.read())


_DEFAULT_LAYOUT: Optional[LayoutSpec] = None


def default_layout() -> LayoutSpec:
    """The shipped 56-character layout (fresh copy; callers may mutate)."""
    global _DEFAULT_LAYOUT
    if _DEFAULT_LAYOUT is None:
        text = resources.files("gazeboard").joinpath("layouts/default.json").read_text("utf-8")
        _DEFAULT_LAYOUT = layout_from_json(text)
    lay = _DEFAULT_LAYOUT
    return LayoutSpec(
        groups={c: list(v) for c, v in lay.groups.items()},
        centers=dict(lay.centers),
        version=lay.version,
    )
