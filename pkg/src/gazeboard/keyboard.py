"""Two-level keyboard state machine: group expansion, letter commit,
go-back, delete, and the oracle command path for a typing task."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

from gazeboard.core import (
    DELETE,
    GO_BACK,
    GROUP_COMMANDS,
    PERIPHERAL_COMMANDS,
    CommandId,
    LayoutSpec,
)


class FeedbackEvent(NamedTuple):
    """UI-facing notification: highlight, letter_added, letter_deleted,
    level_changed or audio_cue."""

    kind: str
    payload: object
    t_ms: int


@dataclass(frozen=True)
class KeyboardState:
    """Immutable keyboard snapshot; apply_command returns the successor."""

    layout: LayoutSpec
    target_text: str
    typed: str = ""
    level: int = 1
    active_group: Optional[CommandId] = None

    @property
    def last_five(self) -> str:
        return self.typed[-5:]

    @property
    def done(self) -> bool:
        return self.typed == self.target_text


def apply_command(
    state: KeyboardState, c: CommandId, t_ms: int = 0
) -> tuple[KeyboardState, list[FeedbackEvent]]:
    """Execute one selected command. Total: every command is legal in every
    state, even when it does nothing."""
    if not 1 <= c <= 9:
        raise ValueError(f"command out of range: {c}")

    if state.level == 1:
        if c in GROUP_COMMANDS:
            new = replace(state, level=2, active_group=c)
            return new, [FeedbackEvent("level_changed", c, t_ms)]
        if c == DELETE:
            if not state.typed:
                return state, []
            removed = state.typed[-1]
            new = replace(state, typed=state.typed[:-1])
            return new, [FeedbackEvent("letter_deleted", removed, t_ms)]
        # c == GO_BACK: the level-1 center holds the text boxes, not a command.
        return state, []

    # level 2
    if c == GO_BACK:
        new = replace(state, level=1, active_group=None)
        return new, [FeedbackEvent("level_changed", GO_BACK, t_ms)]
    ch = state.layout.char_at(state.active_group, c)
    new = replace(state, typed=state.typed + ch, level=1, active_group=None)
    events = [
        FeedbackEvent("letter_added", ch, t_ms),
        FeedbackEvent("audio_cue", ch, t_ms),
        FeedbackEvent("level_changed", GO_BACK, t_ms),
    ]
    return new, events


def commands_for_text(layout: LayoutSpec, text: str) -> list[CommandId]:
    """Minimal error-free command sequence typing text: group then slot for
    each character, 2 * len(text) commands total."""
    out: list[CommandId] = []
    for ch in text:
        try:
            g = layout.group_of(ch)
        except KeyError:
            raise ValueError(f"character {ch!r} cannot be typed with this layout")
        out.append(g)
        out.append(layout.slot_of(ch))
    return out


def _common_prefix_len(a: str, b: str) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def remaining_text(state: KeyboardState) -> str:
    """Target suffix after the longest common prefix with the typed buffer."""
    return state.target_text[_common_prefix_len(state.typed, state.target_text):]


def next_oracle_command(state: KeyboardState) -> Optional[CommandId]:
    """The single command a perfect user issues next, including corrections.

    Wrong characters are deleted (go-back first when stuck at level 2), then
    typing resumes from the longest common prefix. None once the target is
    typed.
    """
    lcp = _common_prefix_len(state.typed, state.target_text)
    if len(state.typed) > lcp:
        # Wrong character(s) in the buffer: delete, reachable only at level 1.
        return GO_BACK if state.level == 2 else DELETE
    if state.typed == state.target_text:
        return GO_BACK if state.level == 2 else None
    ch = state.target_text[lcp]
    if state.level == 1:
        return state.layout.group_of(ch)
    if state.active_group == state.layout.group_of(ch):
        return state.layout.slot_of(ch)
    return GO_BACK


def slot_characters(layout: LayoutSpec, group: CommandId) -> dict[CommandId, str]:
    """Level-2 peripheral slot -> character map for one group."""
    chars = layout.groups[group]
    return {slot: chars[i] for i, slot in enumerate(PERIPHERAL_COMMANDS)}
