"""Shared fixtures and log builders for the test suite."""

from __future__ import annotations

import pytest

from gazeboard.core import EngineConfig, default_layout
from gazeboard.keyboard import KeyboardState, apply_command, commands_for_text
from gazeboard.metrics import SessionLog


@pytest.fixture
def layout():
    return default_layout()


def scripted_session_log(
    layout,
    sentence: str,
    duration_s: float,
    mode: str = "async",
    extra_commands=None,
) -> SessionLog:
    """Error-free (or scripted) session log with uniform command cadence.

    extra_commands, when given, replaces the oracle sequence entirely; the
    caller is responsible for it ending with typed == sentence if the log is
    meant to be complete.
    """
    commands = extra_commands or commands_for_text(layout, sentence)
    config = EngineConfig(mode=mode)
    log = SessionLog(config=config, layout=layout, target_text=sentence)
    log.append(0, "session_start")
    state = KeyboardState(layout=layout, target_text=sentence)
    step_ms = duration_s * 1000.0 / len(commands)
    t = 0
    for i, c in enumerate(commands, start=1):
        t = round(i * step_ms)
        log.append(t, "selection", (c, mode, 1.0))
        state, feedback = apply_command(state, c, t)
        for fb in feedback:
            if fb.kind in ("letter_added", "letter_deleted"):
                log.append(t, fb.kind, fb.payload)
    end_t = round(duration_s * 1000.0)
    log.append(end_t, "session_end", "complete" if state.done else "incomplete")
    return log
