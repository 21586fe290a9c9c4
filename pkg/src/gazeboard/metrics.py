"""Typing-performance metrics computed from session logs.

Speed is the text entry rate (target letters per minute of session time,
corrections included). Information transfer rate uses the Wolpaw form at
command level (N=9) and letter level (N=56). Questionnaire scoring covers
the standard 10-item usability scale and the six-subscale raw workload
index.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from gazeboard.core import (
    CHARSET_SIZE,
    N_COMMANDS,
    EngineConfig,
    LayoutSpec,
    layout_from_json,
    layout_to_json,
)
from gazeboard.keyboard import KeyboardState, apply_command, next_oracle_command

#: Event kinds allowed in a session log, in the wire spelling.
EVENT_KINDS = (
    "session_start",
    "frame",
    "trial_start",
    "selection",
    "letter_added",
    "letter_deleted",
    "session_end",
)


@dataclass
class SessionLog:
    """Ordered record of everything that happened in one session.

    Events are (t_ms, kind, payload) tuples; payload shape depends on kind:
    frame -> (left, right) probability tuples, selection -> (command, mode,
    score), letter_added/letter_deleted -> character, session_end -> status
    string, session_start/trial_start -> None.
    """

    config: EngineConfig
    layout: LayoutSpec
    target_text: str
    seed: Optional[int] = None
    modality: str = "classification"
    events: list[tuple] = field(default_factory=list)

    def append(self, t_ms: int, kind: str, payload=None) -> None:
        self.events.append((t_ms, kind, payload))

    @property
    def complete(self) -> bool:
        for t, kind, payload in reversed(self.events):
            if kind == "session_end":
                return payload == "complete"
        return False

    def selections(self) -> list[tuple]:
        return [e for e in self.events if e[1] == "selection"]

    def frames(self) -> list[tuple]:
        return [e for e in self.events if e[1] == "frame"]

    def final_typed(self) -> str:
        """Buffer contents implied by the letter events."""
        buf: list[str] = []
        for _, kind, payload in self.events:
            if kind == "letter_added":
                buf.append(payload)
            elif kind == "letter_deleted" and buf:
                buf.pop()
        return "".join(buf)

    # -- serialization -------------------------------------------------

    def header_dict(self) -> dict:
        return {
            "type": "header",
            "config": self.config.to_dict(),
            "layout": json.loads(layout_to_json(self.layout)),
            "layout_version": self.layout.version,
            "target_text": self.target_text,
            "seed": self.seed,
            "modality": self.modality,
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps(self.header_dict(), sort_keys=True)]
        for t_ms, kind, payload in self.events:
            rec: dict = {"t": t_ms, "k": kind}
            if kind == "frame":
                rec["left"] = list(payload[0])
                rec["right"] = list(payload[1])
            elif kind == "selection":
                rec["command"], rec["mode"], rec["score"] = payload
            elif kind in ("letter_added", "letter_deleted"):
                rec["char"] = payload
            elif kind == "session_end":
                rec["status"] = payload
            lines.append(json.dumps(rec, sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "SessionLog":
        lines = [ln for ln in text.split("\n") if ln.strip()]
        if not lines:
            raise ValueError("empty session log")
        header = json.loads(lines[0])
        if header.get("type") != "header":
            raise ValueError("first line is not a session-log header")
        log = cls(
            config=EngineConfig.from_dict(header["config"]),
            layout=layout_from_json(json.dumps(header["layout"])),
            target_text=header["target_text"],
            seed=header.get("seed"),
            modality=header.get("modality", "classification"),
        )
        for i, line in enumerate(lines[1:], start=2):
            rec = json.loads(line)
            kind = rec["k"]
            if kind not in EVENT_KINDS:
                raise ValueError(f"line {i}: unknown event kind {kind!r}")
            if kind == "frame":
                payload = (tuple(rec["left"]), tuple(rec["right"]))
            elif kind == "selection":
                payload = (rec["command"], rec["mode"], rec["score"])
            elif kind in ("letter_added", "letter_deleted"):
                payload = rec["char"]
            elif kind == "session_end":
                payload = rec["status"]
            else:
                payload = None
            log.append(rec["t"], kind, payload)
        return log

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_jsonl())

    @classmethod
    def read(cls, path) -> "SessionLog":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_jsonl(f.read())


@dataclass
class SessionReport:
    """Per-session typing performance in the units of the results table."""

    speed: float  # letters/min
    itr_letter: float  # bits/min
    itr_com: float  # bits/min
    commands_issued: int
    command_accuracy: float
    letter_accuracy: float
    duration_min: float
    letters_net: int
    complete: bool

    FIELDS = (
        "speed",
        "itr_letter",
        "itr_com",
        "commands_issued",
        "command_accuracy",
        "letter_accuracy",
        "duration_min",
        "letters_net",
    )

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.FIELDS}
        d["complete"] = self.complete
        return d


def wolpaw_bits(n: int, p: float) -> float:
    """Per-selection information of an N-way choice at accuracy p.

    log2 N at p=1, zero at chance (p=1/N), negative below chance.
    """
    if n < 2:
        raise ValueError(f"need at least 2 alternatives, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"accuracy must be in [0,1], got {p}")
    bits = math.log2(n)
    if p > 0.0:
        bits += p * math.log2(p)
    if p < 1.0:
        bits += (1.0 - p) * math.log2((1.0 - p) / (n - 1))
    return bits


def _common_prefix_len(a: str, b: str) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def session_report(log: SessionLog) -> SessionReport:
    """Compute the performance report for one session.

    A command counts as correct when it matches the oracle path for the
    keyboard state it was issued in; a letter counts as correct when it
    extends the common prefix with the target.
    """
    t_start = t_end = None
    for t, kind, payload in log.events:
        if kind == "session_start":
            t_start = t
        elif kind == "session_end":
            t_end = t
    if t_start is None or t_end is None:
        raise ValueError("log must contain session_start and session_end")
    duration_min = (t_end - t_start) / 60000.0
    if duration_min <= 0:
        raise ValueError("session duration must be positive")

    state = KeyboardState(layout=log.layout, target_text=log.target_text)
    commands = 0
    correct_commands = 0
    letters_added = 0
    correct_letters = 0
    for t, kind, payload in log.events:
        if kind != "selection":
            continue
        command = payload[0]
        oracle = next_oracle_command(state)
        commands += 1
        if command == oracle:
            correct_commands += 1
        before = state.typed
        state, _ = apply_command(state, command, t)
        if len(state.typed) > len(before):
            letters_added += 1
            if _common_prefix_len(state.typed, log.target_text) == len(state.typed):
                correct_letters += 1

    complete = log.complete and state.typed == log.target_text
    p_com = correct_commands / commands if commands else 1.0
    p_let = correct_letters / letters_added if letters_added else 1.0
    letters_net = _common_prefix_len(state.typed, log.target_text)
    speed = (len(log.target_text) if complete else letters_net) / duration_min
    commands_per_min = commands / duration_min
    itr_com = commands_per_min * max(0.0, wolpaw_bits(N_COMMANDS, p_com))
    itr_letter = (letters_net / duration_min) * max(0.0, wolpaw_bits(CHARSET_SIZE, p_let))
    return SessionReport(
        speed=speed,
        itr_letter=itr_letter,
        itr_com=itr_com,
        commands_issued=commands,
        command_accuracy=p_com,
        letter_accuracy=p_let,
        duration_min=duration_min,
        letters_net=letters_net,
        complete=complete,
    )


def sus_score(responses: Iterable[int]) -> float:
    """Usability score from ten pre-adjusted item contributions (0..4)."""
    items = list(responses)
    if len(items) != 10:
        raise ValueError(f"expected 10 responses, got {len(items)}")
    for i, r in enumerate(items):
        if not isinstance(r, int) or not 0 <= r <= 4:
            raise ValueError(f"response {i} out of range 0..4: {r!r}")
    return sum(items) * 2.5


def tlx_score(subscales: Iterable[float]) -> float:
    """Raw workload score: unweighted mean of the six subscales (0..100)."""
    values = list(subscales)
    if len(values) != 6:
        raise ValueError(f"expected 6 subscale values, got {len(values)}")
    for i, v in enumerate(values):
        if not 0 <= v <= 100:
            raise ValueError(f"subscale {i} out of range 0..100: {v}")
    return sum(values) / 6.0
