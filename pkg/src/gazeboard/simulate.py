"""Deterministic Monte-Carlo typing experiment.

A simulated user pursues the oracle command path for a sentence, frames pass
through the classifier emulator (or the point-of-gaze mapper) and the
selection engine, wrong selections trigger corrective behaviour, and the
resulting logs feed the metrics module. Everything is seeded: the same
experiment config always produces the same logs, byte for byte.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from gazeboard.core import (
    DEFAULT_TASK_SENTENCE,
    ClassificationFrame,
    Direction,
    EngineConfig,
    GazePointFrame,
    LayoutSpec,
    default_layout,
    direction_of_command,
    grid_neighbors,
    validate_layout,
)
from gazeboard.engine import ONE_HOT, make_selector, nearest_target
from gazeboard.gateway import ConfusionMatrix, FrameEmulator
from gazeboard.keyboard import KeyboardState, apply_command, next_oracle_command
from gazeboard.metrics import SessionLog, SessionReport, session_report

#: Canonical gaze-in-transit frame: the eyes disagree, so no target can
#: accumulate evidence while the user moves between fixations.
TRANSIT_FRAME_VECTORS = (ONE_HOT[Direction.NW], ONE_HOT[Direction.SE])

CORRECTION_POLICIES = ("immediate-delete", "go-back-then-retry")


@dataclass
class UserModel:
    """Parametric stand-in for a participant.

    reaction_frames of gaze-shift latency follow every selection before the
    next fixation; each fixation frame wanders to a grid neighbour with
    probability fixation_jitter. Both correction policies currently walk the
    oracle recovery path (delete is only reachable from level 1, so the
    distinction collapses on this keyboard).
    """

    reaction_frames: int = 10
    fixation_jitter: float = 0.05
    correction_policy: str = "go-back-then-retry"

    def __post_init__(self):
        if self.reaction_frames < 0:
            raise ValueError("reaction_frames must be >= 0")
        if not 0.0 <= self.fixation_jitter < 1.0:
            raise ValueError("fixation_jitter must be in [0, 1)")
        if self.correction_policy not in CORRECTION_POLICIES:
            raise ValueError(
                f"correction_policy must be one of {CORRECTION_POLICIES}"
            )


@dataclass
class ExperimentConfig:
    """One experimental condition: mode x modality x noise x user."""

    mode: str = "sync"
    modality: str = "classification"
    confusion: ConfusionMatrix = field(default_factory=ConfusionMatrix.identity)
    user: UserModel = field(default_factory=UserModel)
    n_virtual_users: int = 1
    seed: int = 0
    engine: EngineConfig = field(default_factory=EngineConfig)
    eye_correlation: float = 0.8
    frame_budget: int = 10**6
    sentence: str = DEFAULT_TASK_SENTENCE

    def __post_init__(self):
        if self.mode not in ("async", "sync"):
            raise ValueError(f"mode must be 'async' or 'sync', got {self.mode!r}")
        if self.modality not in ("classification", "point"):
            raise ValueError(
                f"modality must be 'classification' or 'point', got {self.modality!r}"
            )
        if self.n_virtual_users < 1:
            raise ValueError("n_virtual_users must be >= 1")
        if self.engine.mode != self.mode:
            self.engine = replace(self.engine, mode=self.mode)

    @classmethod
    def from_dict(cls, doc: dict, base_dir=None) -> "ExperimentConfig":
        kwargs: dict = {}
        for key in ("mode", "modality", "n_virtual_users", "seed",
                    "eye_correlation", "frame_budget", "sentence"):
            if key in doc:
                kwargs[key] = doc[key]
        if "confusion" in doc:
            kwargs["confusion"] = _confusion_from_spec(doc["confusion"], base_dir)
        if "user" in doc:
            kwargs["user"] = UserModel(**doc["user"])
        if "engine" in doc:
            engine_doc = dict(doc["engine"])
            engine_doc.setdefault("mode", doc.get("mode", "sync"))
            kwargs["engine"] = EngineConfig.from_dict(engine_doc)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        import os

        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
        return cls.from_dict(doc, base_dir=os.path.dirname(os.path.abspath(path)))


def _confusion_from_spec(spec, base_dir=None) -> ConfusionMatrix:
    if spec == "identity":
        return ConfusionMatrix.identity()
    if spec == "uniform":
        return ConfusionMatrix.uniform()
    if isinstance(spec, dict):
        if "diagonal" in spec:
            return ConfusionMatrix.diagonal(float(spec["diagonal"]))
        if "file" in spec:
            import os

            path = spec["file"]
            if base_dir and not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            return ConfusionMatrix.from_file(path)
    raise ValueError(f"unrecognized confusion spec: {spec!r}")


def _session_rng(seed: int, user_index: int) -> random.Random:
    # String seeding is platform-stable and keeps sessions independent.
    return random.Random(f"gazeboard/{seed}/{user_index}")


def run_session(
    cfg: ExperimentConfig,
    sentence: Optional[str] = None,
    user_index: int = 0,
    layout: Optional[LayoutSpec] = None,
) -> SessionLog:
    """Simulate one user typing the sentence; returns a replayable log."""
    sentence = cfg.sentence if sentence is None else sentence
    layout = default_layout() if layout is None else layout
    violations = validate_layout(layout, sentence)
    if violations:
        raise ValueError(f"layout cannot type the sentence: {violations}")

    rng = _session_rng(cfg.seed, user_index)
    engine_cfg = cfg.engine
    selector = make_selector(engine_cfg)
    emulator = FrameEmulator(cfg.confusion, cfg.eye_correlation, rng)
    state = KeyboardState(layout=layout, target_text=sentence)
    log = SessionLog(
        config=engine_cfg,
        layout=layout,
        target_text=sentence,
        seed=cfg.seed,
        modality=cfg.modality,
    )
    log.append(0, "session_start")

    ms_per_frame = 1000.0 / engine_cfg.frame_rate
    jitter = cfg.user.fixation_jitter
    point_modality = cfg.modality == "point"
    is_sync = cfg.mode == "sync"
    oracle = next_oracle_command(state)
    transit = cfg.user.reaction_frames
    frame_no = 0
    t_ms = 0

    while not state.done and frame_no < cfg.frame_budget:
        frame_no += 1
        t_ms = round(frame_no * ms_per_frame)
        if is_sync and selector.trial_frame == 0:
            log.append(t_ms, "trial_start")

        if transit > 0:
            transit -= 1
            frame = ClassificationFrame(t_ms, *TRANSIT_FRAME_VECTORS)
        else:
            d = direction_of_command(oracle)
            if jitter > 0.0 and rng.random() < jitter:
                nbrs = grid_neighbors(d)
                d = nbrs[rng.randrange(len(nbrs))]
            if point_modality:
                x, y = layout.centers[d + 1]
                c = nearest_target(GazePointFrame(t_ms, x, y), layout)
                vec = ONE_HOT[c - 1]
                frame = ClassificationFrame(t_ms, vec, vec)
            else:
                frame = emulator.emulate(d, t_ms)
        log.append(t_ms, "frame", (frame.left, frame.right))

        selector.center_selectable = state.level == 2
        event = selector.step(frame)
        if event is not None:
            log.append(t_ms, "selection", (event.command, event.mode, event.score))
            state, feedback = apply_command(state, event.command, t_ms)
            for fb in feedback:
                if fb.kind in ("letter_added", "letter_deleted"):
                    log.append(t_ms, fb.kind, fb.payload)
            oracle = next_oracle_command(state)
            transit = cfg.user.reaction_frames

    log.append(t_ms, "session_end", "complete" if state.done else "incomplete")
    return log


# -- replay ---------------------------------------------------------------


@dataclass
class ReplayResult:
    ok: bool
    divergence_index: Optional[int]
    message: str
    replayed: Optional[SessionLog]


def replay(log: SessionLog) -> SessionLog:
    """Re-run the engine over the log's frames, regenerating every derived
    event. Raises on malformed logs; see verify_replay for comparison."""
    kinds = [e[1] for e in log.events]
    if "session_start" not in kinds or "session_end" not in kinds:
        raise ValueError("incomplete log: missing session_start or session_end")

    selector = make_selector(log.config)
    state = KeyboardState(layout=log.layout, target_text=log.target_text)
    out = SessionLog(
        config=log.config,
        layout=log.layout,
        target_text=log.target_text,
        seed=log.seed,
        modality=log.modality,
    )
    is_sync = log.config.mode == "sync"
    end_t = None
    for t, kind, payload in log.events:
        if kind == "session_start":
            out.append(t, "session_start")
        elif kind == "selection" and payload[1] == "click":
            # Direct selections (mouse baseline) are inputs, not engine
            # output; pass them through and advance the keyboard.
            out.append(t, kind, payload)
            state, feedback = apply_command(state, payload[0], t)
            for fb in feedback:
                if fb.kind in ("letter_added", "letter_deleted"):
                    out.append(t, fb.kind, fb.payload)
        elif kind == "frame":
            if is_sync and selector.trial_frame == 0:
                out.append(t, "trial_start")
            frame = ClassificationFrame(t, tuple(payload[0]), tuple(payload[1]))
            selector.center_selectable = state.level == 2
            event = selector.step(frame)
            out.append(t, "frame", (frame.left, frame.right))
            if event is not None:
                out.append(t, "selection", (event.command, event.mode, event.score))
                state, feedback = apply_command(state, event.command, t)
                for fb in feedback:
                    if fb.kind in ("letter_added", "letter_deleted"):
                        out.append(t, fb.kind, fb.payload)
        elif kind == "session_end":
            end_t = t
    status = "complete" if state.done else "incomplete"
    out.append(end_t, "session_end", status)
    return out


def verify_replay(log: SessionLog) -> ReplayResult:
    """Check that the log replays to the identical event sequence."""
    try:
        replayed = replay(log)
    except Exception as e:
        return ReplayResult(False, None, f"replay failed: {e}", None)
    if log.header_dict() != replayed.header_dict():
        return ReplayResult(False, None, "header mismatch", replayed)
    for i, (orig, new) in enumerate(zip(log.events, replayed.events)):
        if orig != new:
            return ReplayResult(
                False,
                i,
                f"event {i} diverges: logged {orig!r}, replayed {new!r}",
                replayed,
            )
    if len(log.events) != len(replayed.events):
        n = min(len(log.events), len(replayed.events))
        return ReplayResult(
            False,
            n,
            f"event count differs: logged {len(log.events)}, replayed {len(replayed.events)}",
            replayed,
        )
    return ReplayResult(True, None, "replay identical", replayed)


# -- experiments -----------------------------------------------------------


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    reports: list[SessionReport]
    logs: list[SessionLog]
    incomplete: int

    def complete_reports(self) -> list[SessionReport]:
        return [r for r in self.reports if r.complete]

    def aggregate(self) -> dict[str, tuple[float, float]]:
        """mean and sample stddev of every report field, complete sessions
        only."""
        done = self.complete_reports()
        out: dict[str, tuple[float, float]] = {}
        for name in SessionReport.FIELDS:
            values = np.array([getattr(r, name) for r in done], dtype=float)
            if values.size == 0:
                out[name] = (float("nan"), float("nan"))
            else:
                ddof = 1 if values.size > 1 else 0
                out[name] = (float(values.mean()), float(values.std(ddof=ddof)))
        return out

    def summary_table(self, label: Optional[str] = None) -> str:
        agg = self.aggregate()
        label = label or f"{self.config.modality} ({self.config.mode})"
        header = (
            f"{'Condition':<28} {'Speed (TER) (letters/min)':>26} "
            f"{'ITR_letter (bits/min)':>22} {'ITR_com (bits/min)':>20}"
        )
        s_m, s_s = agg["speed"]
        l_m, l_s = agg["itr_letter"]
        c_m, c_s = agg["itr_com"]
        row = (
            f"{label:<28} {f'{s_m:.2f} +/- {s_s:.2f}':>26} "
            f"{f'{l_m:.2f} +/- {l_s:.2f}':>22} {f'{c_m:.2f} +/- {c_s:.2f}':>20}"
        )
        note = ""
        if self.incomplete:
            note = f"\n({self.incomplete} incomplete session(s) excluded)"
        return header + "\n" + row + note

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(("session",) + SessionReport.FIELDS + ("complete",))
            for i, rep in enumerate(self.reports):
                d = rep.to_dict()
                writer.writerow([i] + [d[k] for k in SessionReport.FIELDS] + [rep.complete])


def run_experiment(
    cfg: ExperimentConfig,
    sentence: Optional[str] = None,
    keep_logs: bool = False,
) -> ExperimentResult:
    """Run n_virtual_users independent seeded sessions and aggregate."""
    reports: list[SessionReport] = []
    logs: list[SessionLog] = []
    incomplete = 0
    for i in range(cfg.n_virtual_users):
        log = run_session(cfg, sentence=sentence, user_index=i)
        rep = session_report(log)
        if not rep.complete:
            incomplete += 1
        reports.append(rep)
        if keep_logs:
            logs.append(log)
    return ExperimentResult(config=cfg, reports=reports, logs=logs, incomplete=incomplete)


def expected_dwell_frames(p: float, dwell: int) -> float:
    """Mean frames until a run of `dwell` consecutive successes at per-frame
    success probability p (failures reset the run)."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    if p == 1.0:
        return float(dwell)
    pd = p**dwell
    return (1.0 - pd) / ((1.0 - p) * pd)
