"""Acceptance suite: one test per release criterion, each printing a
pass/fail line with its runtime (run with -s to see them live).

Covers the closed-form oracles, the Monte-Carlo robustness trends, emulator
fidelity, determinism of the harness, and questionnaire scoring.
"""

import math
import random
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest
from scipy import stats as scipy_stats

from gazeboard.cli import main as cli_main
from gazeboard.core import (
    DEFAULT_TASK_SENTENCE,
    ClassificationFrame,
    Direction,
    EngineConfig,
    default_layout,
)
from gazeboard.engine import ONE_HOT, AsyncSelector, sync_trial
from gazeboard.gateway import ConfusionMatrix, FrameEmulator
from gazeboard.keyboard import KeyboardState, apply_command, commands_for_text
from gazeboard.metrics import session_report, sus_score, tlx_score
from gazeboard.simulate import (
    ExperimentConfig,
    UserModel,
    expected_dwell_frames,
    run_experiment,
    run_session,
)
from tests.conftest import scripted_session_log


@contextmanager
def criterion(number, description, budget_s):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - start
        print(f"ACCEPTANCE {number} FAIL ({elapsed:.2f}s): {description}", flush=True)
        raise
    elapsed = time.perf_counter() - start
    print(f"ACCEPTANCE {number} PASS ({elapsed:.2f}s): {description}", flush=True)
    assert elapsed < budget_s, f"criterion {number} exceeded {budget_s}s budget"


def test_criterion_1_itr_oracle(layout):
    with criterion(1, "ITR oracle: 18.3 letters/min -> ITR_letter 106.27 +/- 0.05", 1.0):
        duration_s = len(DEFAULT_TASK_SENTENCE) / 18.3 * 60.0
        log = scripted_session_log(layout, DEFAULT_TASK_SENTENCE, duration_s)
        rep = session_report(log)
        assert rep.complete
        assert rep.itr_letter == pytest.approx(106.27, abs=0.05)


def test_criterion_2_command_count_oracle(layout):
    with criterion(2, "command-count oracle: task sentence takes exactly 46 commands", 1.0):
        commands = commands_for_text(layout, DEFAULT_TASK_SENTENCE)
        assert len(commands) == 46
        state = KeyboardState(layout=layout, target_text=DEFAULT_TASK_SENTENCE)
        for c in commands:
            state, _ = apply_command(state, c)
        assert state.typed == DEFAULT_TASK_SENTENCE


def test_criterion_3_sync_ratio_law():
    with criterion(3, "sync ratio law: R=9 single target, R<=1.2 uniform, 1<=R<=9", 5.0):
        cfg = EngineConfig(mode="sync", trial_frames=60, alpha=6.0)

        def frames_for(dirs):
            return [
                ClassificationFrame(t + 1, ONE_HOT[d], ONE_HOT[d])
                for t, d in enumerate(dirs)
            ]

        # Single-target trials always reach R = 9 and select.
        for d in range(9):
            result = sync_trial(frames_for([d] * 60), cfg, center_selectable=True)
            assert result.ratio == pytest.approx(9.0)
            assert result.event is not None
            assert result.event.command == d + 1

        # A uniform nine-way split stays near chance and is rejected.
        uniform = frames_for([t % 9 for t in range(60)])
        result = sync_trial(uniform, cfg, center_selectable=True)
        assert result.ratio <= 1.2
        assert result.event is None

        # Ratio bounds over 1000 random trial schedules.
        rng = random.Random(3620)
        disagree = ClassificationFrame(0, ONE_HOT[0], ONE_HOT[8])
        for _ in range(1000):
            frames = []
            agreed = False
            for t in range(1, 61):
                if rng.random() < 0.25:
                    frames.append(ClassificationFrame(t, disagree.left, disagree.right))
                else:
                    d = rng.randrange(9)
                    frames.append(ClassificationFrame(t, ONE_HOT[d], ONE_HOT[d]))
                    agreed = True
            result = sync_trial(frames, cfg, center_selectable=True)
            if agreed:
                assert 1.0 - 1e-12 <= result.ratio <= 9.0 + 1e-12
            else:
                assert result.event is None


def test_criterion_4_async_waiting_time_law():
    with criterion(4, "async waiting-time law: mean frames/selection within 5%", 60.0):
        target = ONE_HOT[Direction.E]
        miss_left, miss_right = ONE_HOT[Direction.NW], ONE_HOT[Direction.SE]
        for p in (0.90, 0.95, 0.99):
            rng = random.Random(int(p * 1000))
            sel = AsyncSelector(EngineConfig(mode="async", dwell_frames=30))
            selections = 0
            frames = 0
            t = 0
            frame_counts = []
            frames_this = 0
            while selections < 10_000:
                t += 1
                frames_this += 1
                if rng.random() < p:
                    frame = ClassificationFrame(t, target, target)
                else:
                    frame = ClassificationFrame(t, miss_left, miss_right)
                if sel.step(frame) is not None:
                    selections += 1
                    frame_counts.append(frames_this)
                    frames_this = 0
            empirical = sum(frame_counts) / len(frame_counts)
            analytic = expected_dwell_frames(p, 30)
            assert abs(empirical - analytic) / analytic < 0.05, (
                f"p={p}: empirical {empirical:.1f} vs analytic {analytic:.1f}"
            )


def _condition(mode, diagonal, n_users, seed):
    return ExperimentConfig(
        mode=mode,
        confusion=ConfusionMatrix.diagonal(diagonal),
        user=UserModel(reaction_frames=30, fixation_jitter=0.05),
        n_virtual_users=n_users,
        seed=seed,
        engine=EngineConfig(mode=mode, dwell_frames=30, trial_frames=60),
    )


def test_criterion_5_sync_beats_async_under_noise():
    with criterion(5, "sync beats async at diagonal 0.9 (n=100, 95% confidence)", 300.0):
        # reaction 30 + dwell 30 = trial 60: equal per-command time budgets.
        sync_result = run_experiment(_condition("sync", 0.9, 100, 2024))
        async_result = run_experiment(_condition("async", 0.9, 100, 2024))
        sync_speeds = [r.speed for r in sync_result.complete_reports()]
        async_speeds = [r.speed for r in async_result.complete_reports()]
        assert len(sync_speeds) >= 95 and len(async_speeds) >= 95
        mean_sync = sum(sync_speeds) / len(sync_speeds)
        mean_async = sum(async_speeds) / len(async_speeds)
        assert mean_sync > mean_async
        test = scipy_stats.ttest_ind(
            sync_speeds, async_speeds, equal_var=False, alternative="greater"
        )
        assert test.pvalue < 0.05, f"p={test.pvalue}"
        print(
            f"  sync {mean_sync:.2f} vs async {mean_async:.2f} letters/min "
            f"(t p-value {test.pvalue:.3g})",
            flush=True,
        )


def test_criterion_6_noise_monotonicity():
    with criterion(6, "speed non-increasing across diagonal sweep, both modes", 600.0):
        sweep = (1.0, 0.99, 0.95, 0.90)
        for mode in ("sync", "async"):
            means = []
            for diagonal in sweep:
                result = run_experiment(_condition(mode, diagonal, 100, 777))
                speeds = [r.speed for r in result.complete_reports()]
                assert speeds, f"all sessions incomplete at {mode} diag {diagonal}"
                means.append(sum(speeds) / len(speeds))
            for a, b in zip(means, means[1:]):
                assert b <= a + 1e-9, f"{mode}: {means}"
            print(f"  {mode} sweep speeds: {[round(m, 2) for m in means]}", flush=True)


def test_criterion_7_emulator_fidelity():
    with criterion(7, "emulator accuracy 0.9964 +/- 0.003 over 1e5 draws", 10.0):
        emu = FrameEmulator(
            ConfusionMatrix.diagonal(0.9964), 0.8, random.Random(55)
        )
        hits = 0
        n = 100_000
        for i in range(n):
            true = i % 9
            frame = emu.emulate(true, t_ms=i)
            if frame.left.index(max(frame.left)) == true:
                hits += 1
        accuracy = hits / n
        assert abs(accuracy - 0.9964) <= 0.003, f"accuracy {accuracy}"


def test_criterion_8_determinism(tmp_path):
    with criterion(8, "100 harness sessions replay byte-identically via cmd_replay", 120.0):
        configs = []
        for i in range(100):
            mode = "sync" if i % 2 == 0 else "async"
            diagonal = 0.99 if i % 4 < 2 else 0.97
            configs.append(
                ExperimentConfig(
                    mode=mode,
                    confusion=ConfusionMatrix.diagonal(diagonal),
                    user=UserModel(reaction_frames=5, fixation_jitter=0.05),
                    seed=i,
                )
            )
        paths = []
        for i, cfg in enumerate(configs):
            log = run_session(cfg)
            assert log.complete, f"session {i} did not finish"
            path = tmp_path / f"session-{i:03d}.jsonl"
            log.write(path)
            paths.append(path)
        for path in paths:
            assert cli_main(["replay", str(path)]) == 0, f"replay failed for {path}"
        # The installed command behaves the same as the in-process call.
        proc = subprocess.run(
            [sys.executable, "-m", "gazeboard.cli", "replay", str(paths[0])],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stdout + proc.stderr


def test_criterion_9_questionnaire_oracles():
    with criterion(9, "SUS and TLX match 20 hand-computed fixtures", 1.0):
        sus_fixtures = [
            ([0] * 10, 0.0),
            ([4] * 10, 100.0),
            ([2] * 10, 50.0),
            ([1] * 10, 25.0),
            ([3] * 10, 75.0),
            ([4, 3, 4, 2, 4, 3, 4, 4, 3, 4], 87.5),
            ([0, 1, 0, 1, 0, 1, 0, 1, 0, 1], 12.5),
            ([2, 3, 2, 3, 2, 3, 2, 3, 2, 3], 62.5),
            ([4, 4, 4, 4, 0, 0, 0, 0, 2, 2], 50.0),
            ([1, 2, 3, 4, 0, 1, 2, 3, 4, 0], 50.0),
        ]
        tlx_fixtures = [
            ([0] * 6, 0.0),
            ([100] * 6, 100.0),
            ([30, 20, 40, 30, 10, 50], 30.0),
            ([10] * 6, 10.0),
            ([0, 0, 0, 0, 0, 100], 100 / 6),
            ([25, 50, 75, 100, 0, 50], 50.0),
            ([33] * 6, 33.0),
            ([1, 2, 3, 4, 5, 6], 3.5),
            ([90, 80, 70, 60, 50, 40], 65.0),
            ([5, 5, 5, 5, 5, 4], 29 / 6),
        ]
        assert len(sus_fixtures) + len(tlx_fixtures) == 20
        for responses, expected in sus_fixtures:
            assert sus_score(responses) == pytest.approx(expected, abs=1e-12)
        for subscales, expected in tlx_fixtures:
            assert tlx_score(subscales) == pytest.approx(expected, abs=1e-12)
