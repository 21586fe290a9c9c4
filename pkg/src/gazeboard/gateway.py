"""Integration boundary for gaze-direction sources.

An external classifier (or our statistical emulator standing in for one)
produces timestamped per-eye probability vectors; this module owns the wire
codec for those messages, the confusion-matrix behavioural model, and
calibration statistics.
"""

from __future__ import annotations

import json
import random
from bisect import bisect_left
from dataclasses import dataclass
from itertools import accumulate
from typing import Optional, Sequence, Union

import numpy as np

from gazeboard.core import (
    ClassificationFrame,
    Direction,
    GazePointFrame,
    validate_probability_vector,
)


class WireError(ValueError):
    """Malformed wire message; the message names the first violation."""


@dataclass
class ConfusionMatrix:
    """9x9 row-stochastic matrix: m[i][j] = P(classified j | true i)."""

    m: np.ndarray

    def __post_init__(self):
        self.m = np.asarray(self.m, dtype=float)
        if self.m.shape != (9, 9):
            raise ValueError(f"confusion matrix must be 9x9, got {self.m.shape}")
        if (self.m < 0).any():
            i, j = map(int, np.argwhere(self.m < 0)[0])
            raise ValueError(f"negative entry at row {i} col {j}")
        sums = self.m.sum(axis=1)
        bad = np.where(np.abs(sums - 1.0) > 1e-9)[0]
        if bad.size:
            raise ValueError(f"row {int(bad[0])} sums to {sums[bad[0]]!r}, not 1")

    @classmethod
    def identity(cls) -> "ConfusionMatrix":
        return cls(np.eye(9))

    @classmethod
    def uniform(cls) -> "ConfusionMatrix":
        return cls(np.full((9, 9), 1.0 / 9.0))

    @classmethod
    def diagonal(cls, accuracy: float) -> "ConfusionMatrix":
        """accuracy on the diagonal, remaining mass uniform off-diagonal."""
        if not 0.0 <= accuracy <= 1.0:
            raise ValueError(f"accuracy must be in [0,1], got {accuracy}")
        m = np.full((9, 9), (1.0 - accuracy) / 8.0)
        np.fill_diagonal(m, accuracy)
        return cls(m)

    @classmethod
    def from_file(cls, path) -> "ConfusionMatrix":
        """Load a row-major whitespace-separated 9x9 numeric text file."""
        rows = []
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    rows.append([float(tok) for tok in line.split()])
                except ValueError as e:
                    raise ValueError(f"{path}: row {lineno}: {e}") from None
        flat = [v for row in rows for v in row]
        if len(flat) != 81:
            raise ValueError(f"{path}: expected 81 values, got {len(flat)}")
        m = np.array(flat).reshape(9, 9)
        sums = m.sum(axis=1)
        bad = np.where(np.abs(sums - 1.0) > 1e-9)[0]
        if bad.size:
            raise ValueError(
                f"{path}: row {int(bad[0]) + 1} sums to {sums[bad[0]]:.12g}, not 1"
            )
        return cls(m)

    def to_file(self, path) -> None:
        np.savetxt(path, self.m, fmt="%.12g")

    def accuracy(self) -> float:
        """Expected accuracy under a uniform prior over true directions."""
        return float(np.trace(self.m)) / 9.0


#: Near-one-hot emission: 1-eps on the drawn class, eps/8 elsewhere.
EMISSION_EPS = 1e-3


def _near_one_hot(d: int, eps: float = EMISSION_EPS) -> tuple[float, ...]:
    off = eps / 8.0
    return tuple(1.0 - eps if i == d else off for i in range(9))


class FrameEmulator:
    """Samples classifier behaviour from a confusion matrix.

    Each eye draws a predicted class from the true direction's row; with
    probability eye_correlation the right eye copies the left eye's draw,
    modelling correlated (shared-cause) errors.
    """

    def __init__(
        self,
        cm: ConfusionMatrix,
        eye_correlation: float = 0.8,
        rng: Optional[random.Random] = None,
    ):
        if not 0.0 <= eye_correlation <= 1.0:
            raise ValueError(f"eye_correlation must be in [0,1], got {eye_correlation}")
        self.cm = cm
        self.eye_correlation = eye_correlation
        self.rng = rng if rng is not None else random.Random()
        self._cum = [list(accumulate(row)) for row in cm.m.tolist()]
        self._vectors = tuple(_near_one_hot(d) for d in range(9))

    def draw_class(self, true_dir: int) -> int:
        return bisect_left(self._cum[true_dir], self.rng.random())

    def emulate(self, true_dir: int, t_ms: int) -> ClassificationFrame:
        lp = self.draw_class(true_dir)
        if self.rng.random() < self.eye_correlation:
            rp = lp
        else:
            rp = self.draw_class(true_dir)
        return ClassificationFrame(t_ms, self._vectors[lp], self._vectors[rp])


def emulate_frame(
    true_dir: Direction,
    cm: ConfusionMatrix,
    eye_correlation: float,
    rng: random.Random,
    t_ms: int = 0,
) -> ClassificationFrame:
    """One-shot form of FrameEmulator.emulate for scripting convenience."""
    return FrameEmulator(cm, eye_correlation, rng).emulate(int(true_dir), t_ms)


@dataclass
class CalibrationStats:
    matrix: ConfusionMatrix
    per_class_accuracy: np.ndarray
    overall_accuracy: float
    per_class_counts: np.ndarray
    low_confidence: bool


#: Rows with fewer samples than this are flagged low-confidence.
MIN_CALIBRATION_SAMPLES = 30


def calibration_stats(
    observations: Sequence[tuple[Direction, Union[Direction, int, ClassificationFrame]]],
) -> CalibrationStats:
    """Empirical confusion statistics from labelled calibration data.

    Each observation pairs a true direction with either a predicted
    direction or a raw classification frame (whose eye vectors are averaged
    and argmaxed).
    """
    counts = np.zeros((9, 9))
    for true_dir, pred in observations:
        if isinstance(pred, ClassificationFrame):
            combined = [l + r for l, r in zip(pred.left, pred.right)]
            pred_idx = combined.index(max(combined))
        else:
            pred_idx = int(pred)
        counts[int(true_dir), pred_idx] += 1

    row_totals = counts.sum(axis=1)
    missing = [Direction(i).name for i in range(9) if row_totals[i] == 0]
    if missing:
        raise ValueError(f"no observations for directions: {', '.join(missing)}")
    matrix = ConfusionMatrix(counts / row_totals[:, None])
    per_class = np.diag(counts) / row_totals
    overall = float(np.trace(counts) / counts.sum())
    return CalibrationStats(
        matrix=matrix,
        per_class_accuracy=per_class,
        overall_accuracy=overall,
        per_class_counts=row_totals.astype(int),
        low_confidence=bool((row_totals < MIN_CALIBRATION_SAMPLES).any()),
    )


# -- wire protocol -------------------------------------------------------
#
# Newline-delimited JSON, one message per line, over TCP or a WebSocket.
# Inbound:  {"t_ms": int, "left": [9 floats], "right": [9 floats]}
#           {"t_ms": int, "x": float, "y": float}
# Outbound: {"t_ms": int, "kind": str, "payload": ...}

#: Vectors whose sum is within this of 1 are renormalized; worse is rejected.
RENORM_TOL = 1e-3


def _parse_vector(obj: dict, key: str) -> tuple[float, ...]:
    if key not in obj:
        raise WireError(f"missing field {key!r}")
    raw = obj[key]
    if not isinstance(raw, list) or len(raw) != 9:
        raise WireError(f"field {key!r} must be a list of 9 numbers")
    vec = []
    for i, v in enumerate(raw):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise WireError(f"field {key!r} index {i} is not a number")
        if v < 0:
            raise WireError(f"field {key!r} index {i} is negative: {v}")
        vec.append(float(v))
    s = sum(vec)
    if abs(s - 1.0) > RENORM_TOL:
        raise WireError(f"field {key!r} sums to {s:.6g}, outside 1 +/- {RENORM_TOL}")
    if abs(s - 1.0) > 1e-6:
        # Renormalize mild drift; exact round-trip for already-valid vectors.
        vec = [v / s for v in vec]
    out = tuple(vec)
    msg = validate_probability_vector(out)
    if msg is not None:
        raise WireError(f"field {key!r}: {msg}")
    return out


def _parse_t_ms(obj: dict) -> int:
    if "t_ms" not in obj:
        raise WireError("missing field 't_ms'")
    t = obj["t_ms"]
    if isinstance(t, bool) or not isinstance(t, (int, float)) or t != int(t) or t < 0:
        raise WireError(f"field 't_ms' must be a non-negative integer, got {t!r}")
    return int(t)


def decode_frame(data: Union[bytes, str]) -> ClassificationFrame:
    """Parse one classification-frame message; raises WireError naming the
    first violation."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise WireError(f"invalid JSON at position {e.pos}: {e.msg}") from None
    if not isinstance(obj, dict):
        raise WireError("message must be a JSON object")
    return ClassificationFrame(
        t_ms=_parse_t_ms(obj),
        left=_parse_vector(obj, "left"),
        right=_parse_vector(obj, "right"),
    )


def encode_frame(frame: ClassificationFrame) -> bytes:
    return (
        json.dumps(
            {"t_ms": frame.t_ms, "left": list(frame.left), "right": list(frame.right)}
        ).encode("utf-8")
        + b"\n"
    )


def decode_message(data: Union[bytes, str]) -> Union[ClassificationFrame, GazePointFrame, dict]:
    """Parse any inbound message: classification frame, point frame, or a
    control object (handshake etc.), dispatched on its fields."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise WireError(f"invalid JSON at position {e.pos}: {e.msg}") from None
    if not isinstance(obj, dict):
        raise WireError("message must be a JSON object")
    if "left" in obj or "right" in obj:
        return ClassificationFrame(
            t_ms=_parse_t_ms(obj),
            left=_parse_vector(obj, "left"),
            right=_parse_vector(obj, "right"),
        )
    if "x" in obj or "y" in obj:
        t_ms = _parse_t_ms(obj)
        for key in ("x", "y"):
            if key not in obj:
                raise WireError(f"missing field {key!r}")
            v = obj[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise WireError(f"field {key!r} is not a number")
            if not 0.0 <= v <= 1.0:
                raise WireError(f"field {key!r} outside [0,1]: {v}")
        return GazePointFrame(t_ms=t_ms, x=float(obj["x"]), y=float(obj["y"]))
    return obj


def encode_event(t_ms: int, kind: str, payload) -> bytes:
    return (
        json.dumps({"t_ms": t_ms, "kind": kind, "payload": payload}).encode("utf-8")
        + b"\n"
    )


class FrameStreamValidator:
    """Enforces strictly increasing timestamps on a per-session stream."""

    def __init__(self):
        self.last_t_ms: Optional[int] = None

    def check(self, t_ms: int) -> None:
        if self.last_t_ms is not None and t_ms <= self.last_t_ms:
            raise WireError(
                f"non-monotone timestamp {t_ms} after {self.last_t_ms}"
            )
        self.last_t_ms = t_ms
