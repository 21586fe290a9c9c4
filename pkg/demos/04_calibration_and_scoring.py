#!/usr/bin/env python3
"""Calibration statistics and questionnaire scoring.

Simulates a per-user calibration session (300 samples per direction drawn
from a known confusion matrix), re-estimates the matrix from the labelled
data, and scores example usability/workload questionnaires.
"""

import random

import numpy as np

from gazeboard.core import Direction
from gazeboard.gateway import ConfusionMatrix, FrameEmulator, calibration_stats
from gazeboard.metrics import sus_score, tlx_score

print("=" * 70)
print("Calibration: 300 labelled samples per direction")
print("=" * 70)

true_cm = ConfusionMatrix.diagonal(0.9964)
emu = FrameEmulator(true_cm, eye_correlation=0.8, rng=random.Random(7))

observations = [
    (Direction(d), Direction(emu.draw_class(d)))
    for d in range(9)
    for _ in range(300)
]
stats = calibration_stats(observations)

np.set_printoptions(precision=3, suppress=True)
print(f"overall accuracy: {stats.overall_accuracy:.4f} "
      f"(generator diagonal was {true_cm.m[0, 0]:.4f})")
print(f"per-class accuracy: {np.round(stats.per_class_accuracy, 4)}")
print(f"low-confidence flag: {stats.low_confidence} "
      f"(min samples per class: {stats.per_class_counts.min()})")
print(f"max entrywise deviation from generator: "
      f"{np.abs(stats.matrix.m - true_cm.m).max():.4f}")

print()
print("=" * 70)
print("Questionnaires")
print("=" * 70)

# Ten usability items, each already adjusted to a 0..4 contribution.
usability_responses = [4, 3, 4, 3, 4, 4, 3, 4, 3, 4]
print(f"usability responses {usability_responses} -> SUS {sus_score(usability_responses)}")

# Six workload subscales, 0..100 each, lower is better.
workload = [35, 20, 30, 40, 25, 30]
print(f"workload subscales  {workload} -> raw TLX {tlx_score(workload):.1f}")
