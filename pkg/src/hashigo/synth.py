"""Synthetic ink: canonical fixtures for the shipped shapes, technique
mutations, and the labeled evaluation corpus.

Everything here is deterministic given its arguments, so corpora and fixtures
regenerate byte-identically.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from pathlib import Path

from .ink import InkPoint, InkStroke, Sketch, save_ink

CANVAS = (200.0, 200.0)
SAMPLES_PER_STROKE = 24
STROKE_MS = 300
GAP_MS = 300

# canonical stroke geometry per shape: (p0, p1) in pen order
SHAPE_STROKES = {
    "One": [((40.0, 100.0), (160.0, 100.0))],
    "Ten": [((40.0, 100.0), (160.0, 100.0)), ((100.0, 30.0), (100.0, 170.0))],
    "Mouth": [
        ((60.0, 60.0), (60.0, 150.0)),
        ((60.0, 60.0), (140.0, 60.0)),
        ((140.0, 60.0), (140.0, 150.0)),
    ],
    "Ancient": [
        ((40.0, 40.0), (160.0, 40.0)),
        ((100.0, 5.0), (100.0, 75.0)),
        ((70.0, 90.0), (70.0, 165.0)),
        ((70.0, 90.0), (130.0, 90.0)),
        ((130.0, 90.0), (130.0, 165.0)),
    ],
}

# how many leading strokes belong to each element of a compound
SHAPE_ELEMENTS = {"Ancient": [("ten", 2), ("mouth", 3)]}


def line_stroke(stroke_id: int, p0, p1, t0: int, t1: int, samples: int = SAMPLES_PER_STROKE) -> InkStroke:
    pts = []
    for i in range(samples):
        f = i / (samples - 1)
        pts.append(InkPoint(p0[0] + f * (p1[0] - p0[0]), p0[1] + f * (p1[1] - p0[1]), round(t0 + f * (t1 - t0))))
    return InkStroke(stroke_id, tuple(pts))


def build_sketch(strokes_geometry, canvas=CANVAS) -> Sketch:
    """strokes_geometry: list of (p0, p1) in pen order."""
    strokes = []
    t = 0
    for i, (p0, p1) in enumerate(strokes_geometry):
        strokes.append(line_stroke(i, p0, p1, t, t + STROKE_MS))
        t += STROKE_MS + GAP_MS
    return Sketch(tuple(strokes), canvas[0], canvas[1])


def shape_sketch(shape: str, order=None, reversed_flags=None,
                 offset=(0.0, 0.0), scale=1.0) -> Sketch:
    """Canonical ink for `shape`, optionally with a stroke-order permutation
    and/or per-stroke direction reversal (indices refer to canonical order)."""
    base = SHAPE_STROKES[shape]
    n = len(base)
    order = list(order) if order is not None else list(range(n))
    reversed_flags = list(reversed_flags) if reversed_flags is not None else [False] * n
    geometry = []
    for canonical_idx in order:
        p0, p1 = base[canonical_idx]
        if reversed_flags[canonical_idx]:
            p0, p1 = p1, p0
        geometry.append(
            (
                (p0[0] * scale + offset[0], p0[1] * scale + offset[1]),
                (p1[0] * scale + offset[0], p1[1] * scale + offset[1]),
            )
        )
    return build_sketch(geometry)


def technique_correct(shape: str, order, reversed_flags) -> bool:
    n = len(SHAPE_STROKES[shape])
    return list(order) == list(range(n)) and not any(reversed_flags)


def right_angle_stroke(stroke_id: int = 0, leg: float = 100.0, step: float = 3.0,
                       jitter_sigma: float = 0.0, rng: random.Random | None = None,
                       origin=(0.0, 0.0)):
    """One pen stroke along (0,0)->(leg,0)->(leg,leg) with a pen slowdown at the
    corner. Returns (stroke, true corner position)."""
    rng = rng or random.Random(0)

    def speed(s):
        return 1.0 - 0.85 * math.exp(-(((s - leg) / (0.12 * leg)) ** 2))

    positions = []
    s = 0.0
    total = 2 * leg
    while s < total:
        positions.append(s)
        s += step * speed(s)
    positions.append(total)

    pts = []
    for i, s in enumerate(positions):
        if s <= leg:
            x, y = s, 0.0
        else:
            x, y = leg, s - leg
        if jitter_sigma > 0:
            x += rng.gauss(0.0, jitter_sigma)
            y += rng.gauss(0.0, jitter_sigma)
        pts.append(InkPoint(x + origin[0], y + origin[1], i * 10))
    return InkStroke(stroke_id, tuple(pts)), (leg + origin[0], origin[1])


def _mutations(shape: str):
    """Deterministic set of technique mutations per shape."""
    n = len(SHAPE_STROKES[shape])
    muts = []
    if shape == "One":
        muts = [(tuple(range(n)), flags) for flags in [(False,), (True,)]]
    elif shape == "Ten":
        for order in [(0, 1), (1, 0)]:
            for flags in itertools.product([False, True], repeat=2):
                muts.append((order, flags))
    elif shape == "Mouth":
        for order in [(0, 1, 2), (1, 0, 2), (0, 2, 1)]:
            for flags in itertools.product([False, True], repeat=3):
                muts.append((order, flags))
    elif shape == "Ancient":
        ident = tuple(range(5))
        mouth_first = (2, 3, 4, 0, 1)
        muts.append((ident, (False,) * 5))
        for i in range(5):
            flags = [False] * 5
            flags[i] = True
            muts.append((ident, tuple(flags)))
        muts.append((mouth_first, (False,) * 5))
        muts.append(((1, 0, 2, 3, 4), (False,) * 5))
    return muts


def generate_corpus(out_dir, replicas: int = 3) -> list:
    """Write the labeled synthetic evaluation corpus; returns written basenames.

    Noise-free by construction: every sample is visually correct for its label,
    and techniqueCorrect is exact from the mutation applied."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for shape in ("One", "Ten", "Mouth", "Ancient"):
        idx = 0
        for order, flags in _mutations(shape):
            for r in range(replicas):
                sketch = shape_sketch(shape, order, flags, offset=(4.0 * r, 3.0 * r), scale=1.0 + 0.05 * r)
                base = f"{shape.lower()}_{idx:03d}"
                (out / f"{base}.ink").write_bytes(save_ink(sketch))
                label = {
                    "expectedShape": shape,
                    "techniqueCorrect": technique_correct(shape, order, flags),
                }
                (out / f"{base}.labels.json").write_text(
                    json.dumps(label, sort_keys=True) + "\n", encoding="utf-8"
                )
                written.append(base)
                idx += 1
    return written


def write_fixtures(out_dir) -> list:
    """Small named fixtures used by the CLI tests and the UI replayer."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fixtures = {
        "one_canonical": shape_sketch("One"),
        "ten_canonical": shape_sketch("Ten"),
        "ten_reversed_h": shape_sketch("Ten", reversed_flags=(True, False)),
        "ten_v_first": shape_sketch("Ten", order=(1, 0)),
        "mouth_canonical": shape_sketch("Mouth"),
        "ancient_canonical": shape_sketch("Ancient"),
        "ancient_mouth_first": shape_sketch("Ancient", order=(2, 3, 4, 0, 1)),
        "empty": Sketch((), CANVAS[0], CANVAS[1]),
    }
    for name, sketch in fixtures.items():
        (out / f"{name}.ink").write_bytes(save_ink(sketch))
    return sorted(fixtures)
