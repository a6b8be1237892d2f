"""Batch evaluation over a labeled ink corpus: the same metric structure as a
user study (visual accuracy; technique correctness among visual matches)."""

from __future__ import annotations

import json
from pathlib import Path

from .constraints import ToleranceProfile
from .critic import build_plan, critique, technique_metrics
from .dsl import ShapeLibrary
from .ink import load_ink
from .recognizer import classify, recognize_with_recovery
from .segmenter import SegmenterConfig, segment


def batch_eval(corpus_dir, lib: ShapeLibrary, tol: ToleranceProfile = ToleranceProfile(),
               seg_cfg: SegmenterConfig = SegmenterConfig()) -> dict:
    corpus = Path(corpus_dir)
    samples = []
    skipped = []
    pairs = []
    confusion: dict = {}
    failures: dict = {}

    for ink_path in sorted(corpus.glob("*.ink")):
        label_path = ink_path.with_name(ink_path.stem + ".labels.json")
        if not label_path.exists():
            skipped.append(ink_path.name)
            continue
        label = json.loads(label_path.read_text(encoding="utf-8"))
        expected = label["expectedShape"]
        sketch = load_ink(ink_path.read_bytes())

        verdict, _ = recognize_with_recovery(sketch, expected, lib, tol, seg_cfg)
        technique = None
        if verdict.matched:
            technique = critique(verdict.binding, build_plan(lib[expected], lib), sketch)
        else:
            kind = verdict.failure[0]
            failures[kind] = failures.get(kind, 0) + 1
        pairs.append((verdict.matched, technique))

        classified = classify(segment(sketch, seg_cfg).primitives, lib, tol)
        confusion.setdefault(expected, {})
        key = ",".join(classified) if classified else "(none)"
        confusion[expected][key] = confusion[expected].get(key, 0) + 1

        samples.append(
            {
                "file": ink_path.name,
                "expected": expected,
                "visualOk": verdict.matched,
                "techniquePass": bool(technique and technique.overall_pass),
                "labelTechniqueCorrect": bool(label.get("techniqueCorrect")),
                "classified": classified,
            }
        )

    metrics = technique_metrics(pairs)
    label_rate = None
    visual_label = [s for s in samples if s["visualOk"]]
    if visual_label:
        label_rate = sum(1 for s in visual_label if s["labelTechniqueCorrect"]) / len(visual_label)

    return {
        "corpusSize": len(samples),
        "skipped": sorted(skipped),
        "visualAccuracy": metrics["visualAccuracy"],
        "techniqueAmongVisual": metrics["techniqueAmongVisual"],
        "labelTechniqueRate": label_rate,
        "confusion": [
            {"expected": exp, "classified": cls, "count": count}
            for exp in sorted(confusion)
            for cls, count in sorted(confusion[exp].items())
        ],
        "failureHistogram": dict(sorted(failures.items())),
        "samples": samples,
    }


def summarize(report: dict) -> str:
    def pct(v):
        return "n/a" if v is None else f"{100 * v:.1f}%"

    lines = [
        f"samples graded: {report['corpusSize']} (skipped {len(report['skipped'])})",
        f"visual accuracy: {pct(report['visualAccuracy'])}",
        f"technique among visual: {pct(report['techniqueAmongVisual'])}",
    ]
    lines.append("confusion:")
    for row in report["confusion"]:
        lines.append(f"  {row['expected']:>8} -> {row['classified']:<24} x{row['count']}")
    if report["failureHistogram"]:
        lines.append("failures: " + ", ".join(f"{k}={v}" for k, v in report["failureHistogram"].items()))
    return "\n".join(lines)
