"""Lessons, grading, feedback text assembly, and report cards.

Feedback wording lives in a JSON message catalog so instructors can re-word
panels without touching code.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass, field
from pathlib import Path
from importlib import resources

from .constraints import ToleranceProfile
from .critic import PlanError, TechniqueReport, build_plan, critique, technique_metrics
from .dsl import ShapeLibrary
from .ink import Sketch
from .recognizer import VisualVerdict, _oriented, recognize_with_recovery
from .segmenter import SegmenterConfig


class LessonError(ValueError):
    pass


@dataclass(frozen=True)
class LessonItem:
    shape_name: str
    display_glyph: str
    meaning: str


@dataclass(frozen=True)
class Lesson:
    id: str
    title: str
    mode: str  # "kanji" | "elements"
    items: tuple


def load_lesson(path, lib: ShapeLibrary | None = None) -> Lesson:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        items = tuple(
            LessonItem(i["shapeName"], i["displayGlyph"], i.get("meaning", "")) for i in doc["items"]
        )
        lesson = Lesson(doc["id"], doc.get("title", doc["id"]), doc.get("mode", "kanji"), items)
    except KeyError as e:
        raise LessonError(f"{path}: missing field {e}") from e
    if not lesson.items:
        raise LessonError(f"{path}: lesson has no items")
    if lesson.mode not in ("kanji", "elements"):
        raise LessonError(f"{path}: mode must be kanji or elements")
    if lib is not None:
        for item in lesson.items:
            if item.shape_name not in lib:
                raise LessonError(f"{path}: unknown shape {item.shape_name!r}")
    return lesson


def load_lessons(directory, lib: ShapeLibrary | None = None) -> dict:
    directory = Path(directory)
    lessons = {}
    for path in sorted(directory.glob("*.lesson.json")):
        lesson = load_lesson(path, lib)
        if lesson.id in lessons:
            raise LessonError(f"duplicate lesson id {lesson.id!r}")
        lessons[lesson.id] = lesson
    if not lessons:
        raise LessonError(f"no *.lesson.json files in {directory}")
    return lessons


class MessageCatalog:
    def __init__(self, entries: dict):
        self.entries = dict(entries)

    @classmethod
    def load(cls, path=None) -> "MessageCatalog":
        if path is None:
            text = (resources.files(__package__) / "data" / "messages.json").read_text(encoding="utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
        return cls(json.loads(text))

    def get(self, key: str, **params) -> str:
        template = self.entries.get(key, key)
        try:
            return template.format(**params)
        except (KeyError, IndexError):
            return template

    def position_word(self, position: int) -> str:
        return self.entries.get(f"position.{position}", f"in position {position}")

    def direction_word(self, token: str) -> str:
        return self.entries.get(f"direction.{token}", token)


@dataclass(frozen=True)
class Attempt:
    session_id: str
    item_index: int
    sketch: Sketch
    visual: VisualVerdict
    technique: TechniqueReport | None
    timestamp_utc: str

    def __post_init__(self):
        if (self.technique is not None) != self.visual.matched:
            raise ValueError("technique report must be present exactly when the visual match succeeded")


@dataclass(frozen=True)
class Critique:
    response_panel: str
    critique_panel: tuple
    comment_panel: str
    next_item: tuple | None  # (shapeName, glyph)


@dataclass(frozen=True)
class ReportCard:
    per_item: tuple  # (LessonItem, visual_ok, technique_ok, attempts_used)
    visual_accuracy: float | None
    technique_among_visual: float | None


def _direction_token(p1, p2) -> str:
    dx, dy = p2.x - p1.x, p2.y - p1.y
    if abs(dx) >= abs(dy):
        return "left-to-right" if dx >= 0 else "right-to-left"
    return "top-to-bottom" if dy >= 0 else "bottom-to-top"


def _opposite(token: str) -> str:
    pairs = {
        "left-to-right": "right-to-left",
        "right-to-left": "left-to-right",
        "top-to-bottom": "bottom-to-top",
        "bottom-to-top": "top-to-bottom",
    }
    return pairs[token]


class TutorEngine:
    """Grades attempts and renders the four feedback panels."""

    def __init__(self, lib: ShapeLibrary, tol: ToleranceProfile = ToleranceProfile(),
                 seg_cfg: SegmenterConfig = SegmenterConfig(),
                 catalog: MessageCatalog | None = None):
        self.lib = lib
        self.tol = tol
        self.seg_cfg = seg_cfg
        self.catalog = catalog or MessageCatalog.load()

    def grade_attempt(self, sketch: Sketch, item: LessonItem, session_id: str = "-",
                      item_index: int = 0, next_item: LessonItem | None = None,
                      now: str | None = None):
        """Full pipeline: segment, recognize (with split recovery), critique.
        Engine failures become a retry critique, never an exception."""
        cat = self.catalog
        nxt = (next_item.shape_name, next_item.display_glyph) if next_item else None
        stamp = now or datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        try:
            verdict, _seg = recognize_with_recovery(sketch, item.shape_name, self.lib, self.tol, self.seg_cfg)
            technique = None
            if verdict.matched:
                plan = build_plan(self.lib[item.shape_name], self.lib)
                technique = critique(verdict.binding, plan, sketch)
        except (ValueError, PlanError, RuntimeError):
            attempt = Attempt(session_id, item_index, sketch,
                              VisualVerdict(False, failure=("engineError", [])), None, stamp)
            return attempt, Critique(
                cat.get("response.error"), (), cat.get("comment.error"), nxt
            )

        attempt = Attempt(session_id, item_index, sketch, verdict, technique, stamp)
        return attempt, self.render_critique(attempt, item, nxt)

    def render_critique(self, attempt: Attempt, item: LessonItem, next_item) -> Critique:
        cat = self.catalog
        verdict = attempt.visual
        if not verdict.matched:
            rows = []
            kind, detail = verdict.failure
            if kind == "strokeCountMismatch":
                expected, drawn = _counts_from_detail(detail)
                rows.append(cat.get("critique.stroke_count", expected=expected, drawn=drawn))
            else:
                for miss in detail[:3]:
                    rows.append(cat.get("critique.constraint_miss", constraint=miss))
            return Critique(
                cat.get("response.no_match", glyph=item.display_glyph, shape=item.shape_name),
                tuple(rows),
                cat.get("comment.no_match"),
                next_item,
            )

        report = attempt.technique
        rows = []
        if not report.stroke_count_ok:
            rows.append(cat.get("critique.stroke_count",
                                expected=_plan_stroke_count(self, item),
                                drawn=len(attempt.sketch.strokes)))
        for ordinal, position in report.order_violations:
            rows.append(cat.get("critique.order", ordinal=ordinal, position=cat.position_word(position)))
        for ordinal, _expected_mark, _observed_mark in report.direction_violations:
            line_path = _line_for_ordinal(self, item, ordinal)
            prim, orient = verdict.binding.line_assignments[line_path]
            line = _oriented(prim, orient)
            expected = _direction_token(line.p1, line.p2)
            rows.append(cat.get("critique.direction", ordinal=ordinal,
                                observed=cat.direction_word(_opposite(expected)),
                                expected=cat.direction_word(expected)))
        for element, _times in report.element_violations:
            rows.append(cat.get("critique.element", element=element))
        for ordinal in report.indeterminate_directions:
            rows.append(cat.get("critique.indeterminate", ordinal=ordinal))

        if report.overall_pass:
            return Critique(cat.get("response.correct"), (), cat.get("comment.pass"), next_item)
        return Critique(cat.get("response.technique"), tuple(rows), cat.get("comment.technique"), next_item)


def _counts_from_detail(detail):
    # detail like ["expected 2 primitives, drew 1"]
    for text in detail:
        words = text.split()
        nums = [int(w.rstrip(",")) for w in words if w.rstrip(",").isdigit()]
        if len(nums) >= 2:
            return nums[0], nums[1]
    return "?", "?"


def _plan_stroke_count(engine: TutorEngine, item: LessonItem) -> int:
    return build_plan(engine.lib[item.shape_name], engine.lib).stroke_count


def _line_for_ordinal(engine: TutorEngine, item: LessonItem, ordinal: int) -> str:
    plan = build_plan(engine.lib[item.shape_name], engine.lib)
    for k, paths in plan.stroke_ordinals:
        if k == ordinal:
            return paths[0]
    raise KeyError(ordinal)


@dataclass
class Session:
    id: str
    lesson: Lesson
    current_index: int = 0
    attempts: dict = field(default_factory=dict)  # item index -> list of Attempt

    def record(self, attempt: Attempt):
        self.attempts.setdefault(attempt.item_index, []).append(attempt)

    def advance(self):
        if self.current_index < len(self.lesson.items):
            self.current_index += 1

    @property
    def finished(self) -> bool:
        return self.current_index >= len(self.lesson.items)


def next_prompt(session: Session) -> LessonItem | None:
    if session.finished:
        return None
    return session.lesson.items[session.current_index]


def report(session: Session) -> ReportCard:
    """Per-item verdicts use the last attempt; aggregates follow the
    visual-then-technique conditioning rule."""
    per_item = []
    pairs = []
    for idx, item in enumerate(session.lesson.items):
        tries = session.attempts.get(idx, [])
        if tries:
            last = tries[-1]
            visual_ok = last.visual.matched
            technique_ok = bool(last.technique and last.technique.overall_pass)
            pairs.append((visual_ok, last.technique))
        else:
            visual_ok = technique_ok = False
            pairs.append((False, None))
        per_item.append((item, visual_ok, technique_ok, len(tries)))
    metrics = technique_metrics(pairs)
    return ReportCard(tuple(per_item), metrics["visualAccuracy"], metrics["techniqueAmongVisual"])
