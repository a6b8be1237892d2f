"""Visual structure recognition: match drawn primitives against a shape description.

The search assigns description lines (sub-shapes flattened depth-first) to
drawn primitives injectively, trying both endpoint-role orientations per line.
Drawing order and direction never affect the verdict; technique is judged
separately by the critic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constraints import LINE, Landmark, OrientedLine, ToleranceProfile, eval_predicate
from .dsl import FlatShape, ShapeDescription, ShapeLibrary, flatten, load_library
from .ink import Sketch
from .segmenter import (
    SegmenterConfig,
    SegmentationResult,
    StrokeSegmenter,
    resegment_with_forced_count,
    segment,
    InfeasibleSplitError,
)

A_IS_P1 = "aIsP1"
B_IS_P1 = "bIsP1"


@dataclass(frozen=True)
class Binding:
    line_assignments: dict  # line path -> (DrawnPrimitive, orientation)
    sub_shape_spans: dict  # sub-shape instance path -> frozenset of primitive keys
    role_pinned: dict  # line path -> bool

    def primitive_for(self, path: str):
        return self.line_assignments[path][0]

    def orientation_for(self, path: str) -> str:
        return self.line_assignments[path][1]


@dataclass(frozen=True)
class VisualVerdict:
    matched: bool
    binding: Binding | None = None
    failure: tuple | None = None  # (kind, detail list)

    @property
    def failure_kind(self):
        return self.failure[0] if self.failure else None


def _oriented(prim, orientation: str) -> OrientedLine:
    first = Landmark(prim.a.x, prim.a.y, prim.a.t)
    last = Landmark(prim.b.x, prim.b.y, prim.b.t)
    return OrientedLine(first, last) if orientation == A_IS_P1 else OrientedLine(last, first)


def _resolve_arg(arg, assignment: dict):
    if arg[0] == LINE:
        prim, orient = assignment[arg[1]]
        return _oriented(prim, orient)
    _, path, mark = arg
    prim, orient = assignment[path]
    line = _oriented(prim, orient)
    if mark == "p1":
        return line.p1
    if mark == "p2":
        return line.p2
    return line.center


def primitives_box_diag(primitives) -> float:
    xs, ys = [], []
    for p in primitives:
        xs += [p.a.x, p.b.x]
        ys += [p.a.y, p.b.y]
    if not xs:
        return 0.0
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def _constraint_text(fc) -> str:
    def arg_text(a):
        return a[1] if a[0] == LINE else f"{a[1]}.{a[2]}"

    return f"{fc.predicate}(" + ", ".join(arg_text(a) for a in fc.args) + ")"


class _Searcher:
    def __init__(self, flat: FlatShape, primitives, tol: ToleranceProfile, box_diag: float):
        self.flat = flat
        self.primitives = sorted(primitives, key=lambda p: p.key)
        self.tol = tol
        self.diag = box_diag
        self.lines = list(flat.lines)
        # constraint -> set of line paths it touches; checked as soon as all are assigned
        self.by_last: dict = {line: [] for line in self.lines}
        order = {line: i for i, line in enumerate(self.lines)}
        for fc in flat.constraints:
            touched = {a[1] for a in fc.args}
            last = max(touched, key=lambda p: order[p])
            self.by_last[last].append(fc)
        self.best_depth = -1
        self.deepest_misses: list = []

    def solutions(self, forced: dict | None = None):
        """Yield satisfying complete assignments deterministically. `forced`
        optionally pins (line path -> orientation)."""
        forced = forced or {}
        assignment: dict = {}
        used: set = set()

        def extend(depth):
            if depth == len(self.lines):
                yield dict(assignment)
                return
            line = self.lines[depth]
            orients = (forced[line],) if line in forced else (A_IS_P1, B_IS_P1)
            for prim in self.primitives:
                if prim.key in used:
                    continue
                for orient in orients:
                    assignment[line] = (prim, orient)
                    ok = True
                    for fc in self.by_last[line]:
                        if not eval_predicate(
                            fc.predicate,
                            [_resolve_arg(a, assignment) for a in fc.args],
                            self.tol,
                            self.diag,
                        ):
                            ok = False
                            if depth > self.best_depth:
                                self.best_depth = depth
                                self.deepest_misses = [_constraint_text(fc)]
                            elif depth == self.best_depth:
                                text = _constraint_text(fc)
                                if text not in self.deepest_misses:
                                    self.deepest_misses.append(text)
                            break
                    if ok:
                        used.add(prim.key)
                        yield from extend(depth + 1)
                        used.discard(prim.key)
                    del assignment[line]

        yield from extend(0)


def recognize(primitives, target, lib: ShapeLibrary, tol: ToleranceProfile = ToleranceProfile()) -> VisualVerdict:
    """Order- and direction-independent structural match of primitives to `target`."""
    if isinstance(target, str):
        target = lib[target]
    flat = flatten(target, lib)
    if len(primitives) != len(flat.lines):
        return VisualVerdict(
            False,
            failure=("strokeCountMismatch", [f"expected {len(flat.lines)} primitives, drew {len(primitives)}"]),
        )
    diag = primitives_box_diag(primitives)
    searcher = _Searcher(flat, primitives, tol, diag)
    first = next(searcher.solutions(), None)
    if first is None:
        return VisualVerdict(False, failure=("noConsistentAssignment", list(searcher.deepest_misses)))

    role_pinned = {}
    for line in flat.lines:
        flipped = B_IS_P1 if first[line][1] == A_IS_P1 else A_IS_P1
        alt = next(_Searcher(flat, primitives, tol, diag).solutions(forced={line: flipped}), None)
        role_pinned[line] = alt is None

    spans = {
        path: frozenset(first[line][0].key for line in lines)
        for path, lines in flat.sub_spans.items()
    }
    return VisualVerdict(True, binding=Binding(dict(first), spans, role_pinned))


def classify(primitives, lib: ShapeLibrary, tol: ToleranceProfile = ToleranceProfile()) -> list:
    """All library shapes the primitives satisfy, larger shapes first, then by name."""
    matches = []
    for name in sorted(lib.descriptions):
        verdict = recognize(primitives, name, lib, tol)
        if verdict.matched:
            matches.append((len(flatten(lib[name], lib).lines), name))
    matches.sort(key=lambda m: (-m[0], m[1]))
    return [name for _, name in matches]


def incremental_status(primitives_so_far, target, lib: ShapeLibrary,
                       tol: ToleranceProfile = ToleranceProfile()) -> str:
    """Pen-up status: 'complete', 'consistent' (some partial assignment works),
    or 'inconsistent'."""
    if isinstance(target, str):
        target = lib[target]
    flat = flatten(target, lib)
    prims = sorted(primitives_so_far, key=lambda p: p.key)
    if not prims:
        return "consistent"
    if len(prims) == len(flat.lines) and recognize(prims, target, lib, tol).matched:
        return "complete"
    if len(prims) > len(flat.lines):
        return "inconsistent"
    diag = primitives_box_diag(prims)

    order = {line: i for i, line in enumerate(flat.lines)}
    assignment: dict = {}
    used_lines: set = set()

    def constraints_ready(line):
        ready = []
        for fc in flat.constraints:
            touched = {a[1] for a in fc.args}
            if line in touched and touched <= (used_lines | {line}):
                ready.append(fc)
        return ready

    def extend(i):
        if i == len(prims):
            return True
        prim = prims[i]
        for line in flat.lines:
            if line in used_lines:
                continue
            for orient in (A_IS_P1, B_IS_P1):
                assignment[line] = (prim, orient)
                ok = all(
                    eval_predicate(fc.predicate, [_resolve_arg(a, assignment) for a in fc.args], tol, diag)
                    for fc in constraints_ready(line)
                )
                if ok:
                    used_lines.add(line)
                    if extend(i + 1):
                        return True
                    used_lines.discard(line)
                del assignment[line]
        return False

    return "consistent" if extend(0) else "inconsistent"


def recognize_with_recovery(sketch: Sketch, target, lib: ShapeLibrary,
                            tol: ToleranceProfile = ToleranceProfile(),
                            seg_cfg: SegmenterConfig = SegmenterConfig()):
    """Segment then recognize; on an off-by-one primitive count, retry once
    after forcing a different split count on the worst-fitting stroke.

    Returns (VisualVerdict, SegmentationResult)."""
    if isinstance(target, str):
        target = lib[target]
    seg = segment(sketch, seg_cfg)
    verdict = recognize(seg.primitives, target, lib, tol)
    if verdict.matched or verdict.failure_kind != "strokeCountMismatch":
        return verdict, seg

    needed = len(flatten(target, lib).lines)
    have = len(seg.primitives)
    if abs(needed - have) != 1 or not sketch.strokes:
        return verdict, seg

    counts = {s.id: sum(1 for p in seg.primitives if p.stroke_id == s.id) for s in sketch.strokes}
    if needed > have:
        candidates = [s for s in sketch.strokes]
        delta = 1
    else:
        candidates = [s for s in sketch.strokes if counts[s.id] >= 2]
        delta = -1
    if not candidates:
        return verdict, seg
    worst = max(candidates, key=lambda s: (seg.fit_error_per_stroke[s.id], -s.id))

    try:
        replacement = resegment_with_forced_count(worst, counts[worst.id] + delta, seg_cfg)
    except InfeasibleSplitError:
        return verdict, seg

    primitives = [p for p in seg.primitives if p.stroke_id != worst.id] + list(replacement)
    primitives.sort(key=lambda p: p.key)
    retry = recognize(primitives, target, lib, tol)
    if retry.matched:
        corners = list(seg.corners_per_stroke)
        errors = list(seg.fit_error_per_stroke)
        seg2 = SegmentationResult(tuple(primitives), tuple(corners), max(errors), tuple(errors))
        return retry, seg2
    return verdict, seg


class KanjiRecognizer:
    """Estimator-style wrapper: fit on a shape library, predict shape names."""

    def __init__(self, tolerance_profile="default", angle_tol_deg=None,
                 pos_tol_frac=None, size_ratio_min=None, segmenter=None):
        self.tolerance_profile = tolerance_profile
        self.angle_tol_deg = angle_tol_deg
        self.pos_tol_frac = pos_tol_frac
        self.size_ratio_min = size_ratio_min
        self.segmenter = segmenter

    def get_params(self, deep=True):
        return {
            "tolerance_profile": self.tolerance_profile,
            "angle_tol_deg": self.angle_tol_deg,
            "pos_tol_frac": self.pos_tol_frac,
            "size_ratio_min": self.size_ratio_min,
            "segmenter": self.segmenter,
        }

    def set_params(self, **params):
        for key, value in params.items():
            if key not in self.get_params():
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    @property
    def tolerance(self) -> ToleranceProfile:
        from .constraints import PROFILES

        base = PROFILES[self.tolerance_profile]
        return ToleranceProfile(
            self.angle_tol_deg if self.angle_tol_deg is not None else base.angle_tol_deg,
            self.pos_tol_frac if self.pos_tol_frac is not None else base.pos_tol_frac,
            self.size_ratio_min if self.size_ratio_min is not None else base.size_ratio_min,
        )

    def fit(self, shapes, y=None):
        """`shapes` is a directory of .shape files or a ShapeLibrary."""
        self.library_ = shapes if isinstance(shapes, ShapeLibrary) else load_library(shapes)
        return self

    def _check_fitted(self):
        if not hasattr(self, "library_"):
            raise RuntimeError("KanjiRecognizer is not fitted; call fit() with a shape library first")

    def predict(self, sketches) -> list:
        """Best matching shape name (or None) for each sketch."""
        self._check_fitted()
        seg = self.segmenter or StrokeSegmenter()
        out = []
        for sketch in sketches:
            names = classify(seg.transform(sketch).primitives, self.library_, self.tolerance)
            out.append(names[0] if names else None)
        return out
