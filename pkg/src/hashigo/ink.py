"""Canonical ink data model: timestamped strokes, JSON serialization, geometry helpers.

Coordinates follow the screen convention (y grows downward). Timestamps are
milliseconds relative to the start of the sketch.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


class InkError(ValueError):
    """Malformed or invalid ink data."""


@dataclass(frozen=True)
class InkPoint:
    x: float
    y: float
    t: int

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InkError(f"non-finite coordinate ({self.x}, {self.y})")
        if not isinstance(self.t, int) or isinstance(self.t, bool) or self.t < 0:
            raise InkError(f"timestamp must be a non-negative integer, got {self.t!r}")


@dataclass(frozen=True)
class InkStroke:
    id: int
    points: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) < 2:
            raise InkError(f"stroke {self.id}: needs at least 2 points, got {len(self.points)}")
        for i in range(1, len(self.points)):
            if self.points[i].t < self.points[i - 1].t:
                raise InkError(
                    f"stroke {self.id}: timestamps decrease at point {i} "
                    f"({self.points[i - 1].t} -> {self.points[i].t})"
                )

    @property
    def t0(self) -> int:
        return self.points[0].t


@dataclass(frozen=True)
class Sketch:
    strokes: tuple = field(default=())
    canvas_width: float = 0.0
    canvas_height: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "strokes", tuple(self.strokes))
        for i, s in enumerate(self.strokes):
            if s.id != i:
                raise InkError(f"stroke ids must be dense 0..n-1 in pen-down order; got id {s.id} at position {i}")
        order = sorted(self.strokes, key=lambda s: (s.t0, s.id))
        if [s.id for s in order] != [s.id for s in self.strokes]:
            raise InkError("strokes are not in ascending order of first timestamp")

    def point_count(self) -> int:
        return sum(len(s.points) for s in self.strokes)


def load_ink(data: bytes | str) -> Sketch:
    """Parse the JSON ink file format into a validated Sketch."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise InkError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict) or "canvas" not in doc or "strokes" not in doc:
        raise InkError("ink file must be an object with 'canvas' and 'strokes'")
    canvas = doc["canvas"]
    try:
        w = float(canvas["w"])
        h = float(canvas["h"])
    except (TypeError, KeyError) as e:
        raise InkError("canvas must carry numeric 'w' and 'h'") from e
    strokes = []
    for si, raw in enumerate(doc["strokes"]):
        if not isinstance(raw, dict) or "points" not in raw:
            raise InkError(f"stroke {si}: not an object with 'points'")
        pts = []
        for pi, trip in enumerate(raw["points"]):
            if not isinstance(trip, (list, tuple)) or len(trip) != 3:
                raise InkError(f"stroke {si} point {pi}: expected [x,y,t] triplet")
            x, y, t = trip
            if isinstance(t, float) and not t.is_integer():
                raise InkError(f"stroke {si} point {pi}: timestamp must be integral")
            try:
                pts.append(InkPoint(float(x), float(y), int(t)))
            except (InkError, TypeError, ValueError) as e:
                raise InkError(f"stroke {si} point {pi}: {e}") from e
        try:
            strokes.append(InkStroke(int(raw.get("id", si)), tuple(pts)))
        except InkError as e:
            raise InkError(str(e)) from e
    try:
        return Sketch(tuple(strokes), w, h)
    except InkError:
        raise


def save_ink(sketch: Sketch) -> bytes:
    """Canonical serialization: compact JSON, fields in the documented order."""
    doc = {
        "canvas": {"w": sketch.canvas_width, "h": sketch.canvas_height},
        "strokes": [
            {"id": s.id, "points": [[p.x, p.y, p.t] for p in s.points]}
            for s in sketch.strokes
        ],
    }
    return json.dumps(doc, separators=(",", ":")).encode("utf-8")


def bounding_box(sketch: Sketch) -> tuple:
    """Smallest axis-aligned (min_x, min_y, max_x, max_y) rectangle covering all samples."""
    pts = [p for s in sketch.strokes for p in s.points]
    if not pts:
        raise InkError("cannot compute bounding box of an empty sketch")
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    return (min(xs), min(ys), max(xs), max(ys))


def box_diagonal(sketch: Sketch) -> float:
    x0, y0, x1, y1 = bounding_box(sketch)
    return math.hypot(x1 - x0, y1 - y0)
