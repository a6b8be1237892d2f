"""Fragment drawn strokes into line primitives via speed/curvature corner finding.

Every threshold that touches geometry is expressed relative to the sketch
bounding box diagonal, so segmentation commutes with uniform translation and
scaling of the ink.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .ink import InkStroke, Sketch, box_diagonal


class SegmenterError(ValueError):
    pass


class DegenerateStrokeError(SegmenterError):
    pass


class InfeasibleSplitError(SegmenterError):
    pass


@dataclass(frozen=True)
class SegmenterConfig:
    smooth_window: int = 5
    speed_ratio: float = 0.9
    curvature_min: float = 0.75  # rad per box-diagonal-percent of arc length
    fit_tol_frac: float = 0.05
    min_seg_len_frac: float = 0.03

    def __post_init__(self):
        if self.smooth_window < 1:
            raise SegmenterError("smooth_window must be >= 1")
        for name in ("speed_ratio", "curvature_min", "fit_tol_frac", "min_seg_len_frac"):
            if getattr(self, name) <= 0:
                raise SegmenterError(f"{name} must be positive")

    @classmethod
    def from_mapping(cls, mapping: dict) -> "SegmenterConfig":
        kw = {}
        for key, attr, conv in (
            ("segmenter.smooth_window", "smooth_window", int),
            ("segmenter.speed_ratio", "speed_ratio", float),
            ("segmenter.curvature_min", "curvature_min", float),
            ("segmenter.fit_tol_frac", "fit_tol_frac", float),
            ("segmenter.min_seg_len_frac", "min_seg_len_frac", float),
        ):
            if key in mapping:
                kw[attr] = conv(mapping[key])
        return cls(**kw)


@dataclass(frozen=True)
class DrawnPrimitive:
    stroke_id: int
    sub_index: int
    a: object  # temporally first InkPoint
    b: object  # temporally last InkPoint
    center: tuple
    t_a: int
    t_b: int

    @classmethod
    def from_endpoints(cls, stroke_id: int, sub_index: int, a, b) -> "DrawnPrimitive":
        return cls(
            stroke_id,
            sub_index,
            a,
            b,
            ((a.x + b.x) / 2, (a.y + b.y) / 2),
            a.t,
            b.t,
        )

    @property
    def key(self) -> tuple:
        return (self.stroke_id, self.sub_index)

    @property
    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)


@dataclass(frozen=True)
class SegmentationResult:
    primitives: tuple
    corners_per_stroke: tuple  # tuple of tuples of sample indices, one per stroke
    fit_error: float
    fit_error_per_stroke: tuple = field(default=())


def _point_line_dist(px, py, ax, ay, bx, by) -> float:
    vx, vy = bx - ax, by - ay
    ll = math.hypot(vx, vy)
    if ll == 0:
        return math.hypot(px - ax, py - ay)
    return abs(vx * (py - ay) - vy * (px - ax)) / ll


def _chord_deviation(pts, i, j) -> float:
    """Max perpendicular deviation of samples i..j from the chord i-j."""
    a, b = pts[i], pts[j]
    worst = 0.0
    for k in range(i + 1, j):
        d = _point_line_dist(pts[k].x, pts[k].y, a.x, a.y, b.x, b.y)
        if d > worst:
            worst = d
    return worst


def _polyline_deviation(pts, corners) -> float:
    return max((_chord_deviation(pts, corners[i], corners[i + 1]) for i in range(len(corners) - 1)), default=0.0)


def _smooth(values, window) -> list:
    if window <= 1 or len(values) <= 2:
        return list(values)
    h = window // 2
    out = []
    for i in range(len(values)):
        lo, hi = max(0, i - h), min(len(values), i + h + 1)
        out.append(sum(values[lo:hi]) / (hi - lo))
    return out


def _unwrap(angles) -> list:
    out = [angles[0]] if angles else []
    for a in angles[1:]:
        prev = out[-1]
        delta = a - prev
        while delta > math.pi:
            delta -= 2 * math.pi
        while delta < -math.pi:
            delta += 2 * math.pi
        out.append(prev + delta)
    return out


def _corner_candidates(stroke: InkStroke, cfg: SegmenterConfig, diag: float):
    pts = stroke.points
    n = len(pts)
    dist = [math.hypot(pts[i + 1].x - pts[i].x, pts[i + 1].y - pts[i].y) for i in range(n - 1)]
    dt = [max(pts[i + 1].t - pts[i].t, 1) for i in range(n - 1)]
    speed = _smooth([d / t for d, t in zip(dist, dt)], cfg.smooth_window)
    theta = _smooth(_unwrap([math.atan2(pts[i + 1].y - pts[i].y, pts[i + 1].x - pts[i].x) for i in range(n - 1)]),
                    cfg.smooth_window)

    # per-sample speed: average of the adjoining segment speeds
    samp_speed = [(speed[i - 1] + speed[i]) / 2 for i in range(1, n - 1)]
    mean_speed = sum(speed) / len(speed)

    speed_corners = set()
    for idx, i in enumerate(range(1, n - 1)):
        v = samp_speed[idx]
        if v >= cfg.speed_ratio * mean_speed:
            continue
        left = samp_speed[idx - 1] if idx > 0 else speed[0]
        right = samp_speed[idx + 1] if idx < len(samp_speed) - 1 else speed[-1]
        if v < left and v <= right:
            speed_corners.add(i)

    h = max(1, cfg.smooth_window // 2)
    unit = diag / 100.0
    curv_corners = set()
    curv = {}
    for i in range(1, n - 1):
        lo = max(0, i - h)
        hi = min(n - 2, i + h - 1)
        arc = sum(dist[lo:hi + 1])
        if arc <= 0:
            continue
        curv[i] = abs(theta[hi] - theta[lo]) / (arc / unit)
    for i in range(1, n - 1):
        c = curv.get(i, 0.0)
        if c <= cfg.curvature_min:
            continue
        if c >= curv.get(i - 1, 0.0) and c > curv.get(i + 1, 0.0):
            curv_corners.add(i)

    return speed_corners, curv_corners


def _fit_stroke(stroke: InkStroke, cfg: SegmenterConfig, diag: float):
    """Hybrid corner selection: seed with speed∩curvature candidates, greedily
    add remaining candidates by error reduction, split at worst sample as a
    last resort, then merge corners closer than the minimum segment length."""
    pts = stroke.points
    n = len(pts)
    if n < 2 or all(p.x == pts[0].x and p.y == pts[0].y for p in pts[1:]):
        raise DegenerateStrokeError(f"stroke {stroke.id}: fewer than 2 distinct samples")

    tol = cfg.fit_tol_frac * diag
    min_len = cfg.min_seg_len_frac * diag

    speed_corners, curv_corners = _corner_candidates(stroke, cfg, diag)
    candidates = sorted(speed_corners | curv_corners)
    corners = sorted({0, n - 1} | (speed_corners & curv_corners))

    remaining = [c for c in candidates if c not in corners]
    while _polyline_deviation(pts, corners) > tol and remaining:
        current = _polyline_deviation(pts, corners)
        best = None
        for c in remaining:
            trial = sorted(corners + [c])
            reduction = current - _polyline_deviation(pts, trial)
            if best is None or reduction > best[0]:
                best = (reduction, c)
        corners = sorted(corners + [best[1]])
        remaining.remove(best[1])

    # candidates exhausted: recursive worst-point splits keep the fit invariant
    while _polyline_deviation(pts, corners) > tol:
        worst = None
        for e in range(len(corners) - 1):
            i, j = corners[e], corners[e + 1]
            a, b = pts[i], pts[j]
            for k in range(i + 1, j):
                d = _point_line_dist(pts[k].x, pts[k].y, a.x, a.y, b.x, b.y)
                if worst is None or d > worst[0]:
                    worst = (d, k)
        if worst is None:
            break
        corners = sorted(corners + [worst[1]])

    # merge interior corners that sit closer than the minimum segment length,
    # but never at the price of breaking the fit tolerance
    changed = True
    while changed:
        changed = False
        for e in range(len(corners) - 1):
            i, j = corners[e], corners[e + 1]
            if math.hypot(pts[j].x - pts[i].x, pts[j].y - pts[i].y) >= min_len:
                continue
            options = []
            if 0 < i:
                options.append(i)
            if j < n - 1:
                options.append(j)
            best = None
            for drop in options:
                trial = [c for c in corners if c != drop]
                dev = _polyline_deviation(pts, trial)
                if dev <= tol and (best is None or dev < best[0]):
                    best = (dev, drop)
            if best is not None:
                corners = [c for c in corners if c != best[1]]
                changed = True
                break

    # drop redundant interior corners: jitter can promote spurious seed
    # candidates, and the fit is defined as the fewest corners within tolerance
    changed = True
    while changed:
        changed = False
        best = None
        for c in corners[1:-1]:
            trial = [x for x in corners if x != c]
            dev = _polyline_deviation(pts, trial)
            if dev <= tol and (best is None or dev < best[0]):
                best = (dev, c)
        if best is not None:
            corners = [x for x in corners if x != best[1]]
            changed = True

    return corners, _polyline_deviation(pts, corners)


def segment(sketch: Sketch, cfg: SegmenterConfig = SegmenterConfig()) -> SegmentationResult:
    """Fragment every stroke of the sketch into line primitives."""
    if not sketch.strokes:
        return SegmentationResult((), (), 0.0, ())
    diag = box_diagonal(sketch)
    primitives = []
    corners_per_stroke = []
    errors = []
    for stroke in sketch.strokes:
        corners, err = _fit_stroke(stroke, cfg, diag)
        corners_per_stroke.append(tuple(corners))
        errors.append(err)
        for sub, (i, j) in enumerate(zip(corners, corners[1:])):
            primitives.append(DrawnPrimitive.from_endpoints(stroke.id, sub, stroke.points[i], stroke.points[j]))
    return SegmentationResult(tuple(primitives), tuple(corners_per_stroke), max(errors), tuple(errors))


def resegment_with_forced_count(stroke: InkStroke, k: int, cfg: SegmenterConfig = SegmenterConfig()) -> list:
    """Best k-edge polyline over the stroke's samples, minimizing max deviation;
    ties broken toward the lexicographically earliest corner indices."""
    if k < 1:
        raise InfeasibleSplitError("k must be >= 1")
    pts = stroke.points
    # collapse consecutive duplicate positions so every edge has extent
    idxs = [0]
    for i in range(1, len(pts)):
        if pts[i].x != pts[idxs[-1]].x or pts[i].y != pts[idxs[-1]].y:
            idxs.append(i)
    if len(idxs) < 2:
        raise DegenerateStrokeError(f"stroke {stroke.id}: fewer than 2 distinct samples")
    if k > len(idxs) - 1:
        raise InfeasibleSplitError(f"stroke {stroke.id}: cannot split {len(idxs)} distinct samples into {k} edges")

    m = len(idxs)
    err = [[0.0] * m for _ in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            err[a][b] = _chord_deviation(pts, idxs[a], idxs[b])

    INF = math.inf
    # tail[a][r] = min max deviation covering idxs[a..m-1] with r edges
    tail = [[INF] * (k + 1) for _ in range(m)]
    tail[m - 1][0] = 0.0
    for r in range(1, k + 1):
        for a in range(m - 2, -1, -1):
            best = INF
            for b in range(a + 1, m):
                if math.isinf(tail[b][r - 1]):
                    continue
                v = max(err[a][b], tail[b][r - 1])
                if v < best:
                    best = v
            tail[a][r] = best
    target = tail[0][k]

    corners = [0]
    a, r = 0, k
    while r > 0:
        for b in range(a + 1, m):
            if max(err[a][b], tail[b][r - 1]) <= target:
                corners.append(b)
                a, r = b, r - 1
                break
    sample_corners = [idxs[c] for c in corners]
    return [
        DrawnPrimitive.from_endpoints(stroke.id, sub, pts[i], pts[j])
        for sub, (i, j) in enumerate(zip(sample_corners, sample_corners[1:]))
    ]


class StrokeSegmenter:
    """Transformer-style wrapper: configure once, turn sketches into primitives."""

    def __init__(self, smooth_window=5, speed_ratio=0.9, curvature_min=0.75,
                 fit_tol_frac=0.05, min_seg_len_frac=0.03):
        self.smooth_window = smooth_window
        self.speed_ratio = speed_ratio
        self.curvature_min = curvature_min
        self.fit_tol_frac = fit_tol_frac
        self.min_seg_len_frac = min_seg_len_frac

    def get_params(self, deep=True):
        return {
            "smooth_window": self.smooth_window,
            "speed_ratio": self.speed_ratio,
            "curvature_min": self.curvature_min,
            "fit_tol_frac": self.fit_tol_frac,
            "min_seg_len_frac": self.min_seg_len_frac,
        }

    def set_params(self, **params):
        for key, value in params.items():
            if key not in self.get_params():
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def fit(self, X=None, y=None):
        return self

    @property
    def config(self) -> SegmenterConfig:
        return SegmenterConfig(**self.get_params())

    def transform(self, sketch: Sketch) -> SegmentationResult:
        return segment(sketch, self.config)
