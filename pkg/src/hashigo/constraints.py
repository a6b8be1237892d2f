"""Geometric constraint predicates over oriented line primitives and landmarks.

All positional tolerances are expressed as a fraction of the sketch bounding
box diagonal, so every predicate is invariant under uniform translation and
uniform positive scaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ConstraintError(ValueError):
    """Unknown predicate, wrong arity, or an argument of the wrong kind."""


LINE = "line"
POINT = "point"

# predicate name -> (arity, arg kinds)
_PREDICATES = {
    "Horizontal": (1, (LINE,)),
    "Vertical": (1, (LINE,)),
    "PosSlope": (1, (LINE,)),
    "NegSlope": (1, (LINE,)),
    "NotHorizontal": (1, (LINE,)),
    "NotVertical": (1, (LINE,)),
    "NotPosSlope": (1, (LINE,)),
    "NotNegSlope": (1, (LINE,)),
    "LeftOf": (2, (POINT, POINT)),
    "RightOf": (2, (POINT, POINT)),
    "Above": (2, (POINT, POINT)),
    "Below": (2, (POINT, POINT)),
    "SameX": (2, (POINT, POINT)),
    "SameY": (2, (POINT, POINT)),
    "Near": (2, (POINT, POINT)),
    "SameSize": (2, (LINE, LINE)),
    "Longer": (2, (LINE, LINE)),
    "Intersects": (2, (LINE, LINE)),
}

# predicates whose truth can flip when a line's endpoint roles are swapped
ORDER_SENSITIVE = {"LeftOf", "RightOf", "Above", "Below"}


def predicate_table() -> list:
    """Stable listing of (name, arity, argKinds) for every supported predicate."""
    return [(name, arity, kinds) for name, (arity, kinds) in _PREDICATES.items()]


def predicate_signature(name: str):
    try:
        return _PREDICATES[name]
    except KeyError:
        raise ConstraintError(f"unknown constraint predicate {name!r}") from None


@dataclass(frozen=True)
class Landmark:
    x: float
    y: float
    t: int | None = None  # center landmarks carry no timestamp


@dataclass(frozen=True)
class OrientedLine:
    """A drawn segment with endpoint roles resolved: p1/p2 per the binding."""

    p1: Landmark
    p2: Landmark

    @property
    def length(self) -> float:
        return math.hypot(self.p2.x - self.p1.x, self.p2.y - self.p1.y)

    @property
    def center(self) -> Landmark:
        return Landmark((self.p1.x + self.p2.x) / 2, (self.p1.y + self.p2.y) / 2, None)


@dataclass(frozen=True)
class ToleranceProfile:
    angle_tol_deg: float = 20.0
    pos_tol_frac: float = 0.08
    size_ratio_min: float = 0.55

    def __post_init__(self):
        if not (0 < self.angle_tol_deg < 45):
            raise ConstraintError(f"angle_tol_deg must be in (0, 45), got {self.angle_tol_deg}")
        if not (0 < self.pos_tol_frac < 0.5):
            raise ConstraintError(f"pos_tol_frac must be in (0, 0.5), got {self.pos_tol_frac}")
        if not (0 < self.size_ratio_min <= 1):
            raise ConstraintError(f"size_ratio_min must be in (0, 1], got {self.size_ratio_min}")


PROFILES = {
    "default": ToleranceProfile(20.0, 0.08, 0.55),
    "strict": ToleranceProfile(12.0, 0.05, 0.7),
}


def _acute_angle_deg(line: OrientedLine) -> float:
    """Undirected angle from the +x axis, folded into [0, 90]."""
    dx = line.p2.x - line.p1.x
    dy = line.p2.y - line.p1.y
    theta = math.degrees(math.atan2(dy, dx)) % 180.0
    return min(theta, 180.0 - theta)


def _slope_sense(line: OrientedLine) -> int:
    """+1 if the segment ascends left-to-right in screen space, -1 if it
    descends, 0 if vertical."""
    a, b = line.p1, line.p2
    if a.x == b.x:
        return 0
    left, right = (a, b) if a.x < b.x else (b, a)
    if right.y < left.y:
        return 1
    if right.y > left.y:
        return -1
    return 0


def _segments_distance(l1: OrientedLine, l2: OrientedLine) -> float:
    def clamp(v, lo, hi):
        return max(lo, min(hi, v))

    def point_seg_dist(px, py, ax, ay, bx, by):
        vx, vy = bx - ax, by - ay
        ll = vx * vx + vy * vy
        if ll == 0:
            return math.hypot(px - ax, py - ay)
        t = clamp(((px - ax) * vx + (py - ay) * vy) / ll, 0.0, 1.0)
        return math.hypot(px - (ax + t * vx), py - (ay + t * vy))

    a1, b1 = (l1.p1.x, l1.p1.y), (l1.p2.x, l1.p2.y)
    a2, b2 = (l2.p1.x, l2.p1.y), (l2.p2.x, l2.p2.y)

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    d1, d2 = orient(a1, b1, a2), orient(a1, b1, b2)
    d3, d4 = orient(a2, b2, a1), orient(a2, b2, b1)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return 0.0
    return min(
        point_seg_dist(*a2, *a1, *b1),
        point_seg_dist(*b2, *a1, *b1),
        point_seg_dist(*a1, *a2, *b2),
        point_seg_dist(*b1, *a2, *b2),
    )


def eval_predicate(name: str, args: list, tol: ToleranceProfile, box_diag: float) -> bool:
    """Evaluate one predicate over resolved arguments (Landmark / OrientedLine)."""
    arity, kinds = predicate_signature(name)
    if len(args) != arity:
        raise ConstraintError(f"{name} expects {arity} argument(s), got {len(args)}")
    for i, (arg, kind) in enumerate(zip(args, kinds)):
        if kind == LINE and not isinstance(arg, OrientedLine):
            raise ConstraintError(f"{name} argument {i + 1} must be a line")
        if kind == POINT and not isinstance(arg, Landmark):
            raise ConstraintError(f"{name} argument {i + 1} must be a point")

    eps = tol.pos_tol_frac * box_diag

    if name == "Horizontal":
        return _acute_angle_deg(args[0]) <= tol.angle_tol_deg
    if name == "Vertical":
        return abs(_acute_angle_deg(args[0]) - 90.0) <= tol.angle_tol_deg
    if name == "PosSlope":
        phi = _acute_angle_deg(args[0])
        return tol.angle_tol_deg < phi < 90.0 - tol.angle_tol_deg and _slope_sense(args[0]) == 1
    if name == "NegSlope":
        phi = _acute_angle_deg(args[0])
        return tol.angle_tol_deg < phi < 90.0 - tol.angle_tol_deg and _slope_sense(args[0]) == -1
    if name.startswith("Not"):
        return not eval_predicate(name[3:], args, tol, box_diag)

    if name == "LeftOf":
        return args[0].x <= args[1].x - eps
    if name == "RightOf":
        return args[0].x >= args[1].x + eps
    if name == "Above":
        return args[0].y <= args[1].y - eps
    if name == "Below":
        return args[0].y >= args[1].y + eps
    if name == "SameX":
        return abs(args[0].x - args[1].x) <= eps
    if name == "SameY":
        return abs(args[0].y - args[1].y) <= eps
    if name == "Near":
        return math.hypot(args[0].x - args[1].x, args[0].y - args[1].y) <= eps

    if name == "SameSize":
        l1, l2 = args[0].length, args[1].length
        hi = max(l1, l2)
        if hi == 0:
            return True
        return min(l1, l2) / hi >= tol.size_ratio_min
    if name == "Longer":
        return args[0].length >= args[1].length / tol.size_ratio_min
    if name == "Intersects":
        return _segments_distance(args[0], args[1]) <= eps

    raise ConstraintError(f"unknown constraint predicate {name!r}")


def eval_constraint(constraint, resolve, tol: ToleranceProfile, box_diag: float) -> bool:
    """Evaluate a parsed constraint declaration through a RefPath resolver.

    `constraint` needs `.predicate` and `.args`; `resolve` maps each RefPath
    to a Landmark or OrientedLine.
    """
    return eval_predicate(constraint.predicate, [resolve(a) for a in constraint.args], tol, box_diag)
