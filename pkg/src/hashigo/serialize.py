"""JSON views of engine results, shared by the CLI, batch eval, and the service."""

from __future__ import annotations

import json

from .critic import TechniqueReport
from .ink import Sketch
from .recognizer import VisualVerdict
from .tutor import Attempt, Critique, ReportCard


def sketch_to_dict(sketch: Sketch) -> dict:
    return {
        "canvas": {"w": sketch.canvas_width, "h": sketch.canvas_height},
        "strokes": [{"id": s.id, "points": [[p.x, p.y, p.t] for p in s.points]} for s in sketch.strokes],
    }


def verdict_to_dict(v: VisualVerdict) -> dict:
    out: dict = {"matched": v.matched}
    if v.binding is not None:
        out["binding"] = {
            "lineAssignments": {
                path: {"strokeId": prim.stroke_id, "subIndex": prim.sub_index, "orientation": orient}
                for path, (prim, orient) in sorted(v.binding.line_assignments.items())
            },
            "rolePinned": dict(sorted(v.binding.role_pinned.items())),
        }
    if v.failure is not None:
        out["failure"] = {"kind": v.failure[0], "detail": list(v.failure[1])}
    return out


def technique_to_dict(r: TechniqueReport | None) -> dict | None:
    if r is None:
        return None
    return {
        "strokeCountOk": r.stroke_count_ok,
        "orderViolations": [list(v) for v in r.order_violations],
        "directionViolations": [list(v) for v in r.direction_violations],
        "indeterminateDirections": list(r.indeterminate_directions),
        "elementViolations": [[e, list(t)] for e, t in r.element_violations],
        "overallPass": r.overall_pass,
    }


def critique_to_dict(c: Critique) -> dict:
    return {
        "responsePanel": c.response_panel,
        "critiquePanel": list(c.critique_panel),
        "commentPanel": c.comment_panel,
        "nextItem": {"shapeName": c.next_item[0], "glyph": c.next_item[1]} if c.next_item else None,
    }


def report_card_to_dict(r: ReportCard) -> dict:
    return {
        "perItem": [
            {
                "shapeName": item.shape_name,
                "glyph": item.display_glyph,
                "visualOk": visual_ok,
                "techniqueOk": technique_ok,
                "attemptsUsed": attempts,
            }
            for item, visual_ok, technique_ok, attempts in r.per_item
        ],
        "visualAccuracy": r.visual_accuracy,
        "techniqueAmongVisual": r.technique_among_visual,
    }


def attempt_to_record(attempt: Attempt, shape_name: str, fingerprint: str) -> dict:
    """One self-contained append-only log record (a single JSON line)."""
    return {
        "sessionId": attempt.session_id,
        "itemIndex": attempt.item_index,
        "shapeName": shape_name,
        "ink": sketch_to_dict(attempt.sketch),
        "visual": verdict_to_dict(attempt.visual),
        "technique": technique_to_dict(attempt.technique),
        "timestampUTC": attempt.timestamp_utc,
        "configFingerprint": fingerprint,
    }


def dumps_canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
