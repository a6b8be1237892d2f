"""Written-technique critique: stroke order, direction, count, element sequence.

Runs only after a successful visual match. The description's `stroke<k>` and
`point<k>` aliases enumerate the canonical technique; a correct performance
lists all enumerated labels in ascending temporal order.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .dsl import (
    ShapeDescription,
    ShapeLibrary,
    point_aliases,
    resolve_ref,
    stroke_aliases,
    flatten,
)
from .constraints import LINE, POINT
from .ink import Sketch
from .recognizer import A_IS_P1, Binding


class PlanError(ValueError):
    pass


class CritiqueError(RuntimeError):
    """Plan and binding disagree; indicates a validation gap upstream."""


@dataclass(frozen=True)
class TechniquePlan:
    stroke_ordinals: tuple  # (ordinal, tuple of line paths in declared sub-order)
    point_sequence: tuple  # (ordinal, line path, 'p1'|'p2')
    element_order: tuple  # sub-shape instance paths, canonical writing order

    @property
    def stroke_count(self) -> int:
        return len(self.stroke_ordinals)

    def ordinal_of(self, line_path: str) -> int | None:
        for k, paths in self.stroke_ordinals:
            if line_path in paths:
                return k
        return None


@dataclass(frozen=True)
class TechniqueReport:
    stroke_count_ok: bool
    order_violations: tuple  # (expected ordinal, drawn position)
    direction_violations: tuple  # (ordinal, expected landmark first, observed landmark first)
    indeterminate_directions: tuple  # ordinals whose roles the constraints never pinned
    element_violations: tuple  # (element path, offending timestamps)
    overall_pass: bool


def build_plan(d: ShapeDescription, lib: ShapeLibrary) -> TechniquePlan:
    """Extract the canonical technique from a description's enumeration aliases;
    compound shapes inherit their elements' plans with offset ordinals."""
    strokes = stroke_aliases(d)
    points = point_aliases(d)

    if strokes:
        ordinals = sorted(strokes)
        if ordinals != list(range(1, len(ordinals) + 1)):
            raise PlanError(f"{d.name}: stroke ordinals must be dense from 1, got {ordinals}")
        stroke_entries = []
        covered = set()
        for k in ordinals:
            paths = []
            for target in strokes[k]:
                resolved = resolve_ref(d, lib, target)
                if resolved[0] != LINE:
                    raise PlanError(f"{d.name}: stroke{k} must alias a line, got {target}")
                paths.append(resolved[1])
            stroke_entries.append((k, tuple(paths)))
            covered.update(paths)
        flat = flatten(d, lib)
        missing = [ln for ln in flat.lines if ln not in covered]
        if missing:
            raise PlanError(f"{d.name}: stroke aliases leave lines unenumerated: {', '.join(missing)}")

        point_entries = []
        if points:
            p_ordinals = sorted(points)
            if p_ordinals != list(range(1, len(p_ordinals) + 1)):
                raise PlanError(f"{d.name}: point ordinals must be dense from 1, got {p_ordinals}")
            for j in p_ordinals:
                resolved = resolve_ref(d, lib, points[j])
                if resolved[0] != POINT or resolved[2] == "center":
                    raise PlanError(
                        f"{d.name}: point{j} must alias a timestamped endpoint (p1/p2), got {points[j]}"
                    )
                point_entries.append((j, resolved[1], resolved[2]))
        element_order = tuple(c.instance_name for c in d.sub_components())
        return TechniquePlan(tuple(stroke_entries), tuple(point_entries), element_order)

    subs = d.sub_components()
    if not subs or d.line_components():
        raise PlanError(f"{d.name}: no stroke<k> aliases and no pure element composition to inherit from")

    stroke_entries = []
    point_entries = []
    stroke_offset = 0
    point_offset = 0
    for comp in subs:
        sub_plan = build_plan(lib[comp.type_name], lib)
        for k, paths in sub_plan.stroke_ordinals:
            stroke_entries.append((k + stroke_offset, tuple(f"{comp.instance_name}.{p}" for p in paths)))
        for j, path, mark in sub_plan.point_sequence:
            point_entries.append((j + point_offset, f"{comp.instance_name}.{path}", mark))
        stroke_offset += sub_plan.stroke_count
        point_offset += len(sub_plan.point_sequence)
    element_order = tuple(c.instance_name for c in subs)
    return TechniquePlan(tuple(stroke_entries), tuple(point_entries), element_order)


def _lis_keep(keys) -> set:
    """Indices of a longest strictly increasing subsequence (patience sorting);
    everything outside it is a minimal set of order offenders."""
    tails = []  # (key, index)
    parent = {}
    tail_keys = []
    for i, key in enumerate(keys):
        pos = bisect.bisect_left(tail_keys, key)
        parent[i] = tails[pos - 1][1] if pos > 0 else None
        if pos == len(tail_keys):
            tail_keys.append(key)
            tails.append((key, i))
        else:
            tail_keys[pos] = key
            tails[pos] = (key, i)
    keep = set()
    node = tails[-1][1] if tails else None
    while node is not None:
        keep.add(node)
        node = parent[node]
    return keep


def critique(binding: Binding, plan: TechniquePlan, sketch: Sketch) -> TechniqueReport:
    """Judge the drawn technique of a visually matched sketch against the plan."""
    for _, paths in plan.stroke_ordinals:
        for p in paths:
            if p not in binding.line_assignments:
                raise CritiqueError(f"plan line {p!r} is not bound")

    # (1) stroke order: ordinal start keys must ascend; ties break by (strokeId, subIndex)
    keys = []
    sub_order_broken = []
    for k, paths in plan.stroke_ordinals:
        prims = [binding.primitive_for(p) for p in paths]
        keys.append(min((pr.t_a, pr.stroke_id, pr.sub_index) for pr in prims))
        if len(prims) > 1:
            if len({pr.stroke_id for pr in prims}) != 1 or [pr.sub_index for pr in prims] != sorted(
                pr.sub_index for pr in prims
            ):
                sub_order_broken.append(k)

    ranks = {i: r + 1 for r, i in enumerate(sorted(range(len(keys)), key=lambda i: keys[i]))}
    keep = _lis_keep(keys)
    order_violations = []
    for i in range(len(keys)):
        k = plan.stroke_ordinals[i][0]
        if i not in keep or k in sub_order_broken:
            order_violations.append((k, ranks[i]))

    # (2) stroke direction via the enumerated point sequence
    direction_violations = []
    indeterminate = []
    prev = None  # (key, line_path, mark)
    for j, path, mark in sorted(plan.point_sequence):
        prim, orient = binding.line_assignments[path]
        if not binding.role_pinned.get(path, False):
            k = plan.ordinal_of(path)
            if k is not None and k not in indeterminate:
                indeterminate.append(k)
            continue
        first_is_p1 = orient == A_IS_P1
        ts = prim.t_a if (mark == "p1") == first_is_p1 else prim.t_b
        key = (ts, prim.stroke_id, prim.sub_index)
        if prev is not None and key < prev[0]:
            if path == prev[1]:
                k = plan.ordinal_of(path)
                if all(v[0] != k for v in direction_violations):
                    direction_violations.append((k, prev[2], mark))
            # cross-stroke descents are order errors, already reported above
        prev = (key, path, mark)

    # (3) pen stroke count
    stroke_count_ok = len(sketch.strokes) == plan.stroke_count

    # (4) element sequence: each element must finish before the next begins
    element_violations = []
    element_times = []
    for element in plan.element_order:
        times = []
        for _, paths in plan.stroke_ordinals:
            for p in paths:
                if p.startswith(element + "."):
                    prim = binding.primitive_for(p)
                    times.extend([prim.t_a, prim.t_b])
        element_times.append((element, times))
    for (e1, t1), (e2, t2) in zip(element_times, element_times[1:]):
        if t1 and t2 and max(t1) >= min(t2):
            element_violations.append((e2, tuple(sorted({max(t1), min(t2)}))))

    overall = (
        stroke_count_ok
        and not order_violations
        and not direction_violations
        and not element_violations
    )
    return TechniqueReport(
        stroke_count_ok,
        tuple(order_violations),
        tuple(direction_violations),
        tuple(indeterminate),
        tuple(element_violations),
        overall,
    )


def technique_metrics(reports) -> dict:
    """Aggregate (visualMatched, TechniqueReport|None) pairs into the two study
    metrics: visual accuracy, and technique correctness among visual matches."""
    total = len(reports)
    matched = [r for ok, r in reports if ok]
    out = {
        "visualAccuracy": (len(matched) / total) if total else None,
        "techniqueAmongVisual": None,
    }
    if matched:
        out["techniqueAmongVisual"] = sum(1 for r in matched if r and r.overall_pass) / len(matched)
    return out
