"""Declarative shape description language: parsing, validation, library loading.

A description is line-oriented UTF-8 text:

    name: Ten
    components:
    Line horzLine
    Line vertLine
    constraints:
    Horizontal horzLine
    SameX horzLine.center vertLine.center
    aliases:
    Line stroke1 horzLine
    Point point1 horzLine.p1

Tokens are whitespace-separated, `#` starts a comment, blank lines are
ignored, and the three sections must appear in the order shown. Lines are the
only predefined component type; any other type name must resolve to another
description in the library. Sub-shape landmarks are reachable only through
aliases the sub-shape exports (e.g. `ten.bottomPoint`).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .constraints import LINE, POINT, ConstraintError, predicate_signature

LANDMARKS = ("p1", "p2", "center")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_STROKE_ALIAS = re.compile(r"^stroke([0-9]+)$")
_POINT_ALIAS = re.compile(r"^point([0-9]+)$")

# binary predicates whose truth is unchanged by swapping a line's endpoints
_SYMMETRIC = {"SameX", "SameY", "Near", "SameSize", "Intersects"}


class ShapeSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ShapeValidationError(ValueError):
    pass


class LibraryError(ValueError):
    pass


@dataclass(frozen=True)
class RefPath:
    segments: tuple

    @classmethod
    def parse(cls, text: str, line: int | None = None) -> "RefPath":
        parts = tuple(text.split("."))
        if not parts or any(not _IDENT.match(p) for p in parts):
            raise ShapeSyntaxError(f"bad reference path {text!r}", line)
        return cls(parts)

    @property
    def dotted(self) -> str:
        return ".".join(self.segments)

    def __str__(self):
        return self.dotted


@dataclass(frozen=True)
class ComponentDecl:
    type_name: str
    instance_name: str


@dataclass(frozen=True)
class ConstraintDecl:
    predicate: str
    args: tuple  # of RefPath


@dataclass(frozen=True)
class AliasDecl:
    kind: str  # "Line" | "Point"
    alias_name: str
    target: RefPath


@dataclass(frozen=True)
class ShapeDescription:
    name: str
    components: tuple
    constraints: tuple
    aliases: tuple

    def component(self, instance_name: str) -> ComponentDecl | None:
        for c in self.components:
            if c.instance_name == instance_name:
                return c
        return None

    def alias(self, alias_name: str) -> AliasDecl | None:
        for a in self.aliases:
            if a.alias_name == alias_name:
                return a
        return None

    def line_components(self) -> list:
        return [c for c in self.components if c.type_name == "Line"]

    def sub_components(self) -> list:
        return [c for c in self.components if c.type_name != "Line"]


def parse_description(text: str) -> ShapeDescription:
    """Parse one description. Refs into sub-shapes are checked at library load;
    everything local (sections, arity, duplicates, Line landmarks) is checked here."""
    name = None
    section = None
    components: list = []
    constraints: list = []
    aliases: list = []
    seen_sections: list = []
    section_order = ["components:", "constraints:", "aliases:"]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if name is None:
            if tokens[0] != "name:" or len(tokens) != 2 or not _IDENT.match(tokens[1]):
                raise ShapeSyntaxError("expected 'name: <Identifier>' header", lineno)
            name = tokens[1]
            continue
        if tokens[0].endswith(":"):
            if tokens[0] not in section_order:
                raise ShapeSyntaxError(f"unknown section {tokens[0]!r}", lineno)
            if len(tokens) != 1:
                raise ShapeSyntaxError(f"section header {tokens[0]!r} takes no arguments", lineno)
            idx = section_order.index(tokens[0])
            if seen_sections and idx <= section_order.index(seen_sections[-1]):
                raise ShapeSyntaxError(f"section {tokens[0]!r} out of order", lineno)
            seen_sections.append(tokens[0])
            section = tokens[0]
            continue
        if section == "components:":
            if len(tokens) != 2:
                raise ShapeSyntaxError("component entry must be '<Type> <instance>'", lineno)
            type_name, inst = tokens
            if not _IDENT.match(type_name) or not _IDENT.match(inst):
                raise ShapeSyntaxError(f"bad identifier in component entry {line!r}", lineno)
            if type_name == inst:
                raise ShapeSyntaxError(f"component instance {inst!r} shadows its own type", lineno)
            if any(c.instance_name == inst for c in components):
                raise ShapeSyntaxError(f"duplicate component name {inst!r}", lineno)
            components.append(ComponentDecl(type_name, inst))
        elif section == "constraints:":
            pred = tokens[0]
            try:
                arity, _ = predicate_signature(pred)
            except ConstraintError as e:
                raise ShapeSyntaxError(str(e), lineno) from e
            args = tokens[1:]
            if len(args) != arity:
                raise ShapeSyntaxError(f"{pred} expects {arity} argument(s), got {len(args)}", lineno)
            constraints.append(ConstraintDecl(pred, tuple(RefPath.parse(a, lineno) for a in args)))
        elif section == "aliases:":
            if len(tokens) != 3:
                raise ShapeSyntaxError("alias entry must be 'Line|Point <name> <target>'", lineno)
            kind, alias_name, target = tokens
            if kind not in ("Line", "Point"):
                raise ShapeSyntaxError(f"alias kind must be Line or Point, got {kind!r}", lineno)
            if not _IDENT.match(alias_name):
                raise ShapeSyntaxError(f"bad alias name {alias_name!r}", lineno)
            if any(a.alias_name == alias_name for a in aliases):
                raise ShapeSyntaxError(f"duplicate alias name {alias_name!r}", lineno)
            aliases.append(AliasDecl(kind, alias_name, RefPath.parse(target, lineno)))
        else:
            raise ShapeSyntaxError(f"entry {line!r} before any section header", lineno)

    if name is None:
        raise ShapeSyntaxError("empty description: missing 'name:' header")
    if "components:" not in seen_sections or not components:
        raise ShapeSyntaxError("description declares no components")

    d = ShapeDescription(name, tuple(components), tuple(constraints), tuple(aliases))
    _validate_local(d)
    return d


def _validate_local(d: ShapeDescription):
    """Checks that need no library: local Line refs and alias kinds on them."""
    for c in d.constraints:
        _, kinds = predicate_signature(c.predicate)
        for ref, kind in zip(c.args, kinds):
            resolved = _try_resolve_local(d, ref)
            if resolved is None:
                continue  # crosses into a sub-shape; library load finishes the job
            if resolved[0] != kind:
                raise ShapeValidationError(
                    f"{d.name}: {c.predicate} needs a {kind} but {ref} is a {resolved[0]}"
                )
    for a in d.aliases:
        resolved = _try_resolve_local(d, a.target)
        if resolved is None:
            continue
        want = LINE if a.kind == "Line" else POINT
        if resolved[0] != want:
            raise ShapeValidationError(
                f"{d.name}: alias {a.alias_name} declared {a.kind} but {a.target} is a {resolved[0]}"
            )


def _try_resolve_local(d: ShapeDescription, ref: RefPath):
    """Resolve a ref against d's own Line components only.

    Returns (kind, line_path[, landmark]) or None when the ref enters a
    user-typed sub-shape (resolvable only with the library). Raises when the
    head is not a component or the tail is malformed for a Line."""
    head = ref.segments[0]
    comp = d.component(head)
    if comp is None:
        raise ShapeValidationError(f"{d.name}: reference {ref} does not start at a component")
    if comp.type_name != "Line":
        return None
    if len(ref.segments) == 1:
        return (LINE, head)
    if len(ref.segments) == 2 and ref.segments[1] in LANDMARKS:
        return (POINT, head, ref.segments[1])
    raise ShapeValidationError(f"{d.name}: bad landmark reference {ref} (use p1, p2 or center)")


def serialize_description(d: ShapeDescription) -> str:
    """Canonical text form; parse(serialize(d)) is structurally identical to d."""
    out = [f"name: {d.name}", "components:"]
    out += [f"{c.type_name} {c.instance_name}" for c in d.components]
    out.append("constraints:")
    out += [" ".join([c.predicate, *(a.dotted for a in c.args)]) for c in d.constraints]
    out.append("aliases:")
    out += [f"{a.kind} {a.alias_name} {a.target.dotted}" for a in d.aliases]
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class ShapeLibrary:
    descriptions: dict
    topological_order: tuple

    def __contains__(self, name: str) -> bool:
        return name in self.descriptions

    def __getitem__(self, name: str) -> ShapeDescription:
        return self.descriptions[name]

    def names(self) -> list:
        return list(self.topological_order)


def build_library(descriptions: list) -> ShapeLibrary:
    """Validate cross-references and compute a dependency-first order."""
    by_name: dict = {}
    for d in descriptions:
        if d.name in by_name:
            raise LibraryError(f"duplicate description name {d.name!r}")
        by_name[d.name] = d

    deps = {}
    for d in by_name.values():
        wants = []
        for c in d.sub_components():
            if c.type_name not in by_name:
                raise LibraryError(f"{d.name}: unknown component type {c.type_name!r}")
            wants.append(c.type_name)
        deps[d.name] = wants

    order: list = []
    state: dict = {}  # 0 visiting, 1 done

    def visit(name, trail):
        if state.get(name) == 1:
            return
        if state.get(name) == 0:
            loop = trail[trail.index(name):] + [name]
            raise LibraryError("dependency cycle: " + " -> ".join(loop))
        state[name] = 0
        for dep in deps[name]:
            visit(dep, trail + [name])
        state[name] = 1
        order.append(name)

    for name in sorted(by_name):
        visit(name, [])

    lib = ShapeLibrary(by_name, tuple(order))
    for name in order:
        try:
            _validate_with_library(by_name[name], lib)
        except ShapeValidationError as e:
            raise LibraryError(str(e)) from e
    return lib


def load_library(directory) -> ShapeLibrary:
    """Load every `*.shape` file in a directory into a validated library."""
    directory = Path(directory)
    descriptions = []
    for path in sorted(directory.glob("*.shape")):
        try:
            descriptions.append(parse_description(path.read_text(encoding="utf-8")))
        except (ShapeSyntaxError, ShapeValidationError) as e:
            raise LibraryError(f"{path.name}: {e}") from e
    if not descriptions:
        raise LibraryError(f"no .shape files in {directory}")
    return build_library(descriptions)


def resolve_ref(d: ShapeDescription, lib: ShapeLibrary, ref: RefPath):
    """Fully resolve a ref to ('line', path) or ('point', line_path, landmark),
    following exported aliases through sub-shapes. Paths are dotted instance
    paths relative to d."""
    head = ref.segments[0]
    comp = d.component(head)
    if comp is None:
        raise ShapeValidationError(f"{d.name}: reference {ref} does not start at a component")
    if comp.type_name == "Line":
        local = _try_resolve_local(d, ref)
        return local
    sub = lib[comp.type_name]
    if len(ref.segments) != 2:
        raise ShapeValidationError(
            f"{d.name}: sub-shape landmarks are reachable only via one exported alias ({ref})"
        )
    alias = sub.alias(ref.segments[1])
    if alias is None:
        raise ShapeValidationError(
            f"{d.name}: {comp.type_name} exports no alias named {ref.segments[1]!r} ({ref})"
        )
    inner = resolve_ref(sub, lib, alias.target)
    if alias.kind == "Line" and inner[0] != LINE:
        raise ShapeValidationError(f"{sub.name}: alias {alias.alias_name} declared Line but targets a point")
    if alias.kind == "Point" and inner[0] != POINT:
        raise ShapeValidationError(f"{sub.name}: alias {alias.alias_name} declared Point but targets a line")
    if inner[0] == LINE:
        return (LINE, f"{head}.{inner[1]}")
    return (POINT, f"{head}.{inner[1]}", inner[2])


def _validate_with_library(d: ShapeDescription, lib: ShapeLibrary):
    for c in d.constraints:
        _, kinds = predicate_signature(c.predicate)
        for ref, kind in zip(c.args, kinds):
            resolved = resolve_ref(d, lib, ref)
            if resolved[0] != kind:
                raise LibraryError(f"{d.name}: {c.predicate} needs a {kind} but {ref} is a {resolved[0]}")
    for a in d.aliases:
        resolved = resolve_ref(d, lib, a.target)
        want = LINE if a.kind == "Line" else POINT
        if resolved[0] != want:
            raise LibraryError(
                f"{d.name}: alias {a.alias_name} declared {a.kind} but {a.target} is a {resolved[0]}"
            )


@dataclass(frozen=True)
class FlatConstraint:
    predicate: str
    args: tuple  # ('line', path) or ('point', line_path, landmark), paths fully qualified


@dataclass(frozen=True)
class FlatShape:
    """A description with all sub-shapes expanded into qualified line paths."""

    name: str
    lines: tuple  # qualified line paths, depth-first declaration order
    constraints: tuple  # FlatConstraint from every nesting level
    sub_spans: dict  # qualified sub-shape instance path -> tuple of line paths
    elements: tuple  # direct sub-shape instance names, declaration order


def flatten(d: ShapeDescription, lib: ShapeLibrary, _prefix: str = "") -> FlatShape:
    lines: list = []
    constraints: list = []
    sub_spans: dict = {}
    elements: list = []

    for comp in d.components:
        qual = _prefix + comp.instance_name
        if comp.type_name == "Line":
            lines.append(qual)
        else:
            inner = flatten(lib[comp.type_name], lib, qual + ".")
            lines.extend(inner.lines)
            constraints.extend(inner.constraints)
            sub_spans.update(inner.sub_spans)
            sub_spans[qual] = inner.lines
            if not _prefix:
                elements.append(comp.instance_name)

    for c in d.constraints:
        args = []
        for ref in c.args:
            resolved = resolve_ref(d, lib, ref)
            if resolved[0] == LINE:
                args.append((LINE, _prefix + resolved[1]))
            else:
                args.append((POINT, _prefix + resolved[1], resolved[2]))
        constraints.append(FlatConstraint(c.predicate, tuple(args)))

    return FlatShape(d.name, tuple(lines), tuple(constraints), sub_spans, tuple(elements))


def stroke_aliases(d: ShapeDescription) -> dict:
    """Ordinal -> list of targets, from `stroke<k>` Line aliases in declaration order."""
    out: dict = {}
    for a in d.aliases:
        m = _STROKE_ALIAS.match(a.alias_name)
        if m and a.kind == "Line":
            out.setdefault(int(m.group(1)), []).append(a.target)
    return out


def point_aliases(d: ShapeDescription) -> dict:
    """Ordinal -> target, from `point<k>` Point aliases."""
    out: dict = {}
    for a in d.aliases:
        m = _POINT_ALIAS.match(a.alias_name)
        if m and a.kind == "Point":
            out[int(m.group(1))] = a.target
    return out


def _statically_pinned(d: ShapeDescription, line_name: str) -> bool:
    """True when some constraint can distinguish the line's two endpoint roles."""
    for c in d.constraints:
        endpoint_refs = [
            r for r in c.args
            if len(r.segments) == 2 and r.segments[0] == line_name and r.segments[1] in ("p1", "p2")
        ]
        if not endpoint_refs:
            continue
        if len(endpoint_refs) == 1:
            return True
        marks = {r.segments[1] for r in endpoint_refs}
        if marks == {"p1", "p2"} and c.predicate not in _SYMMETRIC:
            return True
    return False


def validate_technique_plan(d: ShapeDescription, lib: ShapeLibrary) -> list:
    """Author-time lint: does the description carry enough stroke/point
    enumeration (and role-pinning constraints) for a full technique critique?"""
    warnings = []
    own_lines = [c.instance_name for c in d.line_components()]
    strokes = stroke_aliases(d)
    points = point_aliases(d)

    if own_lines:
        covered = set()
        for targets in strokes.values():
            for t in targets:
                covered.add(t.segments[0])
        missing = [ln for ln in own_lines if ln not in covered]
        if not strokes:
            warnings.append("no stroke<k> aliases: stroke order cannot be critiqued")
        elif missing:
            warnings.append("stroke aliases do not cover lines: " + ", ".join(missing))

        enumerated: dict = {}
        for target in points.values():
            if len(target.segments) == 2 and target.segments[1] in ("p1", "p2"):
                enumerated.setdefault(target.segments[0], set()).add(target.segments[1])
        if not points:
            warnings.append("no point<k> aliases: stroke direction cannot be critiqued")
        else:
            partial = [ln for ln in own_lines if enumerated.get(ln, set()) != {"p1", "p2"}]
            if partial:
                warnings.append("point enumeration is partial for lines: " + ", ".join(partial))

        for ln in own_lines:
            if not _statically_pinned(d, ln):
                warnings.append(
                    f"constraints never pin endpoint roles of {ln}: direction check may be indeterminate"
                )
    return warnings
