import random

import pytest

from hashigo.dsl import (
    AliasDecl,
    ComponentDecl,
    ConstraintDecl,
    LibraryError,
    RefPath,
    ShapeDescription,
    ShapeSyntaxError,
    ShapeValidationError,
    build_library,
    flatten,
    parse_description,
    point_aliases,
    resolve_ref,
    serialize_description,
    stroke_aliases,
    validate_technique_plan,
)

from reference_texts import ANCIENT_COMPOUND, TEN_TECHNIQUE, TEN_VISUAL


class TestParsing:
    def test_ten_reference_text(self):
        d = parse_description(TEN_VISUAL)
        assert d.name == "Ten"
        assert [c.instance_name for c in d.components] == ["horzLine", "vertLine"]
        assert len(d.constraints) == 7
        assert d.constraints[2] == ConstraintDecl(
            "LeftOf", (RefPath(("horzLine", "p1")), RefPath(("horzLine", "p2")))
        )
        assert [a.alias_name for a in d.aliases] == ["leftPoint", "rightPoint", "bottomPoint"]

    def test_compound_reference_text(self):
        d = parse_description(ANCIENT_COMPOUND)
        assert [c.type_name for c in d.components] == ["Ten", "Mouth"]
        assert len(d.constraints) == 3
        assert d.aliases == ()

    def test_technique_reference_text(self):
        d = parse_description(TEN_TECHNIQUE)
        assert d.constraints == ()
        assert stroke_aliases(d) == {1: [RefPath(("horzLine",))], 2: [RefPath(("vertLine",))]}
        assert point_aliases(d) == {1: RefPath(("horzLine", "p1")), 2: RefPath(("vertLine", "p2"))}

    def test_comments_and_blank_lines_are_ignored(self):
        d = parse_description(
            "# header comment\nname: X\n\ncomponents:\nLine a  # trailing\n\nconstraints:\nHorizontal a\n"
        )
        assert d.name == "X"
        assert len(d.constraints) == 1

    def test_missing_name_header(self):
        with pytest.raises(ShapeSyntaxError):
            parse_description("components:\nLine a\n")

    def test_sections_out_of_order(self):
        with pytest.raises(ShapeSyntaxError):
            parse_description("name: X\nconstraints:\ncomponents:\nLine a\n")

    def test_no_components(self):
        with pytest.raises(ShapeSyntaxError):
            parse_description("name: X\ncomponents:\nconstraints:\n")

    def test_unknown_predicate(self):
        with pytest.raises(ShapeSyntaxError):
            parse_description("name: X\ncomponents:\nLine a\nconstraints:\nWavy a\n")

    def test_wrong_arity_is_a_syntax_error(self):
        with pytest.raises(ShapeSyntaxError):
            parse_description("name: X\ncomponents:\nLine a\nconstraints:\nHorizontal\n")
        with pytest.raises(ShapeSyntaxError):
            parse_description("name: X\ncomponents:\nLine a\nconstraints:\nHorizontal a a\n")

    def test_duplicate_component_name(self):
        with pytest.raises(ShapeSyntaxError):
            parse_description("name: X\ncomponents:\nLine a\nLine a\n")

    def test_duplicate_alias_name(self):
        text = "name: X\ncomponents:\nLine a\naliases:\nPoint p a.p1\nPoint p a.p2\n"
        with pytest.raises(ShapeSyntaxError):
            parse_description(text)

    def test_bad_landmark_on_line(self):
        with pytest.raises(ShapeValidationError):
            parse_description("name: X\ncomponents:\nLine a\nconstraints:\nSameX a.start a.p2\n")

    def test_line_where_point_expected(self):
        with pytest.raises(ShapeValidationError):
            parse_description("name: X\ncomponents:\nLine a\nLine b\nconstraints:\nLeftOf a b.p1\n")

    def test_reference_to_unknown_component(self):
        with pytest.raises(ShapeValidationError):
            parse_description("name: X\ncomponents:\nLine a\nconstraints:\nHorizontal ghost\n")

    def test_syntax_error_carries_line_number(self):
        with pytest.raises(ShapeSyntaxError) as ei:
            parse_description("name: X\ncomponents:\nLine a\nconstraints:\nWavy a\n")
        assert ei.value.line == 5


class TestSerialization:
    def test_round_trip_on_reference_texts(self):
        for text in (TEN_VISUAL, ANCIENT_COMPOUND, TEN_TECHNIQUE):
            d = parse_description(text)
            assert parse_description(serialize_description(d)) == d

    def test_second_pass_is_byte_stable(self):
        for text in (TEN_VISUAL, ANCIENT_COMPOUND, TEN_TECHNIQUE):
            once = serialize_description(parse_description(text))
            assert serialize_description(parse_description(once)) == once

    def test_round_trip_on_random_descriptions(self):
        rng = random.Random(23)
        preds1 = ["Horizontal", "Vertical", "PosSlope", "NotNegSlope"]
        preds2 = ["LeftOf", "SameX", "Near", "Above"]
        for _ in range(50):
            n = rng.randint(1, 5)
            lines = [f"l{i}" for i in range(n)]
            comps = tuple(ComponentDecl("Line", l) for l in lines)
            cons = []
            for _ in range(rng.randint(0, 6)):
                if rng.random() < 0.5:
                    cons.append(ConstraintDecl(rng.choice(preds1), (RefPath((rng.choice(lines),)),)))
                else:
                    cons.append(ConstraintDecl(rng.choice(preds2), (
                        RefPath((rng.choice(lines), rng.choice(["p1", "p2", "center"]))),
                        RefPath((rng.choice(lines), rng.choice(["p1", "p2", "center"]))),
                    )))
            aliases = tuple(
                AliasDecl("Point", f"point{k + 1}", RefPath((rng.choice(lines), rng.choice(["p1", "p2"]))))
                for k in range(rng.randint(0, 3))
            )
            d = ShapeDescription(f"S{rng.randint(0, 999)}", comps, tuple(cons), aliases)
            assert parse_description(serialize_description(d)) == d


def desc(text):
    return parse_description(text)


class TestLibrary:
    def test_shipped_library_loads_in_dependency_order(self, lib):
        order = lib.names()
        assert set(order) == {"One", "Ten", "Mouth", "Ancient"}
        assert order.index("Ten") < order.index("Ancient")
        assert order.index("Mouth") < order.index("Ancient")

    def test_duplicate_names_rejected(self):
        a = desc("name: X\ncomponents:\nLine a\n")
        with pytest.raises(LibraryError):
            build_library([a, a])

    def test_unknown_component_type(self):
        a = desc("name: X\ncomponents:\nGhost g\n")
        with pytest.raises(LibraryError, match="Ghost"):
            build_library([a])

    def test_cycle_is_reported_with_the_loop(self):
        a = desc("name: A\ncomponents:\nB b\n")
        b = desc("name: B\ncomponents:\nA a\n")
        with pytest.raises(LibraryError, match="cycle"):
            build_library([a, b])

    def test_sub_shape_ref_must_use_exported_alias(self):
        inner = desc("name: Inner\ncomponents:\nLine a\naliases:\nPoint tip a.p1\n")
        ok = desc("name: Outer\ncomponents:\nInner i\nLine b\nconstraints:\nSameX i.tip b.p1\n")
        build_library([inner, ok])
        bad = desc("name: Outer\ncomponents:\nInner i\nLine b\nconstraints:\nSameX i.a.p1 b.p1\n")
        with pytest.raises(LibraryError):
            build_library([inner, bad])

    def test_sub_shape_ref_to_missing_alias(self):
        inner = desc("name: Inner\ncomponents:\nLine a\n")
        outer = desc("name: Outer\ncomponents:\nInner i\nLine b\nconstraints:\nSameX i.tip b.p1\n")
        with pytest.raises(LibraryError, match="tip"):
            build_library([inner, outer])

    def test_resolve_ref_follows_alias_chain(self, lib):
        ancient = lib["Ancient"]
        resolved = resolve_ref(ancient, lib, RefPath(("ten", "bottomPoint")))
        assert resolved == ("point", "ten.vertLine", "p2")


class TestFlatten:
    def test_ten_flattens_to_its_own_lines(self, lib):
        flat = flatten(lib["Ten"], lib)
        assert flat.lines == ("horzLine", "vertLine")
        assert flat.sub_spans == {}
        assert flat.elements == ()

    def test_ancient_flattens_depth_first(self, lib):
        flat = flatten(lib["Ancient"], lib)
        assert flat.lines == (
            "ten.horzLine", "ten.vertLine",
            "mouth.leftLine", "mouth.topLine", "mouth.rightLine",
        )
        assert flat.elements == ("ten", "mouth")
        assert set(flat.sub_spans["ten"]) == {"ten.horzLine", "ten.vertLine"}
        assert len(flat.sub_spans["mouth"]) == 3

    def test_ancient_inherits_sub_shape_constraints(self, lib):
        flat = flatten(lib["Ancient"], lib)
        ten_count = len(flatten(lib["Ten"], lib).constraints)
        mouth_count = len(flatten(lib["Mouth"], lib).constraints)
        own = len(lib["Ancient"].constraints)
        assert len(flat.constraints) == ten_count + mouth_count + own

    def test_flat_constraint_args_are_qualified(self, lib):
        flat = flatten(lib["Ancient"], lib)
        own = [c for c in flat.constraints if c.predicate == "SameX"
               and any(a[1].startswith("mouth.") for a in c.args)
               and any(a[1].startswith("ten.") for a in c.args)]
        assert own, "compound-level SameX constraint must survive flattening with prefixes"


class TestTechniquePlanLint:
    def test_shipped_shapes_lint_clean(self, lib):
        for name in lib.names():
            assert validate_technique_plan(lib[name], lib) == []

    def test_missing_stroke_aliases(self, lib):
        d = desc("name: X\ncomponents:\nLine a\nconstraints:\nLeftOf a.p1 a.p2\n")
        warnings = validate_technique_plan(d, build_library([d]))
        assert any("stroke" in w for w in warnings)
        assert any("point" in w for w in warnings)

    def test_partial_point_enumeration(self):
        d = desc(
            "name: X\ncomponents:\nLine a\nconstraints:\nLeftOf a.p1 a.p2\n"
            "aliases:\nLine stroke1 a\nPoint point1 a.p1\n"
        )
        warnings = validate_technique_plan(d, build_library([d]))
        assert any("partial" in w for w in warnings)

    def test_symmetric_constraints_never_pin_roles(self):
        d = desc(
            "name: X\ncomponents:\nLine a\nLine b\nconstraints:\nSameSize a b\n"
            "aliases:\nLine stroke1 a\nLine stroke2 b\n"
            "Point point1 a.p1\nPoint point2 a.p2\nPoint point3 b.p1\nPoint point4 b.p2\n"
        )
        warnings = validate_technique_plan(d, build_library([d]))
        assert any("pin endpoint roles of a" in w for w in warnings)
        assert any("pin endpoint roles of b" in w for w in warnings)

    def test_single_endpoint_constraint_pins(self):
        d = desc(
            "name: X\ncomponents:\nLine a\nLine b\nconstraints:\nLeftOf a.p1 b.p2\n"
            "aliases:\nLine stroke1 a\nLine stroke2 b\n"
            "Point point1 a.p1\nPoint point2 a.p2\nPoint point3 b.p1\nPoint point4 b.p2\n"
        )
        warnings = validate_technique_plan(d, build_library([d]))
        assert warnings == []
