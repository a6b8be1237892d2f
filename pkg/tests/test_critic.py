import itertools

import pytest

from hashigo.constraints import ToleranceProfile
from hashigo.critic import (
    CritiqueError,
    PlanError,
    build_plan,
    critique,
    technique_metrics,
)
from hashigo.dsl import build_library, parse_description
from hashigo.ink import InkPoint, InkStroke, Sketch
from hashigo.recognizer import recognize
from hashigo.segmenter import SegmenterConfig, segment
from hashigo.synth import shape_sketch

TOL = ToleranceProfile()
CFG = SegmenterConfig()


def graded(lib, shape, sketch):
    prims = segment(sketch, CFG).primitives
    verdict = recognize(prims, shape, lib, TOL)
    assert verdict.matched, f"{shape} fixture must match visually"
    return critique(verdict.binding, build_plan(lib[shape], lib), sketch)


class TestBuildPlan:
    def test_ten_plan(self, lib):
        plan = build_plan(lib["Ten"], lib)
        assert plan.stroke_count == 2
        assert plan.stroke_ordinals == ((1, ("horzLine",)), (2, ("vertLine",)))
        assert plan.ordinal_of("vertLine") == 2
        assert [entry[0] for entry in plan.point_sequence] == [1, 2, 3, 4]

    def test_compound_plan_inherits_with_offsets(self, lib):
        plan = build_plan(lib["Ancient"], lib)
        assert plan.stroke_count == 5
        ordinals = [k for k, _ in plan.stroke_ordinals]
        assert ordinals == [1, 2, 3, 4, 5]
        assert plan.stroke_ordinals[0][1] == ("ten.horzLine",)
        assert plan.stroke_ordinals[2][1] == ("mouth.leftLine",)
        assert plan.element_order == ("ten", "mouth")
        # inherited point sequence covers every line of every element
        assert len(plan.point_sequence) == 4 + 6

    def test_missing_ordinal_is_rejected(self):
        d = parse_description(
            "name: X\ncomponents:\nLine a\nLine b\nconstraints:\nLeftOf a.p1 b.p1\n"
            "aliases:\nLine stroke1 a\nLine stroke3 b\n"
        )
        with pytest.raises(PlanError, match="dense"):
            build_plan(d, build_library([d]))

    def test_uncovered_line_is_rejected(self):
        d = parse_description(
            "name: X\ncomponents:\nLine a\nLine b\nconstraints:\nLeftOf a.p1 b.p1\n"
            "aliases:\nLine stroke1 a\n"
        )
        with pytest.raises(PlanError, match="unenumerated"):
            build_plan(d, build_library([d]))

    def test_center_point_alias_is_rejected(self):
        d = parse_description(
            "name: X\ncomponents:\nLine a\nconstraints:\nLeftOf a.p1 a.p2\n"
            "aliases:\nLine stroke1 a\nPoint point1 a.center\n"
        )
        with pytest.raises(PlanError, match="p1/p2"):
            build_plan(d, build_library([d]))

    def test_mixed_lines_and_elements_without_aliases_rejected(self, lib):
        d = parse_description("name: X\ncomponents:\nTen t\nLine extra\n")
        combined = build_library(list(lib.descriptions.values()) + [d])
        with pytest.raises(PlanError):
            build_plan(d, combined)


class TestCritiqueExamples:
    def test_canonical_ten_passes(self, lib):
        report = graded(lib, "Ten", shape_sketch("Ten"))
        assert report.overall_pass
        assert report.order_violations == ()
        assert report.direction_violations == ()
        assert report.stroke_count_ok

    def test_vertical_first_is_one_order_violation(self, lib):
        report = graded(lib, "Ten", shape_sketch("Ten", order=(1, 0)))
        assert report.order_violations == ((1, 2),)
        assert report.direction_violations == ()
        assert not report.overall_pass

    def test_reversed_horizontal_is_a_direction_violation(self, lib):
        report = graded(lib, "Ten", shape_sketch("Ten", reversed_flags=(True, False)))
        assert report.order_violations == ()
        assert report.direction_violations == ((1, "p1", "p2"),)
        assert not report.overall_pass

    def test_both_mistakes_are_reported_together(self, lib):
        report = graded(lib, "Ten", shape_sketch("Ten", order=(1, 0), reversed_flags=(False, True)))
        assert report.order_violations == ((1, 2),)
        assert report.direction_violations == ((2, "p1", "p2"),)

    def test_ancient_element_sequence_violation(self, lib):
        report = graded(lib, "Ancient", shape_sketch("Ancient", order=(2, 3, 4, 0, 1)))
        assert len(report.element_violations) == 1
        element, times = report.element_violations[0]
        assert element == "mouth"
        assert not report.overall_pass

    def test_canonical_ancient_passes(self, lib):
        report = graded(lib, "Ancient", shape_sketch("Ancient"))
        assert report.overall_pass

    def test_ten_permutation_matrix(self, lib):
        # 2 orders x 2 x 2 directions: only the canonical cell passes
        passes = {}
        for order in [(0, 1), (1, 0)]:
            for flags in itertools.product([False, True], repeat=2):
                report = graded(lib, "Ten", shape_sketch("Ten", order=order, reversed_flags=flags))
                passes[(order, flags)] = report.overall_pass
        assert passes[((0, 1), (False, False))]
        assert sum(passes.values()) == 1

    def test_time_shift_does_not_change_the_verdict(self, lib):
        base = shape_sketch("Ten", reversed_flags=(True, False))
        shifted = Sketch(
            tuple(
                InkStroke(s.id, tuple(InkPoint(p.x, p.y, p.t + 5000) for p in s.points))
                for s in base.strokes
            ),
            base.canvas_width,
            base.canvas_height,
        )
        assert graded(lib, "Ten", base) == graded(lib, "Ten", shifted)


class TestCritiqueEdgeCases:
    def test_plan_line_must_be_bound(self, lib):
        sketch = shape_sketch("Ten")
        prims = segment(sketch, CFG).primitives
        verdict = recognize(prims, "Ten", lib, TOL)
        wrong_plan = build_plan(lib["Ancient"], lib)
        with pytest.raises(CritiqueError):
            critique(verdict.binding, wrong_plan, sketch)

    def test_pen_stroke_count_mismatch_flagged(self, lib):
        # Mouth geometry drawn as one continuous pen path (up the left side,
        # across the top, down the right side): structure can still bind, but
        # the pen count differs from the three-stroke plan
        waypoints = [(60.0, 150.0), (60.0, 60.0), (140.0, 60.0), (140.0, 150.0)]
        pts = [InkPoint(*waypoints[0], 0)]
        t = 0
        for p0, p1 in zip(waypoints, waypoints[1:]):
            for i in range(1, 17):
                f = i / 16
                t += 12
                pts.append(InkPoint(p0[0] + f * (p1[0] - p0[0]), p0[1] + f * (p1[1] - p0[1]), t))
        sketch = Sketch((InkStroke(0, tuple(pts)),), 200.0, 200.0)
        prims = segment(sketch, CFG).primitives
        if len(prims) != 3:
            pytest.skip("segmenter did not split the continuous stroke into 3 primitives")
        verdict = recognize(prims, "Mouth", lib, TOL)
        assert verdict.matched
        report = critique(verdict.binding, build_plan(lib["Mouth"], lib), sketch)
        assert not report.stroke_count_ok
        assert not report.overall_pass

    def test_unpinned_roles_become_indeterminate_not_failures(self):
        d = parse_description(
            "name: Pair\ncomponents:\nLine a\nLine b\nconstraints:\nHorizontal a\nHorizontal b\n"
            "Above a.center b.center\naliases:\nLine stroke1 a\nLine stroke2 b\n"
            "Point point1 a.p1\nPoint point2 a.p2\nPoint point3 b.p1\nPoint point4 b.p2\n"
        )
        lib2 = build_library([d])
        from hashigo.synth import build_sketch

        sketch = build_sketch([((0, 0), (100, 0)), ((100, 50), (0, 50))])  # second drawn backwards
        prims = segment(sketch, CFG).primitives
        verdict = recognize(prims, "Pair", lib2, TOL)
        assert verdict.matched
        report = critique(verdict.binding, build_plan(d, lib2), sketch)
        assert report.direction_violations == ()
        assert set(report.indeterminate_directions) == {1, 2}
        assert report.overall_pass


class TestMetrics:
    def test_empty_input(self):
        assert technique_metrics([]) == {"visualAccuracy": None, "techniqueAmongVisual": None}

    def test_no_visual_matches(self):
        out = technique_metrics([(False, None), (False, None)])
        assert out == {"visualAccuracy": 0.0, "techniqueAmongVisual": None}

    def test_conditioning_arithmetic(self, lib):
        ok = graded(lib, "Ten", shape_sketch("Ten"))
        bad = graded(lib, "Ten", shape_sketch("Ten", order=(1, 0)))
        out = technique_metrics([(True, ok), (True, bad), (False, None), (True, ok)])
        assert out["visualAccuracy"] == pytest.approx(3 / 4)
        assert out["techniqueAmongVisual"] == pytest.approx(2 / 3)
