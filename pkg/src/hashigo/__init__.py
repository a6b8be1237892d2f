"""Kanji sketch tutor: geometric recognition plus written-technique critique."""

from importlib import resources as _resources

from .constraints import PROFILES, Landmark, OrientedLine, ToleranceProfile, predicate_table
from .critic import TechniquePlan, TechniqueReport, build_plan, critique, technique_metrics
from .dsl import (
    ShapeDescription,
    ShapeLibrary,
    load_library,
    parse_description,
    serialize_description,
    validate_technique_plan,
)
from .ink import InkPoint, InkStroke, Sketch, bounding_box, load_ink, save_ink
from .recognizer import (
    Binding,
    KanjiRecognizer,
    VisualVerdict,
    classify,
    incremental_status,
    recognize,
    recognize_with_recovery,
)
from .segmenter import (
    DrawnPrimitive,
    SegmentationResult,
    SegmenterConfig,
    StrokeSegmenter,
    resegment_with_forced_count,
    segment,
)

__version__ = "0.1.0"


def default_shapes_dir():
    """Directory of the shape descriptions shipped with the package."""
    return _resources.files(__package__) / "data" / "shapes"


def default_lessons_dir():
    return _resources.files(__package__) / "data" / "lessons"
