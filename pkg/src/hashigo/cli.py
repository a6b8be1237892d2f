"""Command line entry points: validate, recognize, critique, batch-eval, serve."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import default_lessons_dir, default_shapes_dir
from .config import load_config, segmenter_from_config, tolerance_from_config
from .critic import build_plan, critique as run_critique
from .dsl import LibraryError, ShapeSyntaxError, ShapeValidationError, load_library, parse_description
from .evalharness import batch_eval, summarize
from .ink import InkError, load_ink
from .recognizer import classify, recognize_with_recovery
from .segmenter import SegmenterConfig, segment
from .serialize import dumps_canonical, technique_to_dict, verdict_to_dict

EXIT_PASS = 0
EXIT_VIOLATIONS = 1
EXIT_NO_MATCH = 2
EXIT_MISSING_FILE = 64
EXIT_BAD_INPUT = 65
EXIT_INTERNAL = 70


def _engine_options(fn):
    fn = click.option("--shapes", "shapes_dir", type=click.Path(), default=None,
                      help="Directory of .shape descriptions (default: shipped set).")(fn)
    fn = click.option("--config", "config_path", type=click.Path(), default=None,
                      help="Flat key=value config file.")(fn)
    fn = click.option("--profile", type=click.Choice(["default", "strict"]), default=None,
                      help="Tolerance profile.")(fn)
    return fn


def _load_engine(shapes_dir, config_path, profile):
    mapping = {}
    if config_path is not None:
        if not Path(config_path).exists():
            _die(EXIT_MISSING_FILE, f"config file not found: {config_path}")
        mapping = load_config(config_path)
    tol = tolerance_from_config(mapping, profile)
    seg_cfg = segmenter_from_config(mapping)
    shapes = Path(shapes_dir) if shapes_dir else default_shapes_dir()
    try:
        lib = load_library(shapes)
    except LibraryError as e:
        _die(EXIT_BAD_INPUT, str(e))
    return lib, tol, seg_cfg, mapping


def _die(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_ink(path):
    p = Path(path)
    if not p.exists():
        _die(EXIT_MISSING_FILE, f"ink file not found: {path}")
    try:
        return load_ink(p.read_bytes())
    except InkError as e:
        _die(EXIT_BAD_INPUT, f"{path}: {e}")


@click.group()
def main():
    """Kanji sketch tutor engine."""


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path())
def validate(paths):
    """Validate .shape description files and .ink sketches."""
    failed = False
    for path in paths:
        p = Path(path)
        if not p.exists():
            _die(EXIT_MISSING_FILE, f"file not found: {path}")
        try:
            if p.suffix == ".ink":
                load_ink(p.read_bytes())
            else:
                parse_description(p.read_text(encoding="utf-8"))
            click.echo(f"{path}: ok")
        except (InkError, ShapeSyntaxError, ShapeValidationError) as e:
            failed = True
            click.echo(f"{path}: {e}", err=True)
    sys.exit(EXIT_BAD_INPUT if failed else EXIT_PASS)


@main.command()
@click.argument("ink_path", type=click.Path())
@_engine_options
def recognize(ink_path, shapes_dir, config_path, profile):
    """Classify an ink file against every shape in the library."""
    lib, tol, seg_cfg, _ = _load_engine(shapes_dir, config_path, profile)
    sketch = _read_ink(ink_path)
    primitives = segment(sketch, seg_cfg).primitives
    names = classify(primitives, lib, tol)
    click.echo(dumps_canonical({"classification": names, "primitiveCount": len(primitives)}))
    sys.exit(EXIT_PASS if names else EXIT_NO_MATCH)


@main.command()
@click.argument("ink_path", type=click.Path())
@click.argument("kanji_name")
@_engine_options
def critique(ink_path, kanji_name, shapes_dir, config_path, profile):
    """Grade an ink file against one named shape: structure then technique."""
    lib, tol, seg_cfg, _ = _load_engine(shapes_dir, config_path, profile)
    if kanji_name not in lib:
        _die(EXIT_BAD_INPUT, f"unknown shape {kanji_name!r}")
    sketch = _read_ink(ink_path)
    verdict, _ = recognize_with_recovery(sketch, kanji_name, lib, tol, seg_cfg)
    technique = None
    if verdict.matched:
        technique = run_critique(verdict.binding, build_plan(lib[kanji_name], lib), sketch)
    click.echo(dumps_canonical({
        "shape": kanji_name,
        "visual": verdict_to_dict(verdict),
        "technique": technique_to_dict(technique),
        "overallPass": bool(technique and technique.overall_pass),
    }))
    if not verdict.matched:
        sys.exit(EXIT_NO_MATCH)
    sys.exit(EXIT_PASS if technique.overall_pass else EXIT_VIOLATIONS)


@main.command(name="batch-eval")
@click.argument("corpus_dir", type=click.Path())
@_engine_options
@click.option("--json", "json_only", is_flag=True, help="Emit only the JSON report body.")
def batch_eval_cmd(corpus_dir, shapes_dir, config_path, profile, json_only):
    """Grade a labeled corpus and report study-style metrics."""
    if not Path(corpus_dir).exists():
        _die(EXIT_MISSING_FILE, f"corpus directory not found: {corpus_dir}")
    lib, tol, seg_cfg, _ = _load_engine(shapes_dir, config_path, profile)
    report = batch_eval(corpus_dir, lib, tol, seg_cfg)
    click.echo(dumps_canonical(report))
    if not json_only:
        click.echo(summarize(report), err=True)
    sys.exit(EXIT_PASS)


@main.command()
@click.option("--port", default=8800, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--lessons", "lessons_dir", type=click.Path(), default=None,
              help="Directory of *.lesson.json files (default: shipped set).")
@click.option("--data", "data_dir", type=click.Path(), default="./hashigo-data", show_default=True,
              help="Directory for the append-only attempt log.")
@_engine_options
def serve(port, host, lessons_dir, data_dir, shapes_dir, config_path, profile):
    """Run the HTTP service used by the drawing UI."""
    import uvicorn

    from .server import create_app

    lib, tol, seg_cfg, mapping = _load_engine(shapes_dir, config_path, profile)
    lessons = Path(lessons_dir) if lessons_dir else default_lessons_dir()
    app = create_app(lib, lessons, Path(data_dir), tol, seg_cfg, mapping)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command(name="gen-corpus")
@click.argument("out_dir", type=click.Path())
@click.option("--replicas", default=3, show_default=True)
def gen_corpus(out_dir, replicas):
    """Regenerate the labeled synthetic evaluation corpus."""
    from .synth import generate_corpus

    written = generate_corpus(out_dir, replicas)
    click.echo(f"wrote {len(written)} samples to {out_dir}")


@main.command(name="gen-fixtures")
@click.argument("out_dir", type=click.Path())
def gen_fixtures(out_dir):
    """Regenerate the named ink fixtures."""
    from .synth import write_fixtures

    names = write_fixtures(out_dir)
    click.echo(f"wrote {len(names)} fixtures to {out_dir}")


if __name__ == "__main__":
    main()
