from pathlib import Path

import pytest

from hashigo import default_lessons_dir, default_shapes_dir
from hashigo.constraints import ToleranceProfile
from hashigo.dsl import load_library
from hashigo.segmenter import SegmenterConfig

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
CORPUS = REPO_ROOT / "corpus"


@pytest.fixture(scope="session")
def lib():
    return load_library(default_shapes_dir())


@pytest.fixture(scope="session")
def tol():
    return ToleranceProfile()


@pytest.fixture(scope="session")
def seg_cfg():
    return SegmenterConfig()


@pytest.fixture(scope="session")
def fixtures_dir():
    assert FIXTURES.is_dir(), "run `hashigo gen-fixtures fixtures` from the repo root"
    return FIXTURES


@pytest.fixture(scope="session")
def corpus_dir():
    assert CORPUS.is_dir(), "run `hashigo gen-corpus corpus` from the repo root"
    return CORPUS


@pytest.fixture(scope="session")
def lessons_dir():
    return default_lessons_dir()
