import json
from pathlib import Path

import pytest

from sqltutor.catalog import Vocabulary, load_database
from sqltutor.matcher import MatcherConfig
from sqltutor.service import TutorService
from sqltutor.textpipe import TextPipeline

PKG_DATA = Path(__file__).parent.parent / "src" / "sqltutor" / "data"
TEST_DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def vocabulary() -> Vocabulary:
    return Vocabulary.from_file(PKG_DATA / "vocabulary.json")


@pytest.fixture(scope="session")
def catalog(vocabulary):
    return load_database(
        PKG_DATA / "databases" / "music" / "schema.json",
        PKG_DATA / "databases" / "music",
        vocabulary,
        name="music",
    )


@pytest.fixture(scope="session")
def pipeline() -> TextPipeline:
    return TextPipeline()


@pytest.fixture(scope="session")
def config() -> MatcherConfig:
    return MatcherConfig()


@pytest.fixture(scope="session")
def corpus() -> list[dict]:
    return json.loads((TEST_DATA / "corpus.json").read_text(encoding="utf-8"))


@pytest.fixture()
def service(tmp_path) -> TutorService:
    return TutorService(submission_log=tmp_path / "submissions.jsonl")
