import pytest

from javascale.extractor import extract_corpus, extract_project
from javascale.metrics import compute_metrics

from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_DIR = FIXTURES / "corpus"
MANIFEST = CORPUS_DIR / "manifest.txt"

FOONUMBER_ROOT = CORPUS_DIR / "p01_foonumber"
FOONUMBER_SOURCE = (FOONUMBER_ROOT / "src/foo/FooNumber.java").read_text()


@pytest.fixture(scope="session")
def foonumber_facts():
    return extract_project(FOONUMBER_ROOT, "p01_foonumber")


@pytest.fixture(scope="session")
def fixture_projects():
    return extract_corpus(MANIFEST)


@pytest.fixture(scope="session")
def fixture_corpus(fixture_projects):
    return [compute_metrics(facts) for facts in fixture_projects]
