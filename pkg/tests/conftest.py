import dataclasses
from pathlib import Path

import pytest

from simforge.compiler import lower
from simforge.document import parse_document, resolve_language
from simforge.document.model import SourcePos

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\nACCEPTANCE {name}: {report.outcome.upper()}")


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def pendulum_doc():
    return parse_document(
        (CORPUS / "pendulum.xml").read_text(encoding="utf-8"), doc_id="pendulum"
    )


@pytest.fixture(scope="session")
def pendulum_view(pendulum_doc):
    return resolve_language(pendulum_doc, None)


@pytest.fixture(scope="session")
def pendulum_irs(pendulum_view):
    return lower(pendulum_view)


def strip_positions(obj):
    """Structural form of a document AST with source positions removed."""
    if isinstance(obj, SourcePos):
        return None
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: strip_positions(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if f.name not in ("pos", "parse_warnings")
        }
    if isinstance(obj, list):
        return [strip_positions(v) for v in obj]
    if isinstance(obj, tuple):
        return tuple(strip_positions(v) for v in obj)
    if isinstance(obj, dict):
        return {k: strip_positions(v) for k, v in obj.items()}
    return obj
