from __future__ import annotations

from pathlib import Path

import pytest

from adtrace.workspace import Workspace, load_workspace_files

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus" / "passing_parked_vehicles"
CORPUS_FILES = [
    CORPUS_DIR / "ontology.adt",
    CORPUS_DIR / "profile.adt",
    CORPUS_DIR / "model.adt",
]
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def corpus_ws() -> Workspace:
    return load_workspace_files(CORPUS_FILES)


@pytest.fixture(scope="session")
def corpus(corpus_ws):
    """(model, profile, ontology) of the passing-parked-vehicles corpus."""
    return corpus_ws.models[0], corpus_ws.profiles[0], corpus_ws.ontology
