from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for modelgen

from explaineo import engine
from explaineo.dsl import parse_model

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def fixture_source() -> str:
    return (FIXTURES / "tax_interest.dm").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def model(fixture_source):
    return parse_model(fixture_source)


@pytest.fixture(scope="session")
def crippled_model():
    return parse_model((FIXTURES / "tax_interest_crippled.dm").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def late_inputs_json() -> dict:
    return json.loads((FIXTURES / "late_inputs.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def ontime_inputs_json() -> dict:
    return json.loads((FIXTURES / "ontime_inputs.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def late_instance(model, late_inputs_json):
    return engine.evaluate(model, engine.decode_inputs(model, late_inputs_json))


@pytest.fixture(scope="session")
def ontime_instance(model, ontime_inputs_json):
    return engine.evaluate(model, engine.decode_inputs(model, ontime_inputs_json))
