"""Record API responses as JSON fixtures for the frontend contract tests.

Runs the backend in-process (same HTTP surface the browser talks to) and
snapshots the documents the UI consumes. Re-run after backend changes:

    python3 frontend/scripts/record_fixtures.py
"""
from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

REPO = Path(__file__).resolve().parent.parent.parent
sys.path.insert(0, str(REPO / "src"))

from explaineo.service import create_app  # noqa: E402
from explaineo.workspace import Workspace  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "test" / "fixtures"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app(Workspace(tempfile.mkdtemp())))

    fixtures = REPO / "fixtures"
    for name in ("tax_interest", "tax_interest_crippled"):
        response = client.put(f"/v1/models/{name}",
                              content=(fixtures / f"{name}.dm").read_text())
        response.raise_for_status()
    late = json.loads((fixtures / "late_inputs.json").read_text())
    client.post("/v1/models/tax_interest/instances",
                json={"inputs": late, "id": "late"}).raise_for_status()

    def snap(name: str, method: str, path: str, body: dict | None = None) -> None:
        response = (client.get(path) if method == "get"
                    else client.post(path, json=body))
        response.raise_for_status()
        (OUT / f"{name}.json").write_text(
            json.dumps(response.json(), indent=2, ensure_ascii=False) + "\n")
        print(f"recorded {name}.json")

    snap("profiles", "get", "/v1/profiles")
    snap("questions", "get", "/v1/questions")
    snap("models", "get", "/v1/models")
    snap("model_tax_interest", "get", "/v1/models/tax_interest")
    snap("graph_full", "get", "/v1/models/tax_interest/graph?view=full")
    snap("graph_object", "get", "/v1/models/tax_interest/graph?view=object")
    snap("instance_late", "get", "/v1/instances/late")
    snap("check_io_paths_crippled", "post",
         "/v1/models/tax_interest_crippled/checks/io_paths",
         {"service": "TaxInterest"})
    snap("answer_why", "post", "/v1/ask", {
        "profile": "legal_support",
        "question": {"qtype": "Why", "model": "tax_interest",
                     "instance": "late", "target": "owes_tax_interest"}})
    snap("answer_why_trace", "post", "/v1/ask", {
        "profile": "legal_support",
        "question": {"qtype": "Why", "model": "tax_interest",
                     "instance": "late", "target": "owes_tax_interest",
                     "parameters": {"trace": True}}})
    snap("answer_what", "post", "/v1/ask", {
        "profile": "legal_support",
        "question": {"qtype": "What", "model": "tax_interest",
                     "instance": "late"}})
    snap("answer_whatif", "post", "/v1/ask", {
        "profile": "legal_support",
        "question": {"qtype": "WhatIf", "model": "tax_interest",
                     "instance": "late",
                     "parameters": {"overrides": {"payment_date": "2023-01-31"}}}})


if __name__ == "__main__":
    main()
