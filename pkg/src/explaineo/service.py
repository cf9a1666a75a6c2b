"""HTTP service: models, instances, checks, and questions under /v1.

Stateless request handling over a file workspace; JSON in and out. Parse
and validation problems come back as 400 with positioned diagnostics,
missing artifacts as 404, and rule conflicts during evaluation as 409.
"""
from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import engine
from .builder import build_model_graph, instantiate
from .dsl import ModelError
from .explain import (
    BUILTIN_PROFILES, QTypeNotAllowed, QuestionError, catalogue_json,
)
from .explain.answers import VIEW_FILTERS
from .graph import GraphError
from .verification import VerificationError, get_check, run_all_checks
from .workspace import NotFound, Workspace, WorkspaceError, default_workspace_path


def create_app(workspace: Workspace | None = None,
               ui_dir: str | None = None) -> FastAPI:
    ws = workspace or Workspace(default_workspace_path())
    app = FastAPI(title="explaineo", version="0.1.0", docs_url=None, redoc_url=None)
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.exception_handler(ModelError)
    async def _model_error(_, exc: ModelError):
        return JSONResponse(status_code=400, content={
            "error": "invalid model",
            "diagnostics": [d.to_json() for d in exc.diagnostics],
        })

    @app.exception_handler(NotFound)
    async def _not_found(_, exc: NotFound):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(engine.ModelConflict)
    async def _conflict(_, exc: engine.ModelConflict):
        return JSONResponse(status_code=409, content={
            "error": str(exc), "variable": exc.variable, "rules": exc.rule_ids,
        })

    for exc_type in (WorkspaceError, QuestionError, QTypeNotAllowed,
                     VerificationError, engine.EngineError, GraphError,
                     json.JSONDecodeError):
        @app.exception_handler(exc_type)
        async def _bad_request(_, exc, _t=exc_type):
            return JSONResponse(status_code=400, content={"error": str(exc)})

    # --- models ---

    @app.get("/v1/models")
    def list_models():
        return ws.list_models()

    @app.put("/v1/models/{name}")
    async def put_model(name: str, request: Request):
        source = (await request.body()).decode("utf-8")
        model, revision = ws.put_model(name, source)
        return JSONResponse(status_code=201 if revision == 1 else 200, content={
            "name": name, "version": model.version, "revision": revision,
        })

    @app.get("/v1/models/{name}")
    def get_model(name: str):
        model, source, revision = ws.get_model(name)
        return {
            "name": name,
            "version": model.version,
            "revision": revision,
            "objects": [o.name for o in model.object_model],
            "rules": [r.name for r in model.rule_model],
            "services": [s.name for s in model.service_model],
            "source": source,
        }

    @app.get("/v1/models/{name}/graph")
    def get_model_graph(name: str, view: str = "full", instance: str | None = None):
        model, _, _ = ws.get_model(name)
        graph = build_model_graph(model)
        if instance is not None:
            _, decision, _ = ws.get_instance(instance)
            graph = instantiate(graph, decision)
        if view != "full":
            if view not in VIEW_FILTERS:
                raise QuestionError(
                    f"unknown view {view!r}; choose object, rule, service or full")
            node_labels, edge_labels = VIEW_FILTERS[view]
            graph = graph.filter(lambda n: n.label in node_labels,
                                 lambda e: e.label in edge_labels)
        return graph.to_json()

    # --- instances ---

    @app.post("/v1/models/{name}/instances")
    async def post_instance(name: str, request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "inputs" not in body:
            raise WorkspaceError("body must be a JSON object with an 'inputs' map")
        instance_id, instance = ws.put_instance(name, body["inputs"], body.get("id"))
        doc = engine.instance_to_json(instance)
        doc["id"] = instance_id
        return JSONResponse(status_code=201, content=doc)

    @app.get("/v1/instances")
    def list_instances():
        return ws.list_instances()

    @app.get("/v1/instances/{instance_id}")
    def get_instance(instance_id: str):
        _, instance, doc = ws.get_instance(instance_id)
        return doc

    # --- checks ---

    @app.post("/v1/models/{name}/checks/{check_id}")
    async def run_check(name: str, check_id: str, request: Request):
        body = await request.body()
        service = None
        if body:
            parsed = json.loads(body)
            service = parsed.get("service") if isinstance(parsed, dict) else None
        model, _, _ = ws.get_model(name)
        graph = build_model_graph(model)
        if check_id == "all":
            return [r.to_json() for r in run_all_checks(model, service, graph)]
        report = get_check(check_id)(model, graph, service)
        return report.to_json()

    # --- questions ---

    @app.get("/v1/questions")
    def questions():
        return catalogue_json()

    @app.get("/v1/profiles")
    def profiles():
        return [BUILTIN_PROFILES[name].to_json() for name in sorted(BUILTIN_PROFILES)]

    @app.post("/v1/ask")
    async def ask_question(request: Request):
        from .workspace import answer_question

        body = await request.json()
        if not isinstance(body, dict):
            raise WorkspaceError("body must be a JSON object")
        profile = body.get("profile")
        question = body.get("question")
        if not profile or not isinstance(question, dict):
            raise WorkspaceError("body needs 'profile' and 'question' fields")
        answer = answer_question(ws, profile, question)
        return answer.to_json()

    return app


def serve(addr: str = "127.0.0.1:8000", workspace_dir: str | None = None,
          ui_dir: str | None = None) -> None:
    import uvicorn

    host, _, port = addr.partition(":")
    ws = Workspace(workspace_dir) if workspace_dir else None
    uvicorn.run(create_app(ws, ui_dir),
                host=host or "127.0.0.1", port=int(port or 8000))
