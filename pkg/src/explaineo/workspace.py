"""File-directory persistence for models and instances.

Layout: <root>/models/<name>.dm (+ .meta.json with a revision counter) and
<root>/instances/<id>.json. Everything re-validates on load: model files are
re-parsed, stored instances are re-evaluated and must reproduce their stored
derived values. Writes are serialised; reads need no lock.
"""
from __future__ import annotations

import json
import os
import re
import threading
from pathlib import Path

from . import engine
from .dsl import DecisionModel, ModelError, parse_model
from .explain import Answer, Context, Question, ask, get_profile

ENV_WORKSPACE = "EXPLAINEO_WORKSPACE"
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*$")


class WorkspaceError(Exception):
    pass


class NotFound(WorkspaceError):
    pass


def default_workspace_path() -> Path:
    return Path(os.environ.get(ENV_WORKSPACE, "workspace"))


def _check_name(name: str, what: str) -> str:
    if not _NAME_RE.match(name):
        raise WorkspaceError(f"invalid {what} name {name!r}")
    return name


class Workspace:
    def __init__(self, root: Path | str):
        self.root = Path(root)
        self._lock = threading.RLock()
        (self.root / "models").mkdir(parents=True, exist_ok=True)
        (self.root / "instances").mkdir(parents=True, exist_ok=True)

    # --- models ---

    def _model_path(self, name: str) -> Path:
        return self.root / "models" / f"{_check_name(name, 'model')}.dm"

    def _meta_path(self, name: str) -> Path:
        return self.root / "models" / f"{name}.meta.json"

    def put_model(self, name: str, source: str) -> tuple[DecisionModel, int]:
        """Validate and store; bumps the revision when overwriting."""
        model = parse_model(source)  # raises ModelError with diagnostics
        if model.name != name:
            raise WorkspaceError(
                f"model declares name {model.name!r} but is being stored as {name!r}")
        with self._lock:
            path = self._model_path(name)
            revision = self.model_revision(name) + 1
            path.write_text(source, encoding="utf-8")
            self._meta_path(name).write_text(
                json.dumps({"revision": revision}), encoding="utf-8")
        return model, revision

    def model_revision(self, name: str) -> int:
        meta = self._meta_path(name)
        if not meta.exists():
            return 0
        return int(json.loads(meta.read_text(encoding="utf-8")).get("revision", 0))

    def get_model(self, name: str) -> tuple[DecisionModel, str, int]:
        path = self._model_path(name)
        if not path.exists():
            raise NotFound(f"no model called {name!r}")
        source = path.read_text(encoding="utf-8")
        return parse_model(source), source, self.model_revision(name)

    def list_models(self) -> list[dict]:
        entries = []
        for path in sorted((self.root / "models").glob("*.dm")):
            name = path.stem
            try:
                model, _, revision = self.get_model(name)
                entries.append({"name": name, "version": model.version,
                                "revision": revision})
            except ModelError:
                entries.append({"name": name, "version": None, "revision": None,
                                "error": "stored model no longer parses"})
        return entries

    # --- instances ---

    def _instance_path(self, instance_id: str) -> Path:
        return self.root / "instances" / f"{_check_name(instance_id, 'instance')}.json"

    def put_instance(self, model_name: str, inputs: dict,
                     instance_id: str | None = None) -> tuple[str, engine.DecisionInstance]:
        model, _, _ = self.get_model(model_name)
        decoded = engine.decode_inputs(model, inputs)
        instance = engine.evaluate(model, decoded)
        with self._lock:
            if instance_id is None:
                count = len(list((self.root / "instances").glob(f"{model_name}-*.json")))
                instance_id = f"{model_name}-{count + 1}"
            doc = engine.instance_to_json(instance)
            doc["id"] = instance_id
            self._instance_path(instance_id).write_text(
                json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        return instance_id, instance

    def get_instance(self, instance_id: str) -> tuple[str, engine.DecisionInstance, dict]:
        path = self._instance_path(instance_id)
        if not path.exists():
            raise NotFound(f"no instance called {instance_id!r}")
        doc = json.loads(path.read_text(encoding="utf-8"))
        model_name = doc.get("model")
        model, _, _ = self.get_model(model_name)
        instance = engine.instance_from_json(model, doc)  # re-validates
        return model_name, instance, doc

    def list_instances(self) -> list[dict]:
        entries = []
        for path in sorted((self.root / "instances").glob("*.json")):
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
                entries.append({"id": path.stem, "model": doc.get("model"),
                                "status": doc.get("status")})
            except (OSError, json.JSONDecodeError):
                entries.append({"id": path.stem, "model": None, "status": "unreadable"})
        return entries


# --- shared question orchestration (the CLI and HTTP service both use this,
# which is what keeps their answers identical) ---------------------------------

def load_context(workspace: Workspace, model_name: str,
                 instance_id: str | None = None) -> Context:
    model, _, _ = workspace.get_model(model_name)
    instance = None
    if instance_id is not None:
        instance_model, instance, _ = workspace.get_instance(instance_id)
        if instance_model != model_name:
            raise WorkspaceError(
                f"instance {instance_id!r} belongs to model {instance_model!r}, "
                f"not {model_name!r}")
    return Context.build(model, instance)


def answer_question(workspace: Workspace, profile_name: str,
                    question_doc: dict) -> Answer:
    """Answer a wire-format question against stored artifacts."""
    qtype = question_doc.get("qtype")
    if not qtype:
        raise WorkspaceError("question needs a 'qtype'")
    model_name = question_doc.get("model")
    if not model_name:
        raise WorkspaceError("question needs a 'model'")
    question = Question(
        qtype=qtype,
        model=model_name,
        instance=question_doc.get("instance"),
        target=question_doc.get("target"),
        parameters=dict(question_doc.get("parameters") or {}),
    )
    ctx = load_context(workspace, model_name, question.instance)
    try:
        profile = get_profile(profile_name)
    except KeyError as exc:
        raise WorkspaceError(str(exc.args[0])) from exc
    return ask(profile, question, ctx)
