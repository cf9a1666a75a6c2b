"""Question catalogue and dispatch.

Exactly ten question types, split into the decision category (about one
evaluated case) and the system category (about the model itself). Each
entry carries a JSON-Schema fragment for its parameters so clients can
build forms at runtime; ask() enforces profile permissions, validates
parameters, dispatches, and applies the profile's detail radius and
vocabulary.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import jsonschema

from .answers import (
    Answer, Context, Question, QuestionError, answer_how, answer_how_to,
    answer_input, answer_output, answer_visualisation, answer_what,
    answer_what_if, answer_whether, answer_why, answer_why_not,
    answer_why_trace,
)
from .profiles import AudienceProfile
from ..verification import CHECK_IDS


class QTypeNotAllowed(Exception):
    """The audience profile does not cover this question type."""


@dataclass(frozen=True)
class QuestionSpec:
    qtype: str
    category: str  # decision | system
    description: str
    needs_instance: bool
    target_required: bool
    parameters: dict  # JSON-Schema for question.parameters
    handler: Callable[[Context, Question, str], Answer]

    def to_json(self) -> dict:
        return {
            "qtype": self.qtype,
            "category": self.category,
            "description": self.description,
            "needs_instance": self.needs_instance,
            "target_required": self.target_required,
            "parameters": self.parameters,
        }


def _dispatch_why(ctx: Context, question: Question, mode: str) -> Answer:
    if question.parameters.get("trace"):
        return answer_why_trace(ctx, question, mode)
    return answer_why(ctx, question, mode)


_NO_PARAMS = {"type": "object", "properties": {}, "additionalProperties": False}

CATALOGUE: dict[str, QuestionSpec] = {
    spec.qtype: spec
    for spec in (
        QuestionSpec(
            "What", "decision",
            "Show the decisions reached for one case and the data they used.",
            needs_instance=True, target_required=False,
            parameters=_NO_PARAMS,
            handler=answer_what),
        QuestionSpec(
            "WhatIf", "decision",
            "Re-run one case with changed input values and show what differs.",
            needs_instance=True, target_required=False,
            parameters={
                "type": "object",
                "properties": {
                    "overrides": {"type": "object", "minProperties": 1,
                                  "description": "input variable -> new value"},
                },
                "required": ["overrides"],
                "additionalProperties": False,
            },
            handler=answer_what_if),
        QuestionSpec(
            "Why", "decision",
            "Show which rule set the target value and which conditions held; "
            "set trace:true for the full chain from the inputs.",
            needs_instance=True, target_required=True,
            parameters={
                "type": "object",
                "properties": {"trace": {"type": "boolean", "default": False}},
                "additionalProperties": False,
            },
            handler=_dispatch_why),
        QuestionSpec(
            "WhyNot", "decision",
            "Show which conditions blocked an alternative value for the target.",
            needs_instance=True, target_required=True,
            parameters={
                "type": "object",
                "properties": {"alternative": {
                    "description": "the value that was not decided"}},
                "required": ["alternative"],
                "additionalProperties": False,
            },
            handler=answer_why_not),
        QuestionSpec(
            "HowTo", "decision",
            "Find every minimal completion of the open inputs that reaches a "
            "desired value for the target.",
            needs_instance=False, target_required=True,
            parameters={
                "type": "object",
                "properties": {
                    "value": {"description": "the desired value"},
                    "fixed_inputs": {"type": "object",
                                     "description": "already-known input values"},
                },
                "required": ["value"],
                "additionalProperties": False,
            },
            handler=answer_how_to),
        QuestionSpec(
            "Input", "system",
            "List the input messages and variables a service accepts.",
            needs_instance=False, target_required=False,
            parameters={
                "type": "object",
                "properties": {"service": {"type": "string"}},
                "additionalProperties": False,
            },
            handler=answer_input),
        QuestionSpec(
            "Output", "system",
            "List the output messages and variables a service can decide.",
            needs_instance=False, target_required=False,
            parameters={
                "type": "object",
                "properties": {"service": {"type": "string"}},
                "additionalProperties": False,
            },
            handler=answer_output),
        QuestionSpec(
            "How", "system",
            "Show how the target is derived in general: rules, conditions "
            "and sources, with no case data.",
            needs_instance=False, target_required=True,
            parameters=_NO_PARAMS,
            handler=answer_how),
        QuestionSpec(
            "Visualisation", "system",
            "Render a filtered view of the model graph: object, rule, "
            "service, or full.",
            needs_instance=False, target_required=False,
            parameters={
                "type": "object",
                "properties": {
                    "view": {"type": "string",
                             "enum": ["object", "rule", "service", "full"]},
                    "focus": {"type": "string",
                              "description": "centre the view on this element"},
                    "radius": {"type": "integer", "minimum": 0, "default": 2},
                },
                "required": ["view"],
                "additionalProperties": False,
            },
            handler=answer_visualisation),
        QuestionSpec(
            "Whether", "system",
            "Run one verification check and report whether it holds.",
            needs_instance=False, target_required=False,
            parameters={
                "type": "object",
                "properties": {
                    "check": {"type": "string", "enum": list(CHECK_IDS)},
                    "service": {"type": "string"},
                },
                "required": ["check"],
                "additionalProperties": False,
            },
            handler=answer_whether),
    )
}


def catalogue_json() -> list[dict]:
    return [CATALOGUE[qtype].to_json() for qtype in CATALOGUE]


def ask(profile: AudienceProfile, question: Question, ctx: Context) -> Answer:
    """Answer a question within a profile's permissions and presentation."""
    spec = CATALOGUE.get(question.qtype)
    if spec is None:
        raise QuestionError(
            f"unknown question type {question.qtype!r}; "
            f"available: {', '.join(CATALOGUE)}")
    if not profile.allows(question.qtype):
        raise QTypeNotAllowed(
            f"profile {profile.name!r} cannot ask {question.qtype}; "
            f"allowed: {', '.join(sorted(profile.allowed_qtypes))}")
    try:
        jsonschema.validate(question.parameters, spec.parameters)
    except jsonschema.ValidationError as exc:
        raise QuestionError(f"bad parameters for {question.qtype}: {exc.message}") from exc
    if spec.target_required and not question.target:
        raise QuestionError(f"{question.qtype} needs a target variable")
    answer = spec.handler(ctx, question, profile.vocabulary)
    return _trim(answer, profile, question)


def _trim(answer: Answer, profile: AudienceProfile, question: Question) -> Answer:
    """Apply the profile's detail radius around the question target."""
    if profile.detail_radius is None or not question.target:
        return answer
    target_id = f"var:{question.target}"
    if not answer.graph_view.has_node(target_id):
        return answer
    trimmed = answer.graph_view.neighbourhood(target_id, profile.detail_radius)
    return Answer(answer.question, answer.text, answer.tables, trimmed,
                  answer.citations)


# --- answer wire-format validation -------------------------------------------

_GRAPH_SCHEMA = {
    "type": "object",
    "properties": {
        "nodes": {"type": "array", "items": {
            "type": "object",
            "properties": {"id": {"type": "string"}, "label": {"type": "string"},
                           "properties": {"type": "object"}},
            "required": ["id", "label", "properties"],
        }},
        "edges": {"type": "array", "items": {
            "type": "object",
            "properties": {"id": {"type": "string"}, "from": {"type": "string"},
                           "to": {"type": "string"}, "label": {"type": "string"},
                           "properties": {"type": "object"}},
            "required": ["id", "from", "to", "label", "properties"],
        }},
    },
    "required": ["nodes", "edges"],
}

ANSWER_SCHEMA = {
    "type": "object",
    "properties": {
        "question": {
            "type": "object",
            "properties": {
                "qtype": {"type": "string"},
                "model": {"type": ["string", "null"]},
                "instance": {"type": ["string", "null"]},
                "target": {"type": ["string", "null"]},
                "parameters": {"type": "object"},
            },
            "required": ["qtype", "model", "instance", "target", "parameters"],
        },
        "text": {"type": "string"},
        "tables": {"type": "array", "items": {
            "type": "object",
            "properties": {
                "title": {"type": "string"},
                "columns": {"type": "array", "items": {"type": "string"}},
                "rows": {"type": "array",
                         "items": {"type": "array", "items": {"type": "string"}}},
            },
            "required": ["title", "columns", "rows"],
        }},
        "graph_view": _GRAPH_SCHEMA,
        "citations": {"type": "array", "items": {
            "type": "object",
            "properties": {"label": {"type": "string"}, "uri": {"type": "string"}},
            "required": ["label", "uri"],
        }},
    },
    "required": ["question", "text", "tables", "graph_view", "citations"],
}


def validate_answer_json(doc: dict) -> None:
    """Raise jsonschema.ValidationError when a document is not a valid Answer."""
    jsonschema.validate(doc, ANSWER_SCHEMA)
