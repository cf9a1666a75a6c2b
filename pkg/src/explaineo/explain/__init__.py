"""Question-driven explanations over models, instances, and their graphs."""
from __future__ import annotations

from .answers import (
    Answer, AnswerTable, Context, Question, QuestionError, answer_how,
    answer_how_to, answer_input, answer_output, answer_visualisation,
    answer_what, answer_what_if, answer_whether, answer_why, answer_why_not,
    answer_why_trace,
)
from .catalogue import (
    ANSWER_SCHEMA, CATALOGUE, QTypeNotAllowed, QuestionSpec, ask,
    catalogue_json, validate_answer_json,
)
from .profiles import (
    ALL_QTYPES, BUILTIN_PROFILES, DECISION_QTYPES, PLAIN, SYSTEM_QTYPES,
    TECHNICAL, AudienceProfile, default_profile_for, get_profile,
)

__all__ = [
    "ALL_QTYPES", "ANSWER_SCHEMA", "Answer", "AnswerTable", "AudienceProfile",
    "BUILTIN_PROFILES", "CATALOGUE", "Context", "DECISION_QTYPES", "PLAIN",
    "QTypeNotAllowed", "Question", "QuestionError", "QuestionSpec",
    "SYSTEM_QTYPES", "TECHNICAL", "answer_how", "answer_how_to",
    "answer_input", "answer_output", "answer_visualisation", "answer_what",
    "answer_what_if", "answer_whether", "answer_why", "answer_why_not",
    "answer_why_trace", "ask", "catalogue_json", "default_profile_for",
    "get_profile", "validate_answer_json",
]
