"""Audience profiles: who may ask what, at which detail level and wording."""
from __future__ import annotations

from dataclasses import dataclass

PLAIN = "plain"
TECHNICAL = "technical"

DECISION_QTYPES = ("What", "WhatIf", "Why", "WhyNot", "HowTo")
SYSTEM_QTYPES = ("Input", "Output", "How", "Visualisation", "Whether")
ALL_QTYPES = DECISION_QTYPES + SYSTEM_QTYPES


@dataclass(frozen=True)
class AudienceProfile:
    name: str
    allowed_qtypes: frozenset[str]
    detail_radius: int | None  # None: no graph-view trimming
    vocabulary: str  # plain | technical

    def allows(self, qtype: str) -> bool:
        return qtype in self.allowed_qtypes

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "allowed_qtypes": [q for q in ALL_QTYPES if q in self.allowed_qtypes],
            "detail_radius": self.detail_radius,
            "vocabulary": self.vocabulary,
        }


#: model experts verify and inspect the system; legal support staff explain
#: individual decisions (and may look up what goes in and out)
BUILTIN_PROFILES: dict[str, AudienceProfile] = {
    "model_expert": AudienceProfile(
        name="model_expert",
        allowed_qtypes=frozenset(SYSTEM_QTYPES),
        detail_radius=None,
        vocabulary=TECHNICAL,
    ),
    "legal_support": AudienceProfile(
        name="legal_support",
        allowed_qtypes=frozenset(DECISION_QTYPES + ("Input", "Output")),
        detail_radius=6,
        vocabulary=PLAIN,
    ),
}


def get_profile(name: str) -> AudienceProfile:
    try:
        return BUILTIN_PROFILES[name]
    except KeyError:
        raise KeyError(
            f"unknown profile {name!r}; available: {', '.join(sorted(BUILTIN_PROFILES))}"
        ) from None


def default_profile_for(qtype: str) -> AudienceProfile:
    """The first built-in profile allowed to ask this question type."""
    for name in ("model_expert", "legal_support"):
        profile = BUILTIN_PROFILES[name]
        if profile.allows(qtype):
            return profile
    raise KeyError(f"no built-in profile allows {qtype!r}")
