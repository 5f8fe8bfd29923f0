"""Message intent classification and the location-context gate.

Both are rule tables standing in for trained classifiers: intents match by
first phrase hit in a fixed rule order, and the gate is a per-intent
boolean map. Both are pluggable and config-overridable.
"""

from __future__ import annotations

from typing import Optional, Protocol, Sequence

from ..errors import ConfigError
from ..linking.types import MessageMetadata


class MessageIntent:
    APPOINTMENT_REMINDER = "AppointmentReminder"
    IN_PERSON_MEETING = "InPersonMeeting"
    RECRUITING = "Recruiting"
    JOB_EXPLORATION = "JobExploration"
    ONBOARDING = "Onboarding"
    EDUCATION_REMINDER = "EducationReminder"
    FOLLOW_UP_CARE = "FollowUpCare"
    OTHER = "Other"
    ALL = (APPOINTMENT_REMINDER, IN_PERSON_MEETING, RECRUITING, JOB_EXPLORATION,
           ONBOARDING, EDUCATION_REMINDER, FOLLOW_UP_CARE, OTHER)


# Ordered (intent, phrases): the first phrase found in the lowercased
# message decides. JobExploration has no default phrases; it is reachable
# through config or a plugged-in classifier.
DEFAULT_INTENT_RULES: tuple[tuple[str, tuple[str, ...]], ...] = (
    (MessageIntent.APPOINTMENT_REMINDER, ("appointment", "reminder of your")),
    (MessageIntent.IN_PERSON_MEETING, ("interview",)),
    (MessageIntent.RECRUITING, ("job opportunity",)),
    (MessageIntent.EDUCATION_REMINDER, ("submit", "assignment", "project")),
    (MessageIntent.FOLLOW_UP_CARE, ("visiting us", "doctor's instructions")),
    (MessageIntent.ONBOARDING, ("welcome to the team",)),
)

DEFAULT_LOCATION_GATE: dict[str, bool] = {
    MessageIntent.APPOINTMENT_REMINDER: True,
    MessageIntent.IN_PERSON_MEETING: True,
    MessageIntent.ONBOARDING: True,
    MessageIntent.FOLLOW_UP_CARE: True,
    MessageIntent.RECRUITING: False,
    MessageIntent.JOB_EXPLORATION: False,
    MessageIntent.EDUCATION_REMINDER: False,
    MessageIntent.OTHER: False,
}


class IntentClassifier(Protocol):
    def classify(self, message: str, metadata: MessageMetadata) -> str: ...


class RuleIntentClassifier:
    def __init__(self, rules: Optional[Sequence[tuple[str, Sequence[str]]]] = None):
        self.rules = tuple((intent, tuple(phrases))
                           for intent, phrases in (rules or DEFAULT_INTENT_RULES))
        for intent, phrases in self.rules:
            if intent not in MessageIntent.ALL:
                raise ConfigError("context.intent_rules", f"unknown intent {intent!r}")
            if not phrases:
                raise ConfigError("context.intent_rules", f"{intent}: empty phrase list")

    def classify(self, message: str, metadata: MessageMetadata) -> str:
        text = message.lower()
        for intent, phrases in self.rules:
            if any(phrase in text for phrase in phrases):
                return intent
        return MessageIntent.OTHER


class RuleLocationGate:
    def __init__(self, table: Optional[dict[str, bool]] = None):
        self.table = dict(table or DEFAULT_LOCATION_GATE)
        for intent in self.table:
            if intent not in MessageIntent.ALL:
                raise ConfigError("context.location_gate", f"unknown intent {intent!r}")
        missing = set(MessageIntent.ALL) - set(self.table)
        if missing:
            raise ConfigError("context.location_gate",
                              f"missing intents: {sorted(missing)}")

    def needs_location(self, intent: str) -> bool:
        return self.table[intent]


_DEFAULT_CLASSIFIER = RuleIntentClassifier()
_DEFAULT_GATE = RuleLocationGate()


def classify_intent(message: str, metadata: MessageMetadata,
                    classifier: Optional[IntentClassifier] = None) -> str:
    if not message:
        raise ValueError("message must be non-empty")
    return (classifier or _DEFAULT_CLASSIFIER).classify(message, metadata)


def needs_location_context(intent: str,
                           gate: Optional[RuleLocationGate] = None) -> bool:
    return (gate or _DEFAULT_GATE).needs_location(intent)
