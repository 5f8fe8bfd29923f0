"""Deterministic prompt template.

One fixed preamble, the original message verbatim, then three context
sections in fixed order (RecipientAttributes, LocationEvents,
CulturalNotes), one bullet line per bundle element. render() is the
canonical byte-stable serialization; the template is versioned so prompt
changes stay auditable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..context import ContextBundle

PROMPT_TEMPLATE_VERSION = 1

DEFAULT_PREAMBLE = (
    "Rewrite the original message for its recipient. Weave in only the "
    "context facts listed below. Do not invent facts, change commitments, "
    "or drop information from the original message."
)

SECTION_RECIPIENT_ATTRIBUTES = "RecipientAttributes"
SECTION_LOCATION_EVENTS = "LocationEvents"
SECTION_CULTURAL_NOTES = "CulturalNotes"


@dataclass
class Prompt:
    preamble: str
    original: str
    context_sections: list[tuple[str, list[str]]] = field(default_factory=list)

    def render(self) -> str:
        parts = [self.preamble, "", "Original message:", self.original]
        for title, lines in self.context_sections:
            parts.append("")
            parts.append(f"## {title}")
            parts.extend(lines)
        return "\n".join(parts) + "\n"

    def clauses(self) -> list[str]:
        """Section lines without the bullet prefix, in section order."""
        out = []
        for _, lines in self.context_sections:
            out.extend(line[2:] if line.startswith("- ") else line for line in lines)
        return out


def assemble_prompt(raw: str, bundle: ContextBundle,
                    preamble: str = DEFAULT_PREAMBLE) -> Prompt:
    attribute_lines = [f"- {a.key}: {a.value}" for a in bundle.attributes]
    event_lines = []
    note_lines = []
    if bundle.location_context is not None:
        event_lines = [
            f"- event[{e.category}/{e.status}]: {e.name}"
            for e in bundle.location_context.active_events
        ]
        note_lines = [f"- note: {note}" for note in bundle.location_context.cultural_notes]
    return Prompt(
        preamble=preamble,
        original=raw,
        context_sections=[
            (SECTION_RECIPIENT_ATTRIBUTES, attribute_lines),
            (SECTION_LOCATION_EVENTS, event_lines),
            (SECTION_CULTURAL_NOTES, note_lines),
        ],
    )
