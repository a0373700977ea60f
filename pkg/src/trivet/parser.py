"""Rule-based template validation.

A structurally valid template contains exactly one ``<subject>`` placeholder,
exactly one ``<object>`` placeholder, and no other ``<...>`` spans. Matching
is byte-exact and case-sensitive: ``<Subject>`` is an illegal placeholder,
not a subject. A stray unmatched ``<`` or ``>`` is not a placeholder and
raises no error.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    OBJECT_PLACEHOLDER,
    SUBJECT_PLACEHOLDER,
    ErrorKind,
    ParseError,
    Template,
)

# Maximal <...> spans: "<" + any run of non-angle-bracket chars + ">".
_PLACEHOLDER_RE = re.compile(r"<[^<>]*>")


@dataclass(frozen=True)
class PlaceholderSpan:
    """One ``<...>`` span found in a template, with its character offsets."""

    text: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if not (self.text.startswith("<") and self.text.endswith(">")):
            raise ValueError(f"span text must be bracketed, got {self.text!r}")
        if "<" in self.text[1:-1] or ">" in self.text[1:-1]:
            raise ValueError(f"span text must not nest brackets, got {self.text!r}")


def find_placeholders(template_text: str) -> list[PlaceholderSpan]:
    """Return every ``<...>`` span in the text, left to right, non-overlapping."""
    return [
        PlaceholderSpan(text=m.group(0), start=m.start(), end=m.end())
        for m in _PLACEHOLDER_RE.finditer(template_text)
    ]


def check_conditions(template: Template) -> list[ParseError]:
    """Validate a template against the three structural conditions.

    Returns an empty list iff the template has exactly one ``<subject>``,
    exactly one ``<object>``, and no other ``<...>`` span. Otherwise one
    ParseError per violated aspect, with illegal spans reported individually
    so total error counts are well defined.
    """
    spans = find_placeholders(template.text)
    n_subject = sum(1 for s in spans if s.text == SUBJECT_PLACEHOLDER)
    n_object = sum(1 for s in spans if s.text == OBJECT_PLACEHOLDER)

    errors: list[ParseError] = []
    if n_subject == 0:
        errors.append(ParseError(ErrorKind.MISSING_SUBJECT, "0"))
    elif n_subject > 1:
        errors.append(ParseError(ErrorKind.MULTIPLE_SUBJECTS, str(n_subject)))
    if n_object == 0:
        errors.append(ParseError(ErrorKind.MISSING_OBJECT, "0"))
    elif n_object > 1:
        errors.append(ParseError(ErrorKind.MULTIPLE_OBJECTS, str(n_object)))
    for span in spans:
        if span.text not in (SUBJECT_PLACEHOLDER, OBJECT_PLACEHOLDER):
            errors.append(ParseError(ErrorKind.ILLEGAL_PLACEHOLDER, span.text))
    return errors


def is_valid(template: Template) -> bool:
    return not check_conditions(template)
