"""Core domain types shared by every trivet module.

All types are immutable value objects. Constructors validate the structural
invariants; behavioural guarantees (e.g. which template the pipeline picks)
are asserted by the test suite, not here.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

SUBJECT_PLACEHOLDER = "<subject>"
OBJECT_PLACEHOLDER = "<object>"
ENTITY_PLACEHOLDER = "<entity>"

DEFAULT_EXAMPLE_CAP = 2


class ErrorKind(Enum):
    """Structural defects a template can exhibit, one per violated aspect."""

    MISSING_SUBJECT = "missing_subject"
    MULTIPLE_SUBJECTS = "multiple_subjects"
    MISSING_OBJECT = "missing_object"
    MULTIPLE_OBJECTS = "multiple_objects"
    ILLEGAL_PLACEHOLDER = "illegal_placeholder"


class ChosenSource(Enum):
    """Which stage produced the final template."""

    GENERATOR = "generator"
    CONSISTENCY_VALIDATOR = "consistency_validator"


@dataclass(frozen=True)
class Triple:
    """A single ⟨subject, relation, object⟩ fact.

    Fields are stored exactly as found in the source data; no normalisation.
    """

    subject: str
    relation: str
    object: str

    def __post_init__(self) -> None:
        for name in ("subject", "relation", "object"):
            if not getattr(self, name).strip():
                raise ValueError(f"triple {name} must be non-empty, got {getattr(self, name)!r}")

    def to_dict(self) -> dict[str, str]:
        return {"subject": self.subject, "relation": self.relation, "object": self.object}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Triple":
        return cls(subject=d["subject"], relation=d["relation"], object=d["object"])


@dataclass(frozen=True)
class RelationSample:
    """The example triples for one relation, used to prompt template generation.

    The prompting policy caps the number of examples (default 2); the cap is
    applied where samples are built from records (datasets.select_examples),
    so callers with a different configured cap are not rejected here.
    """

    relation: str
    triples: tuple[Triple, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "triples", tuple(self.triples))
        if not self.relation.strip():
            raise ValueError("relation must be non-empty")
        if len(self.triples) < 1:
            raise ValueError(f"sample for {self.relation!r} needs at least one triple")
        for t in self.triples:
            if t.relation != self.relation:
                raise ValueError(
                    f"triple relation {t.relation!r} does not match sample relation "
                    f"{self.relation!r}"
                )

    def to_dict(self) -> dict[str, Any]:
        return {"relation": self.relation, "triples": [t.to_dict() for t in self.triples]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RelationSample":
        return cls(d["relation"], tuple(Triple.from_dict(t) for t in d["triples"]))


@dataclass(frozen=True)
class Template:
    """A candidate verbalisation sentence, e.g. "<subject> was created by <object>."

    Holding a Template implies nothing about structural validity; the parser
    module judges that.
    """

    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("template text must be non-empty")


@dataclass(frozen=True)
class ParseError:
    """One violated structural condition, flagged by the rule-based parser.

    detail carries the offending placeholder text for ILLEGAL_PLACEHOLDER and
    the occurrence count for the missing/multiple kinds.
    """

    kind: ErrorKind
    detail: str = ""

    def to_dict(self) -> dict[str, str]:
        return {"kind": self.kind.value, "detail": self.detail}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ParseError":
        return cls(kind=ErrorKind(d["kind"]), detail=d.get("detail", ""))


@dataclass(frozen=True)
class ShotRecord:
    """Provenance of one generator shot: the raw completion, the template
    extracted from it, the parse errors found, and (for the surviving shot)
    the consistency score."""

    shot_index: int
    raw_completion: str
    template: Template
    errors: tuple[ParseError, ...]
    parent_f1: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "errors", tuple(self.errors))
        if self.shot_index < 0:
            raise ValueError("shot_index must be >= 0")

    def to_dict(self) -> dict[str, Any]:
        return {
            "shot_index": self.shot_index,
            "raw_completion": self.raw_completion,
            "template": self.template.text,
            "errors": [e.to_dict() for e in self.errors],
            "parent_f1": self.parent_f1,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ShotRecord":
        return cls(
            shot_index=d["shot_index"],
            raw_completion=d["raw_completion"],
            template=Template(d["template"]),
            errors=tuple(ParseError.from_dict(e) for e in d["errors"]),
            parent_f1=d.get("parent_f1"),
        )


@dataclass(frozen=True)
class PipelineResult:
    """The final chosen template for one relation plus full shot history.

    When the consistency stage never ran, the cv_* fields stay absent and the
    chosen source is the generator.
    """

    relation: str
    final_template: Template
    shots: tuple[ShotRecord, ...]
    cv_invoked: bool = False
    cv_template: Optional[Template] = None
    cv_f1: Optional[float] = None
    chosen_source: ChosenSource = ChosenSource.GENERATOR

    def __post_init__(self) -> None:
        object.__setattr__(self, "shots", tuple(self.shots))
        if not self.shots:
            raise ValueError("a result needs at least one shot")
        indices = [s.shot_index for s in self.shots]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError(f"shot indices must be strictly increasing, got {indices}")
        if not self.cv_invoked:
            if self.cv_template is not None or self.cv_f1 is not None:
                raise ValueError("cv fields must be absent when cv was not invoked")
            if self.chosen_source is not ChosenSource.GENERATOR:
                raise ValueError("chosen_source must be generator when cv was not invoked")

    @property
    def generator_f1(self) -> Optional[float]:
        """Score of the surviving generator shot (the one that was gated)."""
        for shot in self.shots:
            if shot.parent_f1 is not None:
                return shot.parent_f1
        return None

    @property
    def final_f1(self) -> Optional[float]:
        """Score of whichever template was chosen as final."""
        if self.chosen_source is ChosenSource.CONSISTENCY_VALIDATOR:
            return self.cv_f1
        return self.generator_f1

    def to_dict(self) -> dict[str, Any]:
        return {
            "relation": self.relation,
            "final_template": self.final_template.text,
            "shots": [s.to_dict() for s in self.shots],
            "cv_invoked": self.cv_invoked,
            "cv_template": self.cv_template.text if self.cv_template else None,
            "cv_f1": self.cv_f1,
            "chosen_source": self.chosen_source.value,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "PipelineResult":
        return cls(
            relation=d["relation"],
            final_template=Template(d["final_template"]),
            shots=tuple(ShotRecord.from_dict(s) for s in d["shots"]),
            cv_invoked=d["cv_invoked"],
            cv_template=Template(d["cv_template"]) if d.get("cv_template") else None,
            cv_f1=d.get("cv_f1"),
            chosen_source=ChosenSource(d["chosen_source"]),
        )


@dataclass(frozen=True)
class SampleFailure:
    """A sample whose backend calls failed; reported, never silently dropped."""

    relation: str
    error: str

    def to_dict(self) -> dict[str, Any]:
        return {"relation": self.relation, "failed": True, "error": self.error}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SampleFailure":
        return cls(relation=d["relation"], error=d["error"])
