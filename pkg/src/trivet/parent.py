"""PARENT-style consistency scoring (word-overlap entailment model).

The score combines n-gram precision against a reference, with every
hypothesis n-gram additionally credited by the fraction of its tokens that
the table entails, and a recall that geometrically mixes reference recall
(entailment-weighted) with table recall (token-level longest common
subsequence over each record's values).

For gating generated templates the inputs are built artificially from the
template and its relation: the hypothesis is the template with both
placeholders neutralised to ``<entity>`` (so subject/object order can never
be penalised), the reference is the relation itself, and the table is a
single record whose attribute is the relation's space-separated words and
whose values are the two entity slots.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

from .model import (
    ENTITY_PLACEHOLDER,
    OBJECT_PLACEHOLDER,
    SUBJECT_PLACEHOLDER,
    Template,
)

DEFAULT_LAMBDA = 0.5
DEFAULT_MAX_N = 4

# Punctuation separated into standalone tokens (outside <...> spans).
_PUNCT = set(".,;:!?()'\"")

_SPAN_RE = re.compile(r"<[^<>]*>")

# Floor for probability terms entering a geometric combination; avoids
# log-of-zero while keeping degenerate scores effectively zero.
_PROB_FLOOR = 1e-12


class DegenerateRelationError(ValueError):
    """The relation tokenises to nothing, so no scoring inputs can be built."""


@dataclass(frozen=True)
class TableRecord:
    """One (attribute, values) entry of the grounding table."""

    attribute_tokens: tuple[str, ...]
    value_tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "attribute_tokens", tuple(self.attribute_tokens))
        object.__setattr__(self, "value_tokens", tuple(self.value_tokens))
        if not self.attribute_tokens or not self.value_tokens:
            raise ValueError("table record needs non-empty attribute and value token lists")


@dataclass(frozen=True)
class ParentInputs:
    """Hypothesis, reference, and table triple handed to parent_score.

    Empty hypothesis or reference token lists are legal here; parent_score
    reports them as a degenerate all-zero score.
    """

    hypothesis_tokens: tuple[str, ...]
    reference_tokens: tuple[str, ...]
    table: tuple[TableRecord, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "hypothesis_tokens", tuple(self.hypothesis_tokens))
        object.__setattr__(self, "reference_tokens", tuple(self.reference_tokens))
        object.__setattr__(self, "table", tuple(self.table))


@dataclass(frozen=True)
class ParentScore:
    """Entailed precision, combined recall, and their harmonic mean.

    parent_score guarantees f1 == 0 when precision + recall == 0 and the
    harmonic mean otherwise (within 1e-12). The identity is not enforced
    here because arithmetic means of scores (report.aggregate_parent) are
    also carried in this type.
    """

    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict[str, float]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def tokenize(text: str) -> list[str]:
    """Lowercase and split text into tokens.

    Punctuation characters become standalone tokens, except inside a
    ``<...>`` span, which always survives as a single token (this keeps
    ``<entity>`` and friends atomic). Splits on whitespace otherwise.
    """
    lowered = text.lower()
    tokens: list[str] = []
    pos = 0
    for m in _SPAN_RE.finditer(lowered):
        tokens.extend(_split_plain(lowered[pos : m.start()]))
        tokens.append(m.group(0))
        pos = m.end()
    tokens.extend(_split_plain(lowered[pos:]))
    return tokens


def _split_plain(segment: str) -> list[str]:
    out = []
    for ch in segment:
        out.append(f" {ch} " if ch in _PUNCT else ch)
    return "".join(out).split()


def build_parent_inputs(template: Template, relation: str) -> ParentInputs:
    """Construct the artificial hypothesis/reference/table for a template.

    Both placeholders map to the same ``<entity>`` token so that swapping
    subject and object cannot change the score. The table is one record:
    the relation's space-separated words as the attribute, two entity slots
    as the values.

    Raises DegenerateRelationError when the relation tokenises to nothing.
    """
    reference = tokenize(relation)
    if not reference:
        raise DegenerateRelationError(f"relation {relation!r} has no tokens")
    neutral = template.text.replace(SUBJECT_PLACEHOLDER, ENTITY_PLACEHOLDER).replace(
        OBJECT_PLACEHOLDER, ENTITY_PLACEHOLDER
    )
    attribute = tuple(w.lower() for w in relation.split(" ") if w)
    record = TableRecord(
        attribute_tokens=attribute,
        value_tokens=(ENTITY_PLACEHOLDER, ENTITY_PLACEHOLDER),
    )
    return ParentInputs(
        hypothesis_tokens=tuple(tokenize(neutral)),
        reference_tokens=tuple(reference),
        table=(record,),
    )


def entailment_prob(ngram: tuple[str, ...] | list[str], table: tuple[TableRecord, ...] | list[TableRecord]) -> float:
    """Fraction of the n-gram's tokens found anywhere in the table.

    The vocabulary is the union of all attribute and value tokens; for the
    artificial relation table the attribute words are the only content
    tokens, so they count as entailing.
    """
    if not ngram:
        raise ValueError("ngram must be non-empty")
    vocab = _table_vocabulary(table)
    return sum(1 for tok in ngram if tok in vocab) / len(ngram)


def _table_vocabulary(table) -> frozenset[str]:
    vocab: set[str] = set()
    for record in table:
        vocab.update(record.attribute_tokens)
        vocab.update(record.value_tokens)
    return frozenset(vocab)


def _ngram_counts(tokens: tuple[str, ...], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _lcs_length(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def _clamp(p: float) -> float:
    return min(1.0, max(_PROB_FLOOR, p))


def _geometric_mean(values: list[float]) -> float:
    return math.exp(sum(math.log(_clamp(v)) for v in values) / len(values))


def parent_score(
    inputs: ParentInputs,
    lam: float = DEFAULT_LAMBDA,
    max_n: int = DEFAULT_MAX_N,
) -> ParentScore:
    """Score a hypothesis against its reference and table.

    Per n-gram order n (skipping orders the hypothesis is too short for):

    * precision: every hypothesis n-gram counts fully up to its reference
      count and at its entailment probability beyond that;
    * reference recall: entailment-weighted clipped counts over reference
      n-grams, defined as 1 when no reference n-gram carries entailment
      weight.

    Orders combine by geometric mean (terms floored at 1e-12). Table recall
    is the mean per-record LCS coverage of the values by the hypothesis, and
    mixes with reference recall as ref^lam * table^(1-lam). An empty
    hypothesis or reference yields the degenerate all-zero score.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be within [0, 1], got {lam}")
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    hyp = inputs.hypothesis_tokens
    ref = inputs.reference_tokens
    if not hyp or not ref:
        return ParentScore(precision=0.0, recall=0.0, f1=0.0)

    vocab = _table_vocabulary(inputs.table)

    precisions: list[float] = []
    ref_recalls: list[float] = []
    for n in range(1, max_n + 1):
        hyp_counts = _ngram_counts(hyp, n)
        if not hyp_counts:
            continue  # hypothesis shorter than n: order undefined, skipped
        ref_counts = _ngram_counts(ref, n)

        num = 0.0
        denom = 0
        for gram, c_hyp in hyp_counts.items():
            clipped = min(c_hyp, ref_counts.get(gram, 0))
            w = _overlap(gram, vocab)
            num += clipped + (c_hyp - clipped) * w
            denom += c_hyp
        precisions.append(num / denom)

        rec_num = 0.0
        rec_denom = 0.0
        for gram, c_ref in ref_counts.items():
            w = _overlap(gram, vocab)
            rec_num += w * min(hyp_counts.get(gram, 0), c_ref)
            rec_denom += w * c_ref
        ref_recalls.append(rec_num / rec_denom if rec_denom > 0 else 1.0)

    precision = _geometric_mean(precisions)
    ref_recall = _geometric_mean(ref_recalls)

    if inputs.table:
        table_recall = sum(
            _lcs_length(rec.value_tokens, hyp) / len(rec.value_tokens) for rec in inputs.table
        ) / len(inputs.table)
    else:
        table_recall = 0.0  # nothing grounded, nothing recalled

    recall = _clamp(ref_recall) ** lam * _clamp(table_recall) ** (1.0 - lam)

    if precision + recall == 0.0:
        f1 = 0.0
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    return ParentScore(precision=precision, recall=recall, f1=f1)


def _overlap(gram: tuple[str, ...], vocab: frozenset[str]) -> float:
    return sum(1 for tok in gram if tok in vocab) / len(gram)


def score_template(
    template: Template,
    relation: str,
    lam: float = DEFAULT_LAMBDA,
    max_n: int = DEFAULT_MAX_N,
) -> ParentScore:
    """Build the artificial inputs for a template and score them."""
    return parent_score(build_parent_inputs(template, relation), lam=lam, max_n=max_n)
