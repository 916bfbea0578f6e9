"""Text-fidelity scoring for transcripts of rendered text.

Every function here is pure. The pipeline for a single candidate is

    normalize -> char_precision, tf_vector/cosine_similarity, brevity_adjustment
              -> score_candidate -> aggregate_score

and the final per-candidate score is ``cosine * brevity`` when the
term-frequency cosine clears the threshold, ``precision * brevity``
otherwise.
"""

from __future__ import annotations

import enum
import math
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .errors import EmptyReference, NoCandidates

DEFAULT_THRESHOLD = 0.9
PAD = " "


@dataclass(frozen=True)
class NormalizedText:
    original: str
    folded: str
    tokens: tuple[str, ...] = field(repr=False)

    @property
    def chars(self) -> tuple[str, ...]:
        return tuple(self.folded)

    @property
    def char_len(self) -> int:
        return len(self.folded)


def _fold_case(text: str) -> str:
    # str.lower() applies full case mapping; only U+0130 expands, and its
    # simple mapping is the first code point of the expansion.
    return "".join(c.lower()[0] for c in text)


def normalize(raw: str, case_fold: bool = True) -> NormalizedText:
    """Canonicalize ``raw`` for comparison.

    NFC composition, simple lowercase folding (skipped when
    ``case_fold`` is false), trimmed ends and interior whitespace runs
    collapsed to one ASCII space.
    """
    text = unicodedata.normalize("NFC", raw)
    if case_fold:
        text = unicodedata.normalize("NFC", _fold_case(text))
    tokens = tuple(text.split())
    return NormalizedText(original=raw, folded=" ".join(tokens), tokens=tokens)


def pad_candidate(candidate: NormalizedText, ref_len: int) -> list[str]:
    """First ``ref_len`` characters of the candidate, space-filled on the right."""
    if ref_len < 1:
        raise EmptyReference("reference length must be at least 1")
    head = list(candidate.folded[:ref_len])
    return head + [PAD] * (ref_len - len(head))


def char_precision(reference: NormalizedText, candidate: NormalizedText) -> float:
    """Fraction of reference positions matched exactly by the padded candidate."""
    n = reference.char_len
    if n == 0:
        raise EmptyReference("reference text is empty after normalization")
    padded = pad_candidate(candidate, n)
    matches = sum(1 for r, c in zip(reference.folded, padded) if r == c)
    return matches / n


@dataclass(frozen=True)
class TermVector:
    counts: dict[str, int]
    vocabulary: tuple[str, ...]

    def as_list(self) -> list[int]:
        return [self.counts.get(term, 0) for term in self.vocabulary]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def tf_vector(a: NormalizedText, b: NormalizedText) -> tuple[TermVector, TermVector]:
    """Raw term counts of ``a`` and ``b`` over their shared vocabulary.

    The vocabulary lists terms in first-appearance order, ``a`` first.
    """
    vocabulary = tuple(dict.fromkeys(a.tokens + b.tokens))
    ca, cb = Counter(a.tokens), Counter(b.tokens)
    return (
        TermVector({t: ca.get(t, 0) for t in vocabulary}, vocabulary),
        TermVector({t: cb.get(t, 0) for t in vocabulary}, vocabulary),
    )


def cosine_similarity(v_r: TermVector, v_c: TermVector) -> float:
    """Cosine of two count vectors; 0.0 if either has no terms."""
    if v_r.vocabulary != v_c.vocabulary:
        raise ValueError("term vectors must share a vocabulary")
    x, y = v_r.as_list(), v_c.as_list()
    dot = sum(a * b for a, b in zip(x, y))
    norm_sq_x = sum(a * a for a in x)
    norm_sq_y = sum(b * b for b in y)
    if norm_sq_x == 0 or norm_sq_y == 0:
        return 0.0
    # integer sums are exact; clamp rounding overshoot of the quotient
    return min(1.0, dot / math.sqrt(norm_sq_x * norm_sq_y))


def brevity_adjustment(ref_len: int, cand_len: int) -> float:
    """Penalty for candidates longer than the reference: exp(1 - m/n) when m >= n."""
    if ref_len < 1:
        raise EmptyReference("reference length must be at least 1")
    if cand_len < ref_len:
        return 1.0
    return math.exp(1.0 - cand_len / ref_len)


class Branch(str, enum.Enum):
    COSINE = "cosine"
    PRECISION = "precision"


@dataclass(frozen=True)
class ScoreBreakdown:
    precision: float
    cosine: float
    brevity: float
    ref_len: int
    cand_len: int
    branch: Branch
    final: float


def score_candidate(
    reference: NormalizedText,
    candidate: NormalizedText,
    threshold: float = DEFAULT_THRESHOLD,
) -> ScoreBreakdown:
    """Score one candidate against the reference.

    The cosine branch is taken only when ``cosine > threshold``; a
    cosine exactly at the threshold falls back to precision.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    n, m = reference.char_len, candidate.char_len
    precision = char_precision(reference, candidate)
    cosine = cosine_similarity(*tf_vector(reference, candidate))
    brevity = brevity_adjustment(n, m)
    if cosine > threshold:
        branch, base = Branch.COSINE, cosine
    else:
        branch, base = Branch.PRECISION, precision
    return ScoreBreakdown(
        precision=precision,
        cosine=cosine,
        brevity=brevity,
        ref_len=n,
        cand_len=m,
        branch=branch,
        final=base * brevity,
    )


@dataclass(frozen=True)
class AggregateScore:
    per_candidate: tuple[ScoreBreakdown, ...]
    mean: float

    @property
    def k(self) -> int:
        return len(self.per_candidate)


def aggregate_score(
    reference: NormalizedText,
    candidates: Sequence[NormalizedText],
    threshold: float = DEFAULT_THRESHOLD,
) -> AggregateScore:
    """Mean final score over all candidates for one reference."""
    if not candidates:
        raise NoCandidates("at least one candidate is required")
    per = tuple(score_candidate(reference, c, threshold) for c in candidates)
    # fsum is correctly rounded, so the mean does not depend on candidate order
    finals = [s.final for s in per]
    mean = math.fsum(finals) / len(finals)
    mean = min(max(mean, min(finals)), max(finals))
    return AggregateScore(per_candidate=per, mean=mean)


def score_texts(
    reference: str,
    candidates: Sequence[str],
    threshold: float = DEFAULT_THRESHOLD,
    case_fold: bool = True,
) -> AggregateScore:
    """Convenience wrapper over raw strings."""
    ref = normalize(reference, case_fold)
    return aggregate_score(ref, [normalize(c, case_fold) for c in candidates], threshold)
