"""ABHINAW Score: text fidelity of text rendered in generated images."""

from .errors import EmptyReference, NoCandidates
from .metric import (
    AggregateScore,
    Branch,
    NormalizedText,
    ScoreBreakdown,
    TermVector,
    aggregate_score,
    brevity_adjustment,
    char_precision,
    cosine_similarity,
    normalize,
    pad_candidate,
    score_candidate,
    score_texts,
    tf_vector,
)

__version__ = "0.1.0"
