import math

import pytest
from hypothesis import given, settings, strategies as st

from abhinaw import (
    Branch,
    EmptyReference,
    NoCandidates,
    aggregate_score,
    brevity_adjustment,
    char_precision,
    cosine_similarity,
    normalize,
    pad_candidate,
    score_candidate,
    tf_vector,
)
from abhinaw.metric import TermVector

from oracle import brute_precision


def vec(counts, vocab):
    return TermVector(dict(zip(vocab, counts)), tuple(vocab))


@pytest.mark.parametrize(
    "raw, folded",
    [
        ("Neural Information Processing Systems", "neural information processing systems"),
        ("the", "the"),
        ("  Sale   ends SUNDAY! ", "sale ends sunday!"),
        ("", ""),
        ("\tA\n b ", "a b"),
    ],
)
def test_normalize_examples(raw, folded):
    t = normalize(raw)
    assert t.folded == folded
    assert t.original == raw
    assert t.char_len == len(t.chars)


def test_normalize_case_sensitive_mode_keeps_case():
    assert normalize("  Sale  Ends ", case_fold=False).folded == "Sale Ends"


def test_normalize_composes_unicode():
    decomposed = "Cafe\u0301"
    assert normalize(decomposed).folded == "café"
    assert normalize(decomposed).char_len == 4


def test_normalize_dotted_capital_i_is_one_char():
    assert normalize("İ").folded == "i"


def test_tokens_keep_punctuation():
    assert normalize("Sale ends Sunday!").tokens == ("sale", "ends", "sunday!")


@given(st.text())
def test_normalize_invariants(raw):
    t = normalize(raw)
    assert normalize(t.folded).folded == t.folded
    assert " ".join(t.tokens) == t.folded
    assert all(t.tokens)
    assert t.char_len == len(t.chars)


@pytest.mark.parametrize(
    "cand, n, expected",
    [("the the", 3, ["t", "h", "e"]), ("th", 3, ["t", "h", " "]), ("", 3, [" ", " ", " "])],
)
def test_pad_candidate(cand, n, expected):
    assert pad_candidate(normalize(cand), n) == expected


def test_char_precision_examples():
    assert char_precision(normalize("game on"), normalize("gama on")) == pytest.approx(6 / 7, abs=1e-12)
    assert char_precision(normalize("the"), normalize("the the")) == 1.0
    # the position-wise definition gives 4 of 14, not 3 of 14
    assert char_precision(normalize("cat with a hat"), normalize("cat a hat with")) == pytest.approx(4 / 14)
    assert brute_precision("cat with a hat", "cat a hat with") == pytest.approx(4 / 14)


def test_char_precision_empty_candidate_matches_reference_spaces():
    assert char_precision(normalize("a b"), normalize("")) == pytest.approx(1 / 3)


def test_char_precision_empty_reference_raises():
    with pytest.raises(EmptyReference):
        char_precision(normalize("   "), normalize("x"))


def test_tf_vector_examples():
    v_r, v_c = tf_vector(normalize("the"), normalize("the the"))
    assert v_r.vocabulary == ("the",)
    assert (v_r.as_list(), v_c.as_list()) == ([1], [2])

    v_r, v_c = tf_vector(normalize("cat with a hat"), normalize("cat a hat with"))
    assert set(v_r.vocabulary) == {"cat", "with", "a", "hat"}
    assert v_r.as_list() == v_c.as_list() == [1, 1, 1, 1]

    v_r, v_c = tf_vector(normalize(""), normalize("x"))
    assert (v_r.as_list(), v_c.as_list()) == ([0], [1])
    assert v_c.total == 1


def test_cosine_examples():
    four = ["cat", "with", "a", "hat"]
    assert cosine_similarity(vec([1, 1, 1, 1], four), vec([1, 1, 1, 1], four)) == 1.0
    assert cosine_similarity(vec([1], ["the"]), vec([2], ["the"])) == 1.0
    assert cosine_similarity(vec([1, 0], ["a", "b"]), vec([0, 1], ["a", "b"])) == 0.0


def test_cosine_zero_vector_is_zero():
    v_r, v_c = tf_vector(normalize(""), normalize("x"))
    assert cosine_similarity(v_r, v_c) == 0.0


def test_cosine_rejects_mismatched_vocabulary():
    with pytest.raises(ValueError):
        cosine_similarity(vec([1], ["a"]), vec([1], ["b"]))


def test_brevity_examples():
    assert brevity_adjustment(3, 7) == pytest.approx(math.exp(-4 / 3), abs=1e-12)
    assert brevity_adjustment(3, 7) == pytest.approx(0.2644, abs=1e-3)
    assert brevity_adjustment(5, 5) == 1.0
    assert brevity_adjustment(10, 2) == 1.0
    with pytest.raises(EmptyReference):
        brevity_adjustment(0, 2)


def test_score_candidate_scenarios():
    b = score_candidate(normalize("the"), normalize("the the"))
    assert b.cosine == 1.0 and b.branch is Branch.COSINE
    assert b.final == pytest.approx(0.26360, abs=1e-5)
    assert (b.ref_len, b.cand_len) == (3, 7)

    b = score_candidate(normalize("the"), normalize("the"))
    assert (b.cosine, b.brevity, b.final) == (1.0, 1.0, 1.0)

    b = score_candidate(normalize("cat with a hat"), normalize("cat a hat with"))
    assert b.branch is Branch.COSINE
    assert (b.ref_len, b.cand_len, b.brevity, b.final) == (14, 14, 1.0, 1.0)


def test_threshold_is_strict():
    # two shared terms out of a 2x2 count vector: cosine exactly 0.5
    ref, cand = normalize("a b"), normalize("a c")
    b = score_candidate(ref, cand, threshold=0.5)
    assert b.cosine == pytest.approx(0.5)
    assert b.branch is Branch.PRECISION
    assert b.final == b.precision * b.brevity
    assert score_candidate(ref, cand, threshold=0.49).branch is Branch.COSINE


def test_threshold_out_of_range():
    with pytest.raises(ValueError):
        score_candidate(normalize("a"), normalize("a"), threshold=1.0)


def test_empty_candidate_takes_precision_branch():
    b = score_candidate(normalize("abc"), normalize(""))
    assert b.branch is Branch.PRECISION
    assert (b.precision, b.brevity, b.final, b.cand_len) == (0.0, 1.0, 0.0, 0)


def test_aggregate_examples():
    the = normalize("the")
    cands = [normalize(c) for c in ["the the", "the", "the", "the the", "the"]]
    agg = aggregate_score(the, cands)
    assert agg.k == 5
    assert agg.mean == pytest.approx((2 * math.exp(-4 / 3) + 3) / 5, abs=1e-12)
    assert agg.mean == pytest.approx(0.70544, abs=1e-5)
    assert [s.final for s in agg.per_candidate][:2] == [pytest.approx(0.2636, abs=1e-4), 1.0]

    assert aggregate_score(normalize("x"), [normalize("x")]).mean == 1.0

    game = aggregate_score(normalize("game on"), [normalize("gama on"), normalize("game on")])
    assert game.mean == pytest.approx((6 / 7 + 1) / 2, abs=1e-12)


def test_aggregate_requires_candidates():
    with pytest.raises(NoCandidates):
        aggregate_score(normalize("x"), [])


words = st.text(alphabet="abcAB", min_size=1, max_size=4)
phrases = st.lists(words, min_size=1, max_size=4).map(" ".join)


@settings(max_examples=300)
@given(phrases, st.text(alphabet="abcAB \t", max_size=12))
def test_score_bounds(ref, cand):
    b = score_candidate(normalize(ref), normalize(cand))
    for value in (b.precision, b.cosine, b.final):
        assert 0.0 <= value <= 1.0
    assert 0.0 < b.brevity <= 1.0
    assert (b.branch is Branch.COSINE) == (b.cosine > 0.9)
    assert (b.brevity == 1.0) == (b.cand_len <= b.ref_len)


@given(phrases)
def test_identity(ref):
    assert score_candidate(normalize(ref), normalize(ref)).final == 1.0


@given(st.lists(st.integers(0, 5), max_size=6), st.lists(st.integers(0, 5), max_size=6))
def test_cosine_symmetric(a, b):
    size = max(len(a), len(b))
    vocab = [f"t{i}" for i in range(size)]
    a = a + [0] * (size - len(a))
    b = b + [0] * (size - len(b))
    assert cosine_similarity(vec(a, vocab), vec(b, vocab)) == cosine_similarity(vec(b, vocab), vec(a, vocab))
