"""Independent reference implementations used only by the tests.

Nothing here imports from the package; each function is written
straight from the definitions, favouring obviousness over speed.
"""

import math
from collections import Counter


def fold(s):
    return " ".join(s.lower().split())


def brute_precision(ref, cand):
    """Position-by-position match count over the reference length."""
    n = len(ref)
    hits = 0
    for i in range(n):
        c = cand[i] if i < len(cand) else " "
        if ref[i] == c:
            hits += 1
    return hits / n


def brute_brevity(n, m):
    if m < n:
        return 1.0
    return math.exp(1 - m / n)


def brute_cosine(ref, cand):
    a, b = Counter(ref.split()), Counter(cand.split())
    terms = set(a) | set(b)
    dot = sum(a[t] * b[t] for t in terms)
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    if na == 0 or nb == 0:
        return 0.0
    return dot / (na * nb)


def brute_score(ref_raw, cand_raw, threshold=0.9):
    ref, cand = fold(ref_raw), fold(cand_raw)
    cs = brute_cosine(ref, cand)
    ba = brute_brevity(len(ref), len(cand))
    base = cs if cs > threshold else brute_precision(ref, cand)
    return base * ba


def brute_mean(ref_raw, cands, threshold=0.9):
    return sum(brute_score(ref_raw, c, threshold) for c in cands) / len(cands)
