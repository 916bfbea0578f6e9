#!/usr/bin/env python3
"""Write the known/unknown word study fixtures into data/.

    references.csv          20 reference words, lengths 1..10, known and unknown
    transcripts_table4.csv  10 images x 10 reads per reference, built so each
                            pooled score equals the published automated score
    scores_automated.csv    published automated scores, one row per reference
    scores_manual.csv       published manual scores, one row per reference

Each synthetic pool mixes exact reads, case and spacing variants, one-letter
misreads (score (L-1)/L), blank reads and total misreads (score 0). Only
rational scores are used, so pool means hit the targets exactly.

Usage: python scripts/make_table_fixtures.py [--out data]
"""

from __future__ import annotations

import argparse
import csv
import random
import string
from pathlib import Path

KNOWN = ["i", "at", "the", "Line", "Fruit", "Tables", "hundred", "thousand",
         "Knowledge", "basketball"]
UNKNOWN = ["v", "zl", "hua", "sfbj", "fzrsw", "miwwee", "ymbkgrc", "hfmhluxh",
           "abllcvisx", "csudcatayv"]
AUTOMATED = {
    "known": [0.94, 0.99, 1, 0.98, 0.93, 0.92, 0.83, 0.65, 0.77, 0.79],
    "unknown": [1, 0.86, 0.99, 0.76, 0.99, 0.97, 0.31, 0.48, 0.31, 0.34],
}
MANUAL = {
    "known": [0.86, 1, 1, 0.96, 0.91, 1, 0.83, 0.63, 0.75, 0.01],
    "unknown": [1, 0.85, 1, 0.8, 0.91, 0.97, 0.32, 0.42, 0.18, 0.37],
}
IMAGES, READS = 10, 10
MAX_PARTIAL_GROUPS = 2


def reference_rows():
    for prefix, category, words in (("k", "known", KNOWN), ("u", "unknown", UNKNOWN)):
        for length, word in enumerate(words, start=1):
            yield f"{prefix}{length}", word, category


def _other_letter(c: str, rng: random.Random) -> str:
    return rng.choice([x for x in string.ascii_lowercase if x != c.lower()])


def pool_for(word: str, target: float, rng: random.Random) -> list[str]:
    total = IMAGES * READS
    points = round(target * total)
    zeros = total - points
    length = len(word)
    groups = 0
    if length > 1:
        groups = min(MAX_PARTIAL_GROUPS, zeros, points // (length - 1))
    perfect = points - groups * (length - 1)
    zeros -= groups

    exact = [word, word.upper(), word.lower(), word.title(), f"  {word} "]
    pool = [exact[i % len(exact)] for i in range(perfect)]
    for _ in range(groups):
        # one misread per position: the group sums to length - 1
        for pos in range(length):
            pool.append(word[:pos] + _other_letter(word[pos], rng) + word[pos + 1:])
    for i in range(zeros):
        if i % 2 == 0:
            pool.append("")
        else:
            pool.append("".join(_other_letter(c, rng) for c in word))
    rng.shuffle(pool)
    assert len(pool) == total
    return pool


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "data")
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    refs = list(reference_rows())

    def open_csv(name):
        return open(args.out / name, "w", newline="", encoding="utf-8")

    with open_csv("references.csv") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["reference_id", "reference_text", "category"])
        w.writerows(refs)

    with open_csv("transcripts_table4.csv") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["reference_id", "image_index", "repetition_index", "text"])
        for ref_id, word, category in refs:
            target = AUTOMATED[category][len(word) - 1]
            pool = pool_for(word, target, rng)
            for n, text in enumerate(pool):
                w.writerow([ref_id, n // READS + 1, n % READS + 1, text])

    for name, table in (("scores_automated.csv", AUTOMATED), ("scores_manual.csv", MANUAL)):
        with open_csv(name) as fh:
            w = csv.writer(fh, lineterminator="\r\n")
            w.writerow(["reference_id", "category", "text_length", "score"])
            for ref_id, word, category in refs:
                w.writerow([ref_id, category, len(word), table[category][len(word) - 1]])
    print(f"wrote fixtures to {args.out}")


if __name__ == "__main__":
    main()
