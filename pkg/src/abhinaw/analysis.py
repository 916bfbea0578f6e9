"""Dataset evaluation, automated-vs-manual regression, and report output."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import statistics
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import AbhinawError, InputError, InsufficientPoints, UnknownReferenceId, ZeroVariance
from .metric import DEFAULT_THRESHOLD, aggregate_score, normalize
from .transcripts import Category, ReferenceEntry, TranscriptRecord

log = logging.getLogger(__name__)

HISTOGRAM_BINS = 10
TABLE_HEADER = ("text_length", "known_score", "unknown_score")
FLAT_HEADER = ("reference_id", "category", "text_length", "k", "abhinaw")


class IoFailure(AbhinawError):
    pass


@dataclass(frozen=True)
class ReferenceReport:
    reference_id: str
    reference_text: str
    category: Category
    text_length: int
    k: int
    abhinaw: float
    score_histogram: tuple[int, ...] | None = None


def histogram(scores: Iterable[float], bins: int = HISTOGRAM_BINS) -> tuple[int, ...]:
    """Counts over equal-width buckets of [0, 1]; 1.0 lands in the last bucket."""
    counts = [0] * bins
    for s in scores:
        counts[min(int(s * bins), bins - 1)] += 1
    return tuple(counts)


def missing_references(
    references: Sequence[ReferenceEntry], transcripts: Sequence[TranscriptRecord]
) -> list[str]:
    have = {t.reference_id for t in transcripts}
    return [r.reference_id for r in references if r.reference_id not in have]


def evaluate_dataset(
    references: Sequence[ReferenceEntry],
    transcripts: Sequence[TranscriptRecord],
    threshold: float = DEFAULT_THRESHOLD,
    case_fold: bool = True,
    jobs: int = 1,
) -> list[ReferenceReport]:
    """One pooled ABHINAW score per reference that has transcripts.

    All reads for a reference (every image, every repetition) are scored
    as one flat candidate pool. Candidates are ordered by (image_index,
    repetition_index), so the result does not depend on transcript order.
    References with no transcripts are logged and skipped.
    """
    by_id = {r.reference_id: r for r in references}
    pools: dict[str, list[TranscriptRecord]] = defaultdict(list)
    for pos, t in enumerate(transcripts, start=1):
        if t.reference_id not in by_id:
            raise UnknownReferenceId(t.reference_id, row=pos)
        pools[t.reference_id].append(t)

    def evaluate(entry: ReferenceEntry) -> ReferenceReport:
        pool = sorted(pools[entry.reference_id], key=lambda t: t.key)
        ref = normalize(entry.reference_text, case_fold)
        agg = aggregate_score(ref, [normalize(t.text, case_fold) for t in pool], threshold)
        return ReferenceReport(
            reference_id=entry.reference_id,
            reference_text=entry.reference_text,
            category=entry.category,
            text_length=entry.text_length,
            k=agg.k,
            abhinaw=agg.mean,
            score_histogram=histogram(s.final for s in agg.per_candidate),
        )

    todo = []
    for entry in references:
        if pools.get(entry.reference_id):
            todo.append(entry)
        else:
            log.warning("no transcripts for reference %s", entry.reference_id)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(evaluate, todo))
    return [evaluate(e) for e in todo]


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    pearson_r: float
    r_squared: float
    point_count: int
    points: tuple[tuple[str, float, float], ...] = field(default=(), repr=False)


def regress(
    x: Sequence[tuple[str, float]], y: Sequence[tuple[str, float]]
) -> RegressionResult:
    """Ordinary least squares of y on x after an inner join on key.

    Points keep the order of ``x``. When y is constant the correlation is
    undefined and reported as 0.
    """
    x_map = _keyed(x, "x")
    y_map = _keyed(y, "y")
    points = tuple((k, x_map[k], y_map[k]) for k in x_map if k in y_map)
    if len(points) < 2:
        raise InsufficientPoints(f"need at least 2 joined points, got {len(points)}")
    xs = [p[1] for p in points]
    ys = [p[2] for p in points]
    if len(set(xs)) == 1:
        raise ZeroVariance("x values have zero variance")
    slope, intercept = statistics.linear_regression(xs, ys)
    if len(set(ys)) == 1:
        r = 0.0
    else:
        r = max(-1.0, min(1.0, statistics.correlation(xs, ys)))
    return RegressionResult(slope, intercept, r, r * r, len(points), points)


def _keyed(pairs: Sequence[tuple[str, float]], name: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for key, value in pairs:
        if key in out:
            raise InputError(f"duplicate key {key!r} in {name}")
        if not math.isfinite(value):
            raise InputError(f"non-finite score for {key!r} in {name}")
        out[key] = float(value)
    return out


def regress_by_category(
    x: Sequence[tuple[str, float]],
    y: Sequence[tuple[str, float]],
    categories: dict[str, str],
) -> dict[str, RegressionResult]:
    """Separate fits per category, in first-seen order of ``x``."""
    groups: dict[str, list[tuple[str, float]]] = {}
    for key, value in x:
        groups.setdefault(categories.get(key, Category.OTHER.value), []).append((key, value))
    return {cat: regress(pairs, y) for cat, pairs in groups.items()}


# --- serialization -----------------------------------------------------------


def _fixed(value: float) -> float:
    return round(value, 4)


def report_to_dict(r: ReferenceReport) -> dict:
    d = {
        "reference_id": r.reference_id,
        "reference_text": r.reference_text,
        "category": r.category.value,
        "text_length": r.text_length,
        "k": r.k,
        "abhinaw": _fixed(r.abhinaw),
        "abhinaw_exact": r.abhinaw,
    }
    if r.score_histogram is not None:
        d["score_histogram"] = list(r.score_histogram)
    return d


def report_from_dict(d: dict) -> ReferenceReport:
    hist = d.get("score_histogram")
    return ReferenceReport(
        reference_id=d["reference_id"],
        reference_text=d["reference_text"],
        category=Category(d["category"]),
        text_length=int(d["text_length"]),
        k=int(d["k"]),
        abhinaw=float(d["abhinaw_exact"]),
        score_histogram=tuple(hist) if hist is not None else None,
    )


def regression_to_dict(r: RegressionResult) -> dict:
    d: dict = {"point_count": r.point_count}
    for name in ("slope", "intercept", "pearson_r", "r_squared"):
        value = getattr(r, name)
        d[name] = _fixed(value)
        d[f"{name}_exact"] = value
    d["points"] = [{"key": k, "x": x, "y": y} for k, x, y in r.points]
    return d


def regression_from_dict(d: dict) -> RegressionResult:
    return RegressionResult(
        slope=float(d["slope_exact"]),
        intercept=float(d["intercept_exact"]),
        pearson_r=float(d["pearson_r_exact"]),
        r_squared=float(d["r_squared_exact"]),
        point_count=int(d["point_count"]),
        points=tuple((p["key"], float(p["x"]), float(p["y"])) for p in d.get("points", ())),
    )


def report_json(
    reports: Sequence[ReferenceReport],
    regressions: dict[str, RegressionResult] | None = None,
    config: dict | None = None,
) -> str:
    doc = {
        "config": dict(config or {}),
        "references": [report_to_dict(r) for r in reports],
        "regressions": {k: regression_to_dict(v) for k, v in (regressions or {}).items()},
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_report_json(text: str):
    """Inverse of :func:`report_json`: (reports, regressions, config)."""
    doc = json.loads(text)
    reports = [report_from_dict(d) for d in doc.get("references", [])]
    regressions = {k: regression_from_dict(v) for k, v in doc.get("regressions", {}).items()}
    return reports, regressions, doc.get("config", {})


def _table_layout_ok(reports: Sequence[ReferenceReport]) -> bool:
    seen = set()
    for r in reports:
        if r.category is Category.OTHER:
            return False
        slot = (r.text_length, r.category)
        if slot in seen:
            return False
        seen.add(slot)
    return True


def report_csv(reports: Sequence[ReferenceReport]) -> str:
    """Length-by-category matrix when each (length, category) slot is unique,
    otherwise one flat row per reference."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if _table_layout_ok(reports):
        writer.writerow(TABLE_HEADER)
        cells: dict[int, dict[Category, float]] = defaultdict(dict)
        for r in reports:
            cells[r.text_length][r.category] = r.abhinaw
        for length in sorted(cells):
            row = cells[length]
            writer.writerow([
                length,
                *(f"{row[c]:.4f}" if c in row else "" for c in (Category.KNOWN, Category.UNKNOWN)),
            ])
    else:
        writer.writerow(FLAT_HEADER)
        for r in reports:
            writer.writerow(
                [r.reference_id, r.category.value, r.text_length, r.k, f"{r.abhinaw:.4f}"]
            )
    return buf.getvalue()


def emit_report(
    reports: Sequence[ReferenceReport],
    out_path: str | Path,
    fmt: str = "json",
    regressions: dict[str, RegressionResult] | None = None,
    plot: str | Path | None = None,
    config: dict | None = None,
) -> None:
    """Write the report in ``fmt`` (json or csv) and optionally an SVG plot.

    The plot shows the regression scatter when exactly one regression is
    given, otherwise ABHINAW score against text length.
    """
    from . import plot as plotting

    if fmt == "json":
        text = report_json(reports, regressions, config)
    elif fmt == "csv":
        text = report_csv(reports)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    _write(out_path, text)
    if plot is None:
        return
    if regressions and len(regressions) == 1:
        (name, reg), = regressions.items()
        svg = plotting.regression_svg(reg, title=f"{name}: y vs x")
    else:
        svg = plotting.length_svg(reports)
    _write(plot, svg)


def _write(path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc.strerror}") from exc


def load_scores(path: str | Path) -> tuple[list[tuple[str, float]], dict[str, str]]:
    """Read per-reference scores for regression.

    Accepts a JSON report (uses the exact scores) or a CSV with header
    columns ``reference_id`` and ``score`` and an optional ``category``.
    Returns (pairs, categories).
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    if path.suffix.lower() == ".json":
        try:
            reports, _, _ = parse_report_json(text)
        except (ValueError, KeyError) as exc:
            raise InputError(f"{path}: not a report file: {exc}") from exc
        return (
            [(r.reference_id, r.abhinaw) for r in reports],
            {r.reference_id: r.category.value for r in reports},
        )
    reader = csv.DictReader(io.StringIO(text))
    fields = reader.fieldnames or []
    if "reference_id" not in fields or "score" not in fields:
        raise InputError(f"{path}: header must include reference_id and score")
    pairs, cats = [], {}
    for row_no, row in enumerate(reader, start=2):
        try:
            score = float(row["score"])
        except (TypeError, ValueError):
            raise InputError(f"{path}: row {row_no}: bad score {row['score']!r}") from None
        pairs.append((row["reference_id"], score))
        if row.get("category"):
            cats[row["reference_id"]] = row["category"].strip().lower()
    return pairs, cats
