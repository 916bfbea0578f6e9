"""Command-line entry point: ``abhinaw score|batch|regress|ocr-fetch``.

Exit codes: 0 success, 2 input or validation error, 3 OCR backend or
environment error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import analysis, ocr
from .errors import BackendError, InputError
from .metric import DEFAULT_THRESHOLD, normalize, score_candidate
from .transcripts import load_references, load_transcripts, write_transcripts

EXIT_OK, EXIT_INPUT, EXIT_BACKEND = 0, 2, 3

log = logging.getLogger("abhinaw")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _threshold(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("threshold must lie strictly between 0 and 1")
    return value


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # Shared by the top-level parser and every subcommand so the flags may
    # appear on either side of the subcommand name.
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--threshold", type=_threshold, default=default,
                   help=f"cosine gate, strict (default {DEFAULT_THRESHOLD})")
    p.add_argument("--no-case-fold", dest="case_fold", action="store_false", default=default,
                   help="compare case-sensitively")
    p.add_argument("--format", dest="output_format", choices=("json", "csv"), default=default,
                   help="output format (default json)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    parser = _Parser(prog="abhinaw", description=__doc__.split("\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("score", parents=[common], help="score one candidate against a reference")
    p.add_argument("--reference", required=True)
    p.add_argument("--candidate", required=True)

    p = sub.add_parser("batch", parents=[common], help="score a transcript dataset")
    p.add_argument("--references", required=True, type=Path)
    p.add_argument("--transcripts", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--plot", type=Path, help="write an SVG of score vs text length")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("regress", parents=[common], help="regress y scores on x scores")
    p.add_argument("--x", required=True, type=Path, help="automated scores (CSV or report JSON)")
    p.add_argument("--y", required=True, type=Path, help="manual scores (CSV or report JSON)")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--svg", type=Path)
    p.add_argument("--pooled", action="store_true", help="one fit over all categories")

    p = sub.add_parser("ocr-fetch", parents=[common], help="transcribe images via an OCR backend")
    p.add_argument("--images-dir", required=True, type=Path)
    p.add_argument("--reference-id", required=True)
    p.add_argument("--repetitions", type=int, default=10)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--backend", choices=("http", "fixture"), default="http")
    p.add_argument("--endpoint", help="HTTP OCR endpoint URL")
    p.add_argument("--config", type=Path, help="JSON file with endpoint/attempts/timeout/backoff")
    p.add_argument("--fixture", type=Path, help="JSON replay file for --backend fixture")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--attempts", type=int)
    p.add_argument("--timeout", type=float)
    return parser


def _config(args) -> dict:
    return {"threshold": args.threshold, "case_fold": args.case_fold}


def _fmt4(value: float) -> float:
    return round(value, 4)


def cmd_score(args) -> int:
    ref = normalize(args.reference, args.case_fold)
    cand = normalize(args.candidate, args.case_fold)
    b = score_candidate(ref, cand, args.threshold)
    row = {
        "precision": _fmt4(b.precision),
        "cosine": _fmt4(b.cosine),
        "brevity": _fmt4(b.brevity),
        "branch": b.branch.value,
        "final": _fmt4(b.final),
        "n": b.ref_len,
        "m": b.cand_len,
        "precision_exact": b.precision,
        "cosine_exact": b.cosine,
        "brevity_exact": b.brevity,
        "final_exact": b.final,
        "config": _config(args),
    }
    if args.output_format == "csv":
        row.pop("config")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
        writer.writeheader()
        writer.writerow({k: (f"{v:.4f}" if k in ("precision", "cosine", "brevity", "final") else v)
                         for k, v in row.items()})
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(json.dumps(row, indent=2) + "\n")
    return EXIT_OK


def cmd_batch(args) -> int:
    references = load_references(args.references)
    transcripts = load_transcripts(args.transcripts, {r.reference_id for r in references})
    if not transcripts:
        log.warning("%s has no transcript rows; writing an empty report", args.transcripts)
    reports = analysis.evaluate_dataset(
        references, transcripts, args.threshold, args.case_fold, jobs=args.jobs
    )
    analysis.emit_report(
        reports, args.out, args.output_format, plot=args.plot, config=_config(args)
    )
    for r in reports:
        print(f"{r.reference_id}\t{r.category.value}\tlen={r.text_length}\tk={r.k}\t"
              f"abhinaw={r.abhinaw:.4f}")
    return EXIT_OK


def cmd_regress(args) -> int:
    x, x_cats = analysis.load_scores(args.x)
    y, y_cats = analysis.load_scores(args.y)
    categories = {**y_cats, **x_cats}
    if args.pooled or not categories:
        results = {"all": analysis.regress(x, y)}
    else:
        results = analysis.regress_by_category(x, y, categories)
    if args.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["category", "point_count", "slope", "intercept", "pearson_r", "r_squared"])
        for name, r in results.items():
            writer.writerow([name, r.point_count, *(f"{v:.4f}" for v in
                            (r.slope, r.intercept, r.pearson_r, r.r_squared))])
        analysis._write(args.out, buf.getvalue())
    else:
        analysis._write(args.out, analysis.report_json([], results, _config(args)))
    if args.svg is not None:
        from .plot import regression_svg

        for name, r in results.items():
            path = args.svg if len(results) == 1 else args.svg.with_name(
                f"{args.svg.stem}_{name}{args.svg.suffix}")
            analysis._write(path, regression_svg(r, title=f"{name}: manual vs automated"))
    for name, r in results.items():
        print(f"{name}\tn={r.point_count}\tslope={r.slope:.4f}\tintercept={r.intercept:.4f}\t"
              f"r={r.pearson_r:.4f}\tr2={r.r_squared:.4f}")
    return EXIT_OK


def _load_backend_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read backend config {path}: {exc}") from exc


def cmd_ocr_fetch(args) -> int:
    if args.repetitions < 1:
        raise InputError("--repetitions must be >= 1")
    conf = _load_backend_config(args.config)
    policy = ocr.RetryPolicy(
        attempts=args.attempts or conf.get("attempts", 3),
        timeout=args.timeout or conf.get("timeout", 60.0),
        backoff=conf.get("backoff", 0.5 if args.backend == "http" else 0.0),
    )
    if not args.images_dir.is_dir():
        raise InputError(f"{args.images_dir} is not a directory")
    paths = ocr.list_images(args.images_dir)
    if not paths:
        raise InputError(f"no images found in {args.images_dir}")
    images = [p.read_bytes() for p in paths]
    if args.backend == "fixture":
        if args.fixture is None:
            raise InputError("--backend fixture requires --fixture")
        try:
            backend = ocr.FixtureBackend.from_json(
                args.fixture, {p.name: b for p, b in zip(paths, images)}, policy
            )
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read fixture {args.fixture}: {exc}") from exc
    else:
        backend = ocr.HttpBackend.from_env(args.endpoint or conf.get("endpoint", ""), policy)
    result = ocr.fetch_transcripts(backend, images, args.repetitions, args.reference_id, args.jobs)
    write_transcripts(result.records, args.out)
    print(f"wrote {len(result.records)} transcripts to {args.out}")
    if result.failures:
        print(f"{len(result.failures)} failed reads", file=sys.stderr)
        for f in result.failures:
            print(f"  {paths[f.image_index - 1].name}: {f}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "score": cmd_score,
    "batch": cmd_batch,
    "regress": cmd_regress,
    "ocr-fetch": cmd_ocr_fetch,
}


def main(argv=None) -> int:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("warning: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.WARNING)
    try:
        return _run(argv)
    finally:
        log.removeHandler(handler)


def _run(argv) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name, value in (("threshold", DEFAULT_THRESHOLD), ("case_fold", True),
                        ("output_format", "json")):
        if getattr(args, name, None) is None:
            setattr(args, name, value)
    try:
        return COMMANDS[args.command](args)
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (InputError, analysis.IoFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
