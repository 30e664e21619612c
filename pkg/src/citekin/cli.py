"""Command-line interface.

Examples:
    citekin --orcid 0000-0002-1825-0097 --trajectory
    citekin --openalex-id A5023888391 --phase 2 --depth 3
    citekin --orcid 0000-0002-1825-0097 --confirm --export results.json

Every run prints the ethical disclaimer first, then the score panel,
classification summary and (with --trajectory) the cumulative career series.
Exit codes: 0 success, 2 usage, 3 identifier, 4 data fetch, 5 identity
decisions, 6 no classifiable citations, 7 weight config, 8 audit/export.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import errors
from .audit import AuditReport
from .classify import CitationClass, ClassifiedCitation
from .pipeline import AnalysisOptions, AnalysisResult, run_analysis
from .scoring import (ScoreSummary, TrajectoryPoint, WeightConfig, label_counts,
                      load_weights)
from .sources import SourceConfig, SourceMode, Work

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IDENTIFIER = 3
EXIT_FETCH = 4
EXIT_IDENTITY = 5
EXIT_NO_CLASSIFIABLE = 6
EXIT_WEIGHTS = 7
EXIT_AUDIT = 8

_ERROR_EXIT_CODES: list[tuple[tuple, int]] = [
    ((errors.UnrecognizedIdentifier, errors.InvalidChecksum), EXIT_IDENTIFIER),
    ((errors.AuthorNotFound, errors.NetworkFailure, errors.PartialFetch,
      errors.FixtureMissing, errors.OrcidUnavailable, errors.InstitutionUnknown,
      errors.CycleDetected), EXIT_FETCH),
    ((errors.UnknownWorkId,), EXIT_IDENTITY),
    ((errors.NoClassifiableCitations,), EXIT_NO_CLASSIFIABLE),
    ((errors.UnknownLabel, errors.WeightOutOfRange, errors.MalformedDocument),
     EXIT_WEIGHTS),
    ((errors.SchemaMismatch, errors.VersionUnsupported, errors.ReplayMismatch,
      errors.IoFailure), EXIT_AUDIT),
]


def exit_code_for(exc: Exception) -> int:
    for classes, code in _ERROR_EXIT_CODES:
        if isinstance(exc, classes):
            return code
    return 1


class ParseError(ValueError):
    """Confirmation input did not match the all/none/list/range grammar."""


def parse_confirm_input(line: str, n: int) -> set[int]:
    """Parse an exclusion decision over ``n`` flagged items (1-indexed).

    Accepted forms: ``all``, ``none``, comma lists (``1,3,5``) and dash
    ranges (``1-3,5``); duplicates collapse.
    """
    if n < 1:
        raise ValueError("parse_confirm_input requires at least one flagged item")
    text = line.strip().lower()
    if not text:
        raise ParseError("empty input; enter all, none, or item numbers like 1,3 or 1-3,5")
    if text == "all":
        return set(range(1, n + 1))
    if text == "none":
        return set()
    chosen: set[int] = set()
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise ParseError("empty list item; use comma-separated numbers or ranges")
        if "-" in token:
            parts = token.split("-")
            if len(parts) != 2 or not parts[0].strip().isdigit() or not parts[1].strip().isdigit():
                raise ParseError(f"malformed range {token!r}; expected START-END")
            lo, hi = int(parts[0]), int(parts[1])
            if lo > hi:
                raise ParseError(f"malformed range {token!r}; start exceeds end")
            span = range(lo, hi + 1)
        elif token.isdigit():
            span = [int(token)]
        else:
            raise ParseError(f"unknown token {token!r}; enter all, none, numbers or ranges")
        for index in span:
            if not 1 <= index <= n:
                raise ParseError(f"item {index} is out of range 1..{n}")
            chosen.add(index)
    return chosen


def prompt_decisions(flagged: list[tuple[Work, str]], input_fn=None,
                     out=None) -> set[str]:
    """Interactive review of flagged works; returns work ids to exclude."""
    if input_fn is None:
        input_fn = input
    if out is None:
        out = sys.stdout
    print("\nORCID validation flagged the following works:", file=out)
    for i, (work, reason) in enumerate(flagged, start=1):
        year = work.publication_year if work.publication_year is not None else "????"
        print(f"  [{i}] ({year}) {work.title or work.work_id}", file=out)
        print(f"      {reason}", file=out)
    while True:
        try:
            raw = input_fn("Exclude which? [all / none / 1,3,5 / 1-3,5]: ")
        except EOFError:
            print("no input; keeping all flagged works", file=out)
            return set()
        try:
            indices = parse_confirm_input(raw, len(flagged))
        except ParseError as exc:
            print(f"  {exc}", file=out)
            continue
        return {flagged[i - 1][0].work_id for i in indices}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

DISCLAIMER_BANNER = (
    "=" * 78 + "\n"
    "  ETHICAL NOTICE\n"
    "  BARON and HEROCON measure citation network structure, not research\n"
    "  quality, impact, or integrity. They should not be used for hiring,\n"
    "  promotion, or funding decisions.\n"
    + "=" * 78
)

_LABEL_ORDER = [
    CitationClass.SELF, CitationClass.DIRECT_COAUTHOR,
    CitationClass.TRANSITIVE_COAUTHOR, CitationClass.SAME_DEPT,
    CitationClass.SAME_INSTITUTION, CitationClass.SAME_PARENT_ORG,
    CitationClass.VENUE_SELF_GOVERNANCE, CitationClass.VENUE_EDITOR_COAUTHOR,
    CitationClass.VENUE_EDITOR_AFFIL, CitationClass.VENUE_COMMITTEE,
    CitationClass.EXTERNAL, CitationClass.UNKNOWN,
]


def render_report(summary: ScoreSummary | None,
                  classified: list[ClassifiedCitation],
                  trajectory: list[TrajectoryPoint] | None = None,
                  weights: WeightConfig | None = None) -> str:
    weights = weights or WeightConfig()
    lines = [DISCLAIMER_BANNER, ""]

    if summary is None:
        lines.append("Scores are undefined: no classifiable citations "
                     f"({len(classified)} total, all UNKNOWN).")
        return "\n".join(lines)

    lines += [
        "SCORE SUMMARY",
        f"  BARON score            {summary.baron:6.1f} %",
        f"  HEROCON score          {summary.herocon:6.1f} %",
        f"  Diagnostic gap         {summary.gap:6.1f} %  ({summary.gap_band.value})",
        f"  Total citations        {summary.total_citations:6d}",
        f"  Classifiable           {summary.classifiable:6d}",
        f"  Unknown (excluded)     {summary.unknown:6d}",
        f"  Data reliability       {summary.reliability.value}",
        "",
        "CLASSIFICATION SUMMARY",
        f"  {'label':<24} {'count':>6} {'share':>8} {'weight':>7}",
    ]
    counts = label_counts(classified)
    for label in _LABEL_ORDER:
        count = counts.get(label, 0)
        if count == 0:
            continue
        if label is CitationClass.UNKNOWN:
            share = "-"
            weight = "-"
        else:
            share = f"{100.0 * count / summary.classifiable:.1f} %"
            weight = f"{weights.weight(label):.2f}"
        lines.append(f"  {label.value:<24} {count:>6} {share:>8} {weight:>7}")

    if trajectory:
        lines += ["", "CAREER TRAJECTORY (cumulative)",
                  f"  {'year':<6} {'BARON':>7} {'HEROCON':>9} {'cites':>6}"]
        for point in trajectory:
            lines.append(f"  {point.year:<6} {point.baron:>7.1f} "
                         f"{point.herocon:>9.1f} {point.citations:>6}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citekin",
        description="Decompose a researcher's incoming citations by network "
                    "proximity and compute BARON / HEROCON scores.")
    who = parser.add_mutually_exclusive_group(required=True)
    who.add_argument("--orcid", help="researcher ORCID iD (bare or URL form)")
    who.add_argument("--openalex-id", help="OpenAlex author id, e.g. A5023888391")

    parser.add_argument("--phase", type=int, choices=(1, 2, 3), default=3,
                        help="deepest detection layer to run (default 3)")
    parser.add_argument("--depth", type=int, choices=(1, 2, 3), default=2,
                        help="co-author graph depth (default 2)")
    parser.add_argument("--since", type=int, metavar="YEAR",
                        help="only include works from YEAR onward")
    parser.add_argument("--herocon-weights", metavar="PATH",
                        help="JSON file overriding default HEROCON weights")
    parser.add_argument("--trajectory", "-t", action="store_true",
                        help="compute the cumulative career trajectory by year")
    parser.add_argument("--confirm", "-c", action="store_true",
                        help="review flagged works interactively before scoring")
    parser.add_argument("--no-orcid-check", action="store_true",
                        help="skip ORCID cross-validation")
    parser.add_argument("--no-audit", action="store_true",
                        help="skip audit file generation (not recommended)")
    parser.add_argument("--audit-dir", default="./audits", metavar="DIR",
                        help="directory for audit files (default ./audits)")
    parser.add_argument("--export", metavar="PATH",
                        help="export the score summary to JSON")
    parser.add_argument("--export-citations", metavar="PATH",
                        help="export the classified citation table to JSON")
    parser.add_argument("--figures", metavar="DIR",
                        help="render donut / network / trajectory figures plus a "
                             "citations.csv table into DIR")
    parser.add_argument("--fixture-dir", metavar="DIR",
                        help="run offline against stored API fixtures")
    parser.add_argument("--cache-dir", metavar="DIR",
                        help="disk cache for live API responses")
    parser.add_argument("--contact", metavar="EMAIL",
                        help="polite-pool contact email (or set CITEKIN_CONTACT)")
    parser.add_argument("--reference-year", type=int, metavar="YEAR",
                        help="pin the decay reference year (defaults to the run year)")
    parser.add_argument("--verbose", "-v", action="store_true",
                        help="verbose progress output")
    return parser


def options_from_args(args: argparse.Namespace) -> AnalysisOptions:
    weights = None
    if args.herocon_weights:
        try:
            document = json.loads(Path(args.herocon_weights).read_text(encoding="utf-8"))
        except OSError as exc:
            raise errors.MalformedDocument(f"cannot read weights file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise errors.MalformedDocument(f"weights file is not valid JSON: {exc}") from exc
        weights = load_weights(document)
    return AnalysisOptions(
        since=args.since,
        depth=args.depth,
        max_phase=args.phase,
        weights=weights,
        orcid_check=not args.no_orcid_check,
        confirm=args.confirm,
        trajectory=args.trajectory,
        audit=not args.no_audit,
        audit_dir=args.audit_dir,
        reference_year=args.reference_year,
    )


def source_config_from_args(args: argparse.Namespace) -> SourceConfig:
    if args.fixture_dir:
        return SourceConfig(mode=SourceMode.FIXTURE,
                            fixture_dir=Path(args.fixture_dir),
                            contact=args.contact)
    return SourceConfig(mode=SourceMode.LIVE,
                        cache_dir=Path(args.cache_dir) if args.cache_dir else None,
                        contact=args.contact)


def _export_summary(result: AnalysisResult, path: str) -> None:
    report = result.report
    summary = result.summary
    payload = {
        "researcher": {"kind": report.researcher_kind, "id": report.researcher_id,
                       "display_name": report.researcher_name},
        "generated_at": report.generated_at,
        "scores": None if summary is None else {
            "baron": summary.baron, "herocon": summary.herocon, "gap": summary.gap,
            "total_citations": summary.total_citations,
            "classifiable": summary.classifiable, "unknown": summary.unknown,
            "reliability": summary.reliability.value,
            "gap_band": summary.gap_band.value,
        },
        "label_counts": {label.value: count for label, count
                         in sorted(label_counts(report.citations).items(),
                                   key=lambda kv: kv[0].value)},
        "data_quality": report.data_quality,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def _export_citations(report: AuditReport, path: str) -> None:
    from .audit import to_json_dict
    Path(path).write_text(
        json.dumps(to_json_dict(report)["citations"], indent=2, sort_keys=True) + "\n",
        encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(message)s", stream=sys.stderr)

    raw_identifier = args.orcid if args.orcid else args.openalex_id

    try:
        options = options_from_args(args)
        source_config = source_config_from_args(args)
        result = run_analysis(raw_identifier, options, source_config,
                              decide=lambda flagged: prompt_decisions(flagged))
    except errors.NoClassifiableCitations as exc:
        print(DISCLAIMER_BANNER)
        print(f"\nScores are undefined: {exc}", file=sys.stderr)
        return EXIT_NO_CLASSIFIABLE
    except errors.CitekinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)

    report = result.report
    print(render_report(result.summary, report.citations, report.trajectory,
                        report.config.weights))
    for note in report.data_quality.get("warnings", []):
        print(f"note: {note}", file=sys.stderr)
    if result.audit_path:
        print(f"\nAudit written to {result.audit_path}")

    try:
        if args.export:
            _export_summary(result, args.export)
            print(f"Summary exported to {args.export}")
        if args.export_citations:
            _export_citations(report, args.export_citations)
            print(f"Citations exported to {args.export_citations}")
        if args.figures:
            from .report import render_figures
            written = render_figures(report, args.figures)
            print("Figures written: " + ", ".join(str(p) for p in written))
    except OSError as exc:
        print(f"error: export failed: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
