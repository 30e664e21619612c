"""ORCID cross-validation of the OpenAlex work list.

Matching is DOI-first (case-insensitive after normalization), then
normalized-title similarity at a 0.90 Levenshtein ratio, which favors
precision: a false merge contaminates the co-author graph, a false miss
only shrinks coverage. Coverage at or above 70% switches to hard-filter
mode; below it all works are kept and never-seen institutions are flagged
for optional human review.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import UnknownWorkId
from .sources import OrcidEntry, Work, normalize_doi

COVERAGE_THRESHOLD = 0.70
TITLE_SIMILARITY_THRESHOLD = 0.90
CAREER_SPAN_YEARS = 25


class MatchKind(Enum):
    DOI = "DOI"
    TITLE = "TITLE"
    NONE = "NONE"


class ValidationMode(Enum):
    HARD_FILTER = "HARD_FILTER"
    ANOMALY_FLAG = "ANOMALY_FLAG"
    SKIPPED = "SKIPPED"


@dataclass
class ValidationOutcome:
    mode: ValidationMode
    coverage: float
    validated_works: list[Work]
    flagged: list[tuple[Work, str]] = field(default_factory=list)
    excluded: list[tuple[Work, str]] = field(default_factory=list)
    flags_reviewed: bool = False
    user_exclusions: list[str] = field(default_factory=list)


_PUNCT_RE = re.compile(r"[^\w\s]")


def normalize_title(title: str) -> str:
    lowered = _PUNCT_RE.sub(" ", title.lower())
    return " ".join(lowered.split())


def levenshtein_ratio(a: str, b: str) -> float:
    """1 - edit_distance / max_length, in [0, 1]."""
    if a == b:
        return 1.0
    if not a or not b:
        return 0.0
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1,        # delete
                               current[j - 1] + 1,     # insert
                               previous[j - 1] + cost))  # substitute
        previous = current
    return 1.0 - previous[-1] / max(len(a), len(b))


def match_works(openalex: list[Work],
                orcid_entries: list[OrcidEntry]) -> list[tuple[Work, MatchKind]]:
    """Label each work with how (or whether) the ORCID record vouches for it."""
    dois = {normalize_doi(e.doi) for e in orcid_entries if e.doi}
    titles = [normalize_title(e.title) for e in orcid_entries if e.title]
    out: list[tuple[Work, MatchKind]] = []
    for work in openalex:
        if work.doi and normalize_doi(work.doi) in dois:
            out.append((work, MatchKind.DOI))
            continue
        normalized = normalize_title(work.title) if work.title else ""
        if normalized and any(
                levenshtein_ratio(normalized, t) >= TITLE_SIMILARITY_THRESHOLD
                for t in titles):
            out.append((work, MatchKind.TITLE))
            continue
        out.append((work, MatchKind.NONE))
    return out


def _institution_ids(work: Work) -> set[str]:
    return {ref.institution_id
            for author in work.authors
            for ref in author.institutions}


def validate(openalex: list[Work], orcid_entries: list[OrcidEntry],
             skip: bool = False) -> ValidationOutcome:
    """Choose hard-filter or anomaly-flag mode and apply it.

    Hard filter keeps only matched works. Anomaly flagging keeps everything
    but flags works whose every institution never appears in any matched
    work's affiliations (name variants are irrelevant: ids are compared).
    """
    if skip:
        return ValidationOutcome(
            mode=ValidationMode.SKIPPED,
            coverage=0.0,
            validated_works=list(openalex),
        )

    labeled = match_works(openalex, orcid_entries)
    matched = [w for w, kind in labeled if kind is not MatchKind.NONE]
    total = len(openalex)
    coverage = len(matched) / total if total else 0.0

    if coverage >= COVERAGE_THRESHOLD:
        excluded = [
            (w, f"not found in ORCID record (hard filter at {coverage:.0%} coverage)")
            for w, kind in labeled if kind is MatchKind.NONE
        ]
        return ValidationOutcome(
            mode=ValidationMode.HARD_FILTER,
            coverage=coverage,
            validated_works=matched,
            excluded=excluded,
        )

    seen_institutions: set[str] = set()
    for work in matched:
        seen_institutions |= _institution_ids(work)
    flagged = []
    for work, kind in labeled:
        if kind is not MatchKind.NONE:
            continue
        institutions = _institution_ids(work)
        if institutions and not institutions & seen_institutions:
            flagged.append((work, "unmatched in ORCID and affiliated only with "
                                  "institutions never seen in ORCID-matched works"))
    return ValidationOutcome(
        mode=ValidationMode.ANOMALY_FLAG,
        coverage=coverage,
        validated_works=list(openalex),
        flagged=flagged,
    )


def career_span_warning(works: list[Work]) -> str | None:
    """Suggest a start-year cutoff when the publication span exceeds 25 years."""
    years = [w.publication_year for w in works if w.publication_year is not None]
    if len(years) < 2:
        return None
    span = max(years) - min(years)
    if span > CAREER_SPAN_YEARS:
        suggested = max(years) - CAREER_SPAN_YEARS
        return (f"publication span is {span} years ({min(years)}-{max(years)}); "
                f"if OpenAlex merged another researcher's works, re-run with "
                f"--since YEAR (e.g. --since {suggested})")
    return None


def apply_exclusions(outcome: ValidationOutcome,
                     decisions: set[str]) -> ValidationOutcome:
    """Move user-confirmed flagged works into the excluded list."""
    flagged_ids = {w.work_id for w, _ in outcome.flagged}
    bad = decisions - flagged_ids
    if bad:
        raise UnknownWorkId(f"decisions reference works that were never flagged: "
                            f"{', '.join(sorted(bad))}")
    excluded = list(outcome.excluded)
    remaining_flags = []
    for work, reason in outcome.flagged:
        if work.work_id in decisions:
            excluded.append((work, "user-confirmed exclusion"))
        else:
            remaining_flags.append((work, reason))
    validated = [w for w in outcome.validated_works if w.work_id not in decisions]
    return replace(
        outcome,
        validated_works=validated,
        flagged=remaining_flags,
        excluded=excluded,
        flags_reviewed=True,
        user_exclusions=sorted(decisions),
    )
