"""Temporal affiliation timeline and institutional tier matching.

The target's timeline records which institutions (and department labels,
when present) their validated works attest for each year. A citing work is
compared against the timeline at its own publication year, exactly: no +/-1
tolerance, since mid-year moves are an accepted misclassification source and
the audit records the year used so results can be contested.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .sources import AuthorRef, InstitutionHierarchy, InstitutionNode, Work


class Tier(Enum):
    SAME_DEPT = "SAME_DEPT"
    SAME_INSTITUTION = "SAME_INSTITUTION"
    SAME_PARENT_ORG = "SAME_PARENT_ORG"
    DIFFERENT = "DIFFERENT"
    INSUFFICIENT_DATA = "INSUFFICIENT_DATA"


# most proximate first
_TIER_STRENGTH = {
    Tier.SAME_DEPT: 0,
    Tier.SAME_INSTITUTION: 1,
    Tier.SAME_PARENT_ORG: 2,
    Tier.DIFFERENT: 3,
}


@dataclass(frozen=True)
class TimelineEntry:
    institution: InstitutionNode
    department: str | None
    years: frozenset[int]


@dataclass
class AffiliationTimeline:
    entries: list[TimelineEntry] = field(default_factory=list)

    def entries_for_year(self, year: int | None) -> list[TimelineEntry]:
        if year is None:
            return []
        return [e for e in self.entries if year in e.years]


@dataclass(frozen=True)
class TierEvidence:
    institution_ids: tuple[str, ...]
    year: int | None
    citing_author_id: str | None = None


@dataclass(frozen=True)
class TierMatch:
    tier: Tier
    evidence: TierEvidence | None
    authors_with_data: int = 0
    authors_without_data: int = 0


def build_timeline(works: list[Work], target: str,
                   hierarchy: InstitutionHierarchy) -> AffiliationTimeline:
    """One entry per (institution, department) with its evidence years.

    Only the target's own author slots contribute; institution refs that the
    hierarchy could not resolve are treated as missing data.
    """
    years_by_key: dict[tuple[str, str | None], set[int]] = {}
    for work in works:
        if work.publication_year is None:
            continue
        for author in work.authors:
            if author.author_id != target:
                continue
            for ref in author.institutions:
                if not hierarchy.known(ref.institution_id):
                    continue
                key = (ref.institution_id, ref.department)
                years_by_key.setdefault(key, set()).add(work.publication_year)
    entries = [
        TimelineEntry(hierarchy.nodes[iid], dept, frozenset(years))
        for (iid, dept), years in years_by_key.items()
    ]
    entries.sort(key=lambda e: (e.institution.institution_id, e.department or ""))
    return AffiliationTimeline(entries)


def _pair_tier(ref_institution: str, ref_department: str | None,
               entry: TimelineEntry,
               hierarchy: InstitutionHierarchy) -> tuple[Tier, tuple[str, ...]]:
    entry_id = entry.institution.institution_id
    if ref_institution == entry_id:
        if (ref_department and entry.department
                and ref_department.casefold() == entry.department.casefold()):
            return Tier.SAME_DEPT, (entry_id,)
        return Tier.SAME_INSTITUTION, (entry_id,)
    shared = hierarchy.shares_ancestor(ref_institution, entry_id)
    if shared:
        return Tier.SAME_PARENT_ORG, tuple(sorted(shared))
    return Tier.DIFFERENT, ()


def match_tier(timeline: AffiliationTimeline,
               citing_authors: tuple[AuthorRef, ...] | list[AuthorRef],
               citation_year: int | None,
               hierarchy: InstitutionHierarchy) -> TierMatch:
    """Strongest institutional tier across all citing authors.

    INSUFFICIENT_DATA when the timeline has no entry for the citation year
    (rule a) or when no citing author carries usable affiliation data for it
    (rule b); both feed the UNKNOWN classification.
    """
    entries = timeline.entries_for_year(citation_year)

    usable: list[tuple[AuthorRef, list]] = []
    without_data = 0
    for author in citing_authors:
        refs = [r for r in author.institutions if hierarchy.known(r.institution_id)]
        if refs:
            usable.append((author, refs))
        else:
            without_data += 1

    if not entries or not usable:
        return TierMatch(Tier.INSUFFICIENT_DATA, None,
                         authors_with_data=len(usable),
                         authors_without_data=without_data)

    best: Tier = Tier.DIFFERENT
    best_evidence = TierEvidence(
        institution_ids=tuple(sorted({r.institution_id for _, refs in usable for r in refs})),
        year=citation_year,
    )
    for author, refs in sorted(usable, key=lambda pair: pair[0].author_id):
        for ref in sorted(refs, key=lambda r: (r.institution_id, r.department or "")):
            for entry in entries:
                tier, matched = _pair_tier(ref.institution_id, ref.department,
                                           entry, hierarchy)
                if _TIER_STRENGTH[tier] < _TIER_STRENGTH[best]:
                    best = tier
                    best_evidence = TierEvidence(matched, citation_year, author.author_id)
    return TierMatch(best, best_evidence,
                     authors_with_data=len(usable),
                     authors_without_data=without_data)
