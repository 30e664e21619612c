"""Phased citation classification.

Each citation gets exactly one label from the highest-precedence layer that
matches: self-citation (phase 1), co-authorship distance (phase 2), then
institutional tiers (phase 3). Multi-author citing works take the most
proximate relationship found across their authors, and every such rationale
says so. The four venue-governance labels are reserved taxonomy members and
are never produced here.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .affiliation import AffiliationTimeline, Tier, match_tier
from .graph import BEYOND, CoauthorGraph, bfs_distance
from .sources import CitationLink, InstitutionHierarchy


class CitationClass(Enum):
    SELF = "SELF"
    DIRECT_COAUTHOR = "DIRECT_COAUTHOR"
    TRANSITIVE_COAUTHOR = "TRANSITIVE_COAUTHOR"
    SAME_DEPT = "SAME_DEPT"
    SAME_INSTITUTION = "SAME_INSTITUTION"
    SAME_PARENT_ORG = "SAME_PARENT_ORG"
    VENUE_SELF_GOVERNANCE = "VENUE_SELF_GOVERNANCE"   # reserved
    VENUE_EDITOR_COAUTHOR = "VENUE_EDITOR_COAUTHOR"   # reserved
    VENUE_EDITOR_AFFIL = "VENUE_EDITOR_AFFIL"         # reserved
    VENUE_COMMITTEE = "VENUE_COMMITTEE"               # reserved
    EXTERNAL = "EXTERNAL"
    UNKNOWN = "UNKNOWN"


RESERVED_LABELS = frozenset({
    CitationClass.VENUE_SELF_GOVERNANCE,
    CitationClass.VENUE_EDITOR_COAUTHOR,
    CitationClass.VENUE_EDITOR_AFFIL,
    CitationClass.VENUE_COMMITTEE,
})


class Confidence(Enum):
    HIGH = "HIGH"
    MODERATE = "MODERATE"
    LOW = "LOW"


@dataclass(frozen=True)
class ClassifiedCitation:
    link: CitationLink
    label: CitationClass
    phase: int
    confidence: Confidence
    rationale: str


@dataclass
class ClassificationContext:
    target: str
    graph: CoauthorGraph
    timeline: AffiliationTimeline
    hierarchy: InstitutionHierarchy
    max_phase: int = 3
    depth: int = 2


_TIER_LABELS = {
    Tier.SAME_DEPT: CitationClass.SAME_DEPT,
    Tier.SAME_INSTITUTION: CitationClass.SAME_INSTITUTION,
    Tier.SAME_PARENT_ORG: CitationClass.SAME_PARENT_ORG,
    Tier.DIFFERENT: CitationClass.EXTERNAL,
    Tier.INSUFFICIENT_DATA: CitationClass.UNKNOWN,
}


def _crowd_note(link: CitationLink) -> str:
    n = len(link.citing_work.authors)
    return f"; most proximate of {n} citing authors" if n > 1 else ""


def classify_phase1(link: CitationLink, target: str) -> ClassifiedCitation | None:
    """SELF when any author id on the citing work matches the target."""
    if target in link.citing_work.author_ids():
        return ClassifiedCitation(
            link=link,
            label=CitationClass.SELF,
            phase=1,
            confidence=Confidence.HIGH,
            rationale=(f"SELF: citing work {link.citing_work.work_id} lists the "
                       f"target researcher {target} as an author (phase 1)"),
        )
    return None


def classify_phase2(link: CitationLink, graph: CoauthorGraph,
                    depth: int) -> ClassifiedCitation | None:
    """Label by the minimum BFS distance over the citing authors."""
    best_distance = BEYOND
    best_author = None
    for author in sorted(link.citing_work.authors, key=lambda a: a.author_id):
        d = bfs_distance(graph, author.author_id, depth)
        if d == 0:
            continue  # the target; phase 1 already ran
        if d != BEYOND and (best_distance == BEYOND or d < best_distance):
            best_distance = d
            best_author = author
    if best_distance == BEYOND:
        return None
    name = best_author.display_name or best_author.author_id
    edge = (graph.edges.get((graph.root, best_author.author_id))
            or graph.edges.get((best_author.author_id, graph.root)))
    if best_distance == 1:
        shared = edge.shared_papers if edge else 1
        last = edge.last_collaboration_year if edge else None
        detail = f"{shared} shared paper(s)" + (f", last in {last}" if last else "")
        return ClassifiedCitation(
            link=link,
            label=CitationClass.DIRECT_COAUTHOR,
            phase=2,
            confidence=Confidence.HIGH,
            rationale=(f"DIRECT_COAUTHOR: citing author {name} "
                       f"({best_author.author_id}) is a direct co-author, {detail}"
                       f"{_crowd_note(link)} (phase 2)"),
        )
    return ClassifiedCitation(
        link=link,
        label=CitationClass.TRANSITIVE_COAUTHOR,
        phase=2,
        confidence=Confidence.MODERATE,
        rationale=(f"TRANSITIVE_COAUTHOR: citing author {name} "
                   f"({best_author.author_id}) is at co-authorship distance "
                   f"{best_distance} of depth {depth}{_crowd_note(link)} (phase 2)"),
    )


def classify_phase3(link: CitationLink, timeline: AffiliationTimeline,
                    hierarchy: InstitutionHierarchy) -> ClassifiedCitation:
    """Map the institutional tier match onto the taxonomy."""
    match = match_tier(timeline, link.citing_work.authors,
                       link.citation_year, hierarchy)
    label = _TIER_LABELS[match.tier]
    year = link.citation_year

    if match.tier is Tier.INSUFFICIENT_DATA:
        if not timeline.entries_for_year(year):
            detail = (f"target has no affiliation data for citation year {year}"
                      if year is not None else
                      "citing work has no publication year to match against")
        else:
            detail = f"no citing author carries affiliation data for year {year}"
        return ClassifiedCitation(
            link=link, label=label, phase=3, confidence=Confidence.LOW,
            rationale=f"UNKNOWN: {detail}; excluded from scoring (phase 3)",
        )

    # tier evidence from a single affiliated author among several
    # unaffiliated ones is weak
    lone_voice = match.authors_with_data == 1 and match.authors_without_data >= 2

    if match.tier is Tier.DIFFERENT:
        confidence = Confidence.MODERATE if lone_voice else Confidence.HIGH
        return ClassifiedCitation(
            link=link, label=CitationClass.EXTERNAL, phase=3, confidence=confidence,
            rationale=(f"EXTERNAL: no self, co-authorship or institutional "
                       f"relationship detected; affiliations checked for year "
                       f"{year} (phase 3)"),
        )

    evidence = match.evidence
    institutions = ", ".join(evidence.institution_ids)
    who = evidence.citing_author_id
    if match.tier is Tier.SAME_DEPT:
        confidence = Confidence.LOW  # label-equality heuristic
        detail = (f"citing author {who} shares a department label at "
                  f"institution {institutions} in {year}")
    elif match.tier is Tier.SAME_INSTITUTION:
        confidence = Confidence.LOW if lone_voice else Confidence.MODERATE
        detail = (f"citing author {who} was at the same institution "
                  f"{institutions} in {year}")
    else:
        confidence = Confidence.LOW if lone_voice else Confidence.MODERATE
        detail = (f"citing author {who} shares parent organization "
                  f"{institutions} with the target in {year}")
    return ClassifiedCitation(
        link=link, label=label, phase=3, confidence=confidence,
        rationale=f"{label.value}: {detail}{_crowd_note(link)} (phase 3)",
    )


def _fallback(link: CitationLink, max_phase: int) -> ClassifiedCitation:
    """EXTERNAL label for links no enabled layer claimed (phases 1 and 2)."""
    no_authors = not link.citing_work.authors
    if max_phase == 1:
        rationale = "EXTERNAL: phase-1 semantics: non-self (phase 1)"
        phase = 1
    else:
        rationale = (f"EXTERNAL: no co-authorship path from any citing author "
                     f"within the configured depth (phase 2)")
        phase = 2
    if no_authors:
        rationale += "; citing work lists no authors"
    return ClassifiedCitation(
        link=link,
        label=CitationClass.EXTERNAL,
        phase=phase,
        confidence=Confidence.LOW if no_authors else Confidence.MODERATE,
        rationale=rationale,
    )


def classify_all(links: list[CitationLink],
                 context: ClassificationContext) -> list[ClassifiedCitation]:
    """Run the enabled layers over every link; output order matches input."""
    if context.max_phase not in (1, 2, 3):
        raise ValueError(f"max_phase must be 1, 2 or 3, got {context.max_phase}")
    out: list[ClassifiedCitation] = []
    for link in links:
        result = classify_phase1(link, context.target)
        if result is None and context.max_phase >= 2:
            result = classify_phase2(link, context.graph, context.depth)
        if result is None and context.max_phase >= 3:
            result = classify_phase3(link, context.timeline, context.hierarchy)
        if result is None:
            result = _fallback(link, context.max_phase)
        out.append(result)
    return out
