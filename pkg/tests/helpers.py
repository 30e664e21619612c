"""In-memory builders shared across the test suite."""

from __future__ import annotations

from citekin.affiliation import build_timeline
from citekin.classify import (CitationClass, ClassifiedCitation, Confidence)
from citekin.sources import (AuthorRef, CitationLink, InstitutionHierarchy,
                             InstitutionNode, InstitutionRef, Work)

TARGET = "A1"


def inst(iid: str, dept: str | None = None, name: str | None = None) -> InstitutionRef:
    return InstitutionRef(iid, name or iid, dept)


def author(aid: str, *insts: InstitutionRef, name: str | None = None) -> AuthorRef:
    return AuthorRef(aid, name or aid, tuple(insts))


def work(work_id: str, year: int | None, *authors: AuthorRef,
         title: str = "", doi: str | None = None) -> Work:
    return Work(work_id, title or f"title of {work_id}", doi, year, tuple(authors))


def link(citing: Work, cited: str = "W1") -> CitationLink:
    return CitationLink(citing, cited)


def hierarchy(parents: dict[str, list[str]] | None = None) -> InstitutionHierarchy:
    h = InstitutionHierarchy()
    for iid, parent_ids in (parents or {}).items():
        h.nodes[iid] = InstitutionNode(iid, iid, tuple(parent_ids))
        for pid in parent_ids:
            h.nodes.setdefault(pid, InstitutionNode(pid, pid, ()))
    return h


def classified(label: str, year: int | None = 2020,
               n: int = 0, phase: int = 3) -> ClassifiedCitation:
    """Minimal classified citation for scoring-level tests."""
    citing = work(f"C{label}{year}{n}", year, author("AX"))
    return ClassifiedCitation(
        link=CitationLink(citing, "W1"),
        label=CitationClass(label),
        phase=phase,
        confidence=Confidence.MODERATE,
        rationale=f"{label}: synthetic test citation (phase {phase})",
    )


def timeline_for(works, target, h):
    return build_timeline(list(works), target, h)


def random_report(rng):
    """Assemble a structurally valid random audit report in memory."""
    import random as _random

    from citekin.audit import (DISCLAIMER, SCHEMA_VERSION, AuditReport, RunConfig,
                               utc_now)
    from citekin.classify import ClassificationContext, classify_all
    from citekin.errors import NoClassifiableCitations
    from citekin.graph import GraphConfig, build_graph, prune_for_display
    from citekin.identity import ValidationMode, ValidationOutcome
    from citekin.scoring import WeightConfig, compute_scores, load_weights
    from citekin.scoring import trajectory as compute_trajectory

    h = hierarchy({"I_A": ["I_P"], "I_B": ["I_P"], "I_C": [], "I_P": []})
    years = list(range(2012, 2023))

    own = []
    for i in range(rng.randint(1, 5)):
        coauthors = [author(f"D{j}", inst(rng.choice(["I_A", "I_B", "I_C"])))
                     for j in range(rng.randint(0, 3))]
        own.append(work(f"W{i}", rng.choice(years),
                        author(TARGET, inst("I_A", dept="Physics"), name="Fuzz Target"),
                        *coauthors, doi=f"10.2/{i}"))
    expansion = [work(f"WX{i}", rng.choice(years), author(f"D{i}"), author(f"T{i}"))
                 for i in range(rng.randint(0, 3))]

    cfg = GraphConfig(depth=2, reference_year=2024)
    graph = build_graph(own, TARGET, cfg, expansion)
    timeline = timeline_for(own, TARGET, h)

    links = []
    covered_years = sorted({w.publication_year for w in own})
    for i in range(rng.randint(1, 25)):
        kind = rng.random()
        year = rng.choice(covered_years + [2030])  # 2030 is never in the timeline
        if kind < 0.1:
            authors = [author(TARGET)]
        elif kind < 0.3:
            authors = [author(f"D{rng.randint(0, 4)}", inst("I_B"))]
        elif kind < 0.5:
            authors = [author(f"B{i}", inst(rng.choice(["I_A", "I_B", "I_C"]),
                                            dept=rng.choice([None, "Physics"])))]
        elif kind < 0.9:
            authors = [author(f"B{i}", inst("I_C"))]
        else:
            authors = [author(f"B{i}")]
        links.append(link(work(f"C{i}", year, *authors), cited="W0"))

    context = ClassificationContext(target=TARGET, graph=graph, timeline=timeline,
                                    hierarchy=h, max_phase=3, depth=2)
    classified_links = classify_all(links, context)

    weights = WeightConfig()
    if rng.random() < 0.3:
        weights = load_weights({"DIRECT_COAUTHOR": round(rng.random(), 3)})
    try:
        summary = compute_scores(classified_links, weights)
        incomplete, error = False, None
    except NoClassifiableCitations as exc:
        summary, incomplete, error = None, True, str(exc)

    series = None
    if summary is not None and rng.random() < 0.5:
        series = compute_trajectory(classified_links, weights)

    config = RunConfig(max_phase=3, depth=2, since=rng.choice([None, 2010]),
                       weights=weights, decay_rate=0.1, reference_year=2024,
                       orcid_check=True, confirm=False,
                       trajectory=series is not None)
    validation = ValidationOutcome(
        mode=rng.choice([ValidationMode.HARD_FILTER, ValidationMode.ANOMALY_FLAG,
                         ValidationMode.SKIPPED]),
        coverage=round(rng.random(), 3),
        validated_works=own,
        excluded=[(work("W_EXC", 2001, author(TARGET)), "not found in ORCID record")]
        if rng.random() < 0.3 else [],
    )
    unknown = sum(1 for c in classified_links if c.label.value == "UNKNOWN")
    return AuditReport(
        schema_version=SCHEMA_VERSION,
        generated_at=utc_now(),
        disclaimer=DISCLAIMER,
        researcher_kind="ORCID",
        researcher_id="0000-0002-1825-0097",
        researcher_name="Fuzz Target",
        config=config,
        validation=validation,
        works=own,
        citations=classified_links,
        graph=graph,
        display_retained=sorted(prune_for_display(graph).names),
        timeline=timeline,
        hierarchy=h,
        data_quality={"total_citations": len(classified_links),
                      "unknown": unknown,
                      "classifiable": len(classified_links) - unknown,
                      "warnings": []},
        scores=summary,
        trajectory=series,
        incomplete=incomplete,
        error=error,
    )
