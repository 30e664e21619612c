"""End-to-end analysis orchestration.

One analysis is one AnalysisSession: validate the identifier, fetch works,
cross-validate against ORCID, optionally pause for human exclusion
decisions, build the co-author graph and affiliation timeline, classify
every citation, score, and write the audit. The pause is an explicit
suspended state with a resume operation so the CLI and the HTTP service
drive the same machine.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from . import audit as audit_mod
from .affiliation import AffiliationTimeline, build_timeline
from .audit import AuditReport, RunConfig, utc_now
from .classify import (CitationClass, ClassificationContext, ClassifiedCitation,
                       classify_all)
from .errors import AuthorNotFound, CitekinError, NoClassifiableCitations
from .graph import CoauthorGraph, GraphConfig, build_graph, prune_for_display
from .identity import (ValidationMode, ValidationOutcome, apply_exclusions,
                       career_span_warning, validate)
from .ids import IdKind, ResearcherIdentifier, extract_id
from .scoring import (ScoreSummary, WeightConfig, compute_scores,
                      trajectory as compute_trajectory)
from .sources import (CitationLink, InstitutionHierarchy, ScholarlyClient,
                      SourceConfig, Work)

log = logging.getLogger(__name__)


class SessionState(Enum):
    PENDING = "PENDING"
    RUNNING = "RUNNING"
    AWAITING_DECISIONS = "AWAITING_DECISIONS"
    COMPLETE = "COMPLETE"
    FAILED = "FAILED"


@dataclass(frozen=True)
class ProgressEvent:
    stage: str
    detail: str
    fraction: float


@dataclass
class AnalysisOptions:
    since: int | None = None
    depth: int = 2
    max_phase: int = 3
    weights: WeightConfig | None = None
    orcid_check: bool = True
    confirm: bool = False
    trajectory: bool = False
    audit: bool = True
    audit_dir: Path | str = "./audits"
    reference_year: int | None = None  # pinned by tests; defaults to the run year
    decay_rate: float = 0.1


@dataclass
class AnalysisResult:
    summary: ScoreSummary | None
    report: AuditReport
    audit_path: Path | None


class AnalysisSession:
    """Drives one analysis; suspend/resume-safe between threads."""

    def __init__(self, raw_identifier: str, options: AnalysisOptions,
                 source_config: SourceConfig | None = None,
                 client: ScholarlyClient | None = None):
        self.options = options
        self.client = client or ScholarlyClient(source_config or SourceConfig())
        self.state = SessionState.PENDING
        self.events: list[ProgressEvent] = []
        self.error: CitekinError | None = None
        self.result: AnalysisResult | None = None
        self._raw_identifier = raw_identifier
        self._warnings: list[str] = []

        self.identifier: ResearcherIdentifier | None = None
        self._author_id: str | None = None
        self._author_name: str = ""
        self._outcome: ValidationOutcome | None = None
        self._works: list[Work] = []

    # -- progress ------------------------------------------------------------

    def _emit(self, stage: str, detail: str, fraction: float) -> None:
        if self.events and fraction < self.events[-1].fraction:
            fraction = self.events[-1].fraction
        event = ProgressEvent(stage, detail, fraction)
        self.events.append(event)
        log.info("[%4.0f%%] %s: %s", fraction * 100, stage, detail)

    @property
    def flagged(self) -> list[tuple[Work, str]]:
        return list(self._outcome.flagged) if self._outcome else []

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> SessionState:
        """Run up to the confirm pause (or completion when nothing is flagged)."""
        self.state = SessionState.RUNNING
        try:
            self._emit("VALIDATING_ID", self._raw_identifier.strip(), 0.02)
            self.identifier = extract_id(self._raw_identifier)

            self._emit("FETCHING_WORKS", f"works for {self.identifier.value}", 0.1)
            self._author_id, self._author_name = \
                self.client.fetch_author_profile(self.identifier)
            works = self.client.fetch_author_works(self.identifier, self.options.since)
            self._emit("FETCHING_WORKS", f"{len(works)} works retrieved", 0.2)

            self._outcome = self._validate_identity(works)
            span_note = career_span_warning(self._outcome.validated_works)
            if span_note:
                self._warnings.append(span_note)
                log.warning("%s", span_note)

            if self.options.confirm and self._outcome.flagged:
                self.state = SessionState.AWAITING_DECISIONS
                self._emit("AWAITING_DECISIONS",
                           f"{len(self._outcome.flagged)} flagged works need review",
                           0.3)
                return self.state

            return self._finish()
        except CitekinError as exc:
            self._fail(exc)
            raise

    def resume(self, decisions: set[str]) -> SessionState:
        """Apply confirmed exclusions and run the analysis to completion."""
        if self.state is not SessionState.AWAITING_DECISIONS:
            raise RuntimeError(f"resume called in state {self.state.value}")
        self.state = SessionState.RUNNING
        try:
            self._outcome = apply_exclusions(self._outcome, set(decisions))
            detail = (f"excluded {len(decisions)} flagged works"
                      if decisions else "kept all flagged works")
            self._emit("DECISIONS_APPLIED", detail, 0.32)
            return self._finish()
        except CitekinError as exc:
            self._fail(exc)
            raise

    # -- stages ---------------------------------------------------------------

    def _validate_identity(self, works: list[Work]) -> ValidationOutcome:
        if not self.options.orcid_check:
            self._emit("VALIDATING_IDENTITY", "ORCID check disabled", 0.28)
            return validate(works, [], skip=True)
        if self.identifier.kind is not IdKind.ORCID:
            self._warnings.append(
                "ORCID cross-validation skipped: analysis was started from an "
                "OpenAlex id, so there is no ORCID record to check against")
            self._emit("VALIDATING_IDENTITY", "no ORCID available; check skipped", 0.28)
            return validate(works, [], skip=True)
        self._emit("FETCHING_ORCID", f"ORCID record for {self.identifier.value}", 0.24)
        entries = self.client.fetch_orcid_record(self.identifier.value)
        outcome = validate(works, entries)
        self._emit(
            "VALIDATING_IDENTITY",
            f"coverage {outcome.coverage:.0%}, mode {outcome.mode.value}, "
            f"{len(outcome.excluded)} excluded, {len(outcome.flagged)} flagged",
            0.28)
        return outcome

    def _finish(self) -> SessionState:
        opts = self.options
        outcome = self._outcome
        works = outcome.validated_works
        if not works:
            raise AuthorNotFound("no validated works remain after exclusions")
        self._works = works

        self._emit("FETCHING_CITATIONS", f"citations for {len(works)} works", 0.4)
        links = self.client.fetch_incoming_citations(works)
        self._emit("FETCHING_CITATIONS", f"{len(links)} citation links", 0.5)

        reference_year = opts.reference_year or datetime.now(timezone.utc).year
        graph_cfg = GraphConfig(depth=opts.depth, decay_rate=opts.decay_rate,
                                reference_year=reference_year)
        self._emit("BUILDING_GRAPH", f"depth {opts.depth} expansion", 0.55)
        graph = self._build_graph(works, graph_cfg)
        self._emit("BUILDING_GRAPH",
                   f"{len(graph.names)} authors, {len(graph.edges)} edges", 0.65)

        hierarchy = InstitutionHierarchy()
        timeline = AffiliationTimeline()
        unresolved: list[str] = []
        if opts.max_phase >= 3:
            self._emit("BUILDING_TIMELINE", "resolving institutions", 0.7)
            institution_ids = _collect_institution_ids(works, links)
            hierarchy, unresolved = self.client.build_hierarchy(institution_ids)
            timeline = build_timeline(works, self._author_id, hierarchy)
            self._emit("BUILDING_TIMELINE",
                       f"{len(timeline.entries)} timeline entries, "
                       f"{len(hierarchy.nodes)} institutions", 0.75)

        context = ClassificationContext(
            target=self._author_id, graph=graph, timeline=timeline,
            hierarchy=hierarchy, max_phase=opts.max_phase, depth=opts.depth)
        self._emit("CLASSIFYING", f"{len(links)} citations, phase {opts.max_phase}", 0.8)
        classified = classify_all(links, context)

        weights = opts.weights or WeightConfig()
        external_weight = weights.weight(CitationClass.EXTERNAL)
        if external_weight != 1.0:
            self._warnings.append(
                f"EXTERNAL weight overridden to {external_weight}; the "
                "HEROCON >= BARON relationship no longer holds by construction")
        config = RunConfig(
            max_phase=opts.max_phase, depth=opts.depth, since=opts.since,
            weights=weights, decay_rate=opts.decay_rate,
            reference_year=reference_year, orcid_check=opts.orcid_check,
            confirm=opts.confirm, trajectory=opts.trajectory)

        self._emit("SCORING", "computing BARON and HEROCON", 0.9)
        summary: ScoreSummary | None = None
        series = None
        scoring_error: NoClassifiableCitations | None = None
        try:
            summary = compute_scores(classified, weights)
            if opts.trajectory:
                series = compute_trajectory(classified, weights)
        except NoClassifiableCitations as exc:
            scoring_error = exc

        report = self._assemble_report(config, classified, graph, timeline,
                                       hierarchy, unresolved, summary, series,
                                       links, scoring_error)

        audit_path = None
        if opts.audit:
            self._emit("WRITING_AUDIT", str(opts.audit_dir), 0.96)
            audit_path = audit_mod.write_audit(report, opts.audit_dir)

        self.result = AnalysisResult(summary, report, audit_path)
        if scoring_error is not None:
            # counts are in the audit; the scores themselves are undefined
            self._fail(scoring_error)
            raise scoring_error
        self.state = SessionState.COMPLETE
        self._emit("COMPLETE",
                   f"BARON {summary.baron:.1f}, HEROCON {summary.herocon:.1f}", 1.0)
        return self.state

    def _build_graph(self, works: list[Work], cfg: GraphConfig) -> CoauthorGraph:
        expansion: list[Work] = []
        if cfg.depth >= 2:
            ring1 = sorted({a for w in works for a in w.author_ids()}
                           - {self._author_id})
            if ring1:
                expansion = self.client.fetch_works_by_authors(ring1)
            if cfg.depth >= 3 and expansion:
                known = set(ring1) | {self._author_id}
                ring2 = sorted({a for w in expansion for a in w.author_ids()} - known)
                if ring2:
                    expansion = expansion + self.client.fetch_works_by_authors(ring2)
        return build_graph(works, self._author_id, cfg, expansion)

    def _assemble_report(self, config: RunConfig,
                         classified: list[ClassifiedCitation],
                         graph: CoauthorGraph, timeline: AffiliationTimeline,
                         hierarchy: InstitutionHierarchy, unresolved: list[str],
                         summary: ScoreSummary | None, series,
                         links: list[CitationLink],
                         scoring_error: Exception | None) -> AuditReport:
        total = len(classified)
        unknown = sum(1 for c in classified if c.label is CitationClass.UNKNOWN)
        classifiable = total - unknown
        undated = sum(1 for link in links if link.citation_year is None)
        data_quality = {
            "total_citations": total,
            "classifiable": classifiable,
            "unknown": unknown,
            "classifiable_pct": round(100.0 * classifiable / total, 4) if total else 0.0,
            "unknown_year_citations": undated,
            "unresolved_institutions": unresolved,
            "api_calls": self.client.stats.calls,
            "api_calls_by_endpoint": dict(sorted(self.client.stats.by_endpoint.items())),
            "warnings": list(self._warnings),
        }
        display_retained = sorted(prune_for_display(graph).names)
        return AuditReport(
            schema_version=audit_mod.SCHEMA_VERSION,
            generated_at=utc_now(),
            disclaimer=audit_mod.DISCLAIMER,
            researcher_kind=self.identifier.kind.value,
            researcher_id=self.identifier.value,
            researcher_name=self._author_name,
            config=config,
            validation=self._outcome,
            works=self._works,
            citations=classified,
            graph=graph,
            display_retained=display_retained,
            timeline=timeline,
            hierarchy=hierarchy,
            data_quality=data_quality,
            scores=summary,
            trajectory=series,
            incomplete=scoring_error is not None,
            error=str(scoring_error) if scoring_error else None,
        )

    def _fail(self, exc: CitekinError) -> None:
        self.state = SessionState.FAILED
        self.error = exc
        self._emit("FAILED", f"{type(exc).__name__}: {exc}",
                   self.events[-1].fraction if self.events else 0.0)


def _collect_institution_ids(works: list[Work],
                             links: list[CitationLink]) -> set[str]:
    ids: set[str] = set()
    for work in works:
        for author in work.authors:
            ids.update(r.institution_id for r in author.institutions)
    for link in links:
        for author in link.citing_work.authors:
            ids.update(r.institution_id for r in author.institutions)
    return ids


def run_analysis(raw_identifier: str, options: AnalysisOptions | None = None,
                 source_config: SourceConfig | None = None,
                 client: ScholarlyClient | None = None,
                 decide=None) -> AnalysisResult:
    """One-shot analysis; ``decide(flagged) -> set[work_id]`` feeds the pause.

    Without a ``decide`` callback a confirm pause keeps every flagged work
    (equivalent to answering "none").
    """
    start = time.monotonic()
    session = AnalysisSession(raw_identifier, options or AnalysisOptions(),
                              source_config=source_config, client=client)
    state = session.start()
    if state is SessionState.AWAITING_DECISIONS:
        decisions = decide(session.flagged) if decide else set()
        session.resume(decisions)
    log.debug("analysis finished in %.2fs", time.monotonic() - start)
    return session.result
