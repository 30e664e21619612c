"""Self-contained, replayable audit reports.

The JSON layout written here is the contract between the engine, the CLI
exports and the web UI: top-level keys {schema_version, generated_at,
disclaimer, researcher, config, validation, works, citations,
coauthor_graph, affiliation, data_quality, scores, trajectory?}. A report
embeds everything needed to recompute its scores offline, so replay needs
no network access.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import jsonschema

from .affiliation import AffiliationTimeline, TimelineEntry
from .classify import CitationClass, ClassifiedCitation, Confidence
from .errors import IoFailure, ReplayMismatch, SchemaMismatch, VersionUnsupported
from .graph import CoauthorEdge, CoauthorGraph
from .identity import ValidationMode, ValidationOutcome
from .scoring import (GapBand, Reliability, ScoreSummary, TrajectoryPoint,
                      WeightConfig, compute_scores)
from .sources import (AuthorRef, CitationLink, InstitutionHierarchy,
                      InstitutionNode, InstitutionRef, Work)

SCHEMA_VERSION = "1.0"

DISCLAIMER = (
    "BARON and HEROCON measure citation network structure, not research "
    "quality, impact, or integrity. They describe where in the social graph "
    "citations originate and should not be used for hiring, promotion, or "
    "funding decisions."
)


@dataclass
class RunConfig:
    max_phase: int = 3
    depth: int = 2
    since: int | None = None
    weights: WeightConfig = field(default_factory=WeightConfig)
    decay_rate: float = 0.1
    reference_year: int = 0
    orcid_check: bool = True
    confirm: bool = False
    trajectory: bool = False


@dataclass
class AuditReport:
    schema_version: str
    generated_at: str
    disclaimer: str
    researcher_kind: str
    researcher_id: str
    researcher_name: str
    config: RunConfig
    validation: ValidationOutcome
    works: list[Work]
    citations: list[ClassifiedCitation]
    graph: CoauthorGraph
    display_retained: list[str]
    timeline: AffiliationTimeline
    hierarchy: InstitutionHierarchy
    data_quality: dict
    scores: ScoreSummary | None
    trajectory: list[TrajectoryPoint] | None = None
    incomplete: bool = False
    error: str | None = None


def utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _institution_ref_dict(ref: InstitutionRef) -> dict:
    return {"institution_id": ref.institution_id,
            "display_name": ref.display_name,
            "department": ref.department}


def _author_dict(author: AuthorRef) -> dict:
    return {"author_id": author.author_id,
            "display_name": author.display_name,
            "institutions": [_institution_ref_dict(r) for r in author.institutions]}


def _work_dict(work: Work) -> dict:
    return {"work_id": work.work_id,
            "title": work.title,
            "doi": work.doi,
            "publication_year": work.publication_year,
            "authors": [_author_dict(a) for a in work.authors]}


def _scores_dict(scores: ScoreSummary | None) -> dict | None:
    if scores is None:
        return None
    return {"baron": scores.baron,
            "herocon": scores.herocon,
            "gap": scores.gap,
            "total_citations": scores.total_citations,
            "classifiable": scores.classifiable,
            "unknown": scores.unknown,
            "reliability": scores.reliability.value,
            "gap_band": scores.gap_band.value}


def to_json_dict(report: AuditReport) -> dict:
    flagged = [{"work": _work_dict(w), "reason": reason}
               for w, reason in report.validation.flagged]
    excluded = [{"work": _work_dict(w), "reason": reason}
                for w, reason in report.validation.excluded]
    document = {
        "schema_version": report.schema_version,
        "generated_at": report.generated_at,
        "disclaimer": report.disclaimer,
        "researcher": {
            "kind": report.researcher_kind,
            "id": report.researcher_id,
            "display_name": report.researcher_name,
        },
        "config": {
            "max_phase": report.config.max_phase,
            "depth": report.config.depth,
            "since": report.config.since,
            "weights": report.config.weights.as_json_dict(),
            "decay_rate": report.config.decay_rate,
            "reference_year": report.config.reference_year,
            "orcid_check": report.config.orcid_check,
            "confirm": report.config.confirm,
            "trajectory": report.config.trajectory,
        },
        "validation": {
            "mode": report.validation.mode.value,
            "coverage": report.validation.coverage,
            "flags_reviewed": report.validation.flags_reviewed,
            "user_exclusions": list(report.validation.user_exclusions),
            "flagged": flagged,
            "excluded": excluded,
        },
        "works": [_work_dict(w) for w in report.works],
        "citations": [
            {
                "citing_work": _work_dict(c.link.citing_work),
                "cited_work_id": c.link.cited_work_id,
                "label": c.label.value,
                "phase": c.phase,
                "confidence": c.confidence.value,
                "rationale": c.rationale,
            }
            for c in report.citations
        ],
        "coauthor_graph": {
            "root": report.graph.root,
            "nodes": [
                {"id": a, "name": report.graph.names[a],
                 "distance": report.graph.distance(a)}
                for a in report.graph.node_ids
            ],
            "edges": [
                {"a": e.a, "b": e.b, "shared_papers": e.shared_papers,
                 "last_collaboration_year": e.last_collaboration_year,
                 "strength": e.strength}
                for _, e in sorted(report.graph.edges.items())
            ],
            "display_retained": sorted(report.display_retained),
        },
        "affiliation": {
            "timeline": [
                {"institution_id": e.institution.institution_id,
                 "display_name": e.institution.display_name,
                 "department": e.department,
                 "years": sorted(e.years)}
                for e in report.timeline.entries
            ],
            "hierarchy": [
                {"institution_id": n.institution_id,
                 "display_name": n.display_name,
                 "parent_ids": list(n.parent_ids)}
                for _, n in sorted(report.hierarchy.nodes.items())
            ],
        },
        "data_quality": report.data_quality,
        "scores": _scores_dict(report.scores),
    }
    if report.trajectory is not None:
        document["trajectory"] = [
            {"year": p.year, "baron": p.baron, "herocon": p.herocon,
             "citations": p.citations}
            for p in report.trajectory
        ]
    if report.incomplete:
        document["incomplete"] = True
        document["error"] = report.error
    return document


def dumps(report: AuditReport) -> str:
    return json.dumps(to_json_dict(report), indent=2, sort_keys=True,
                      ensure_ascii=False) + "\n"


def write_audit(report: AuditReport, directory: str | Path = "./audits") -> Path:
    """Write the report atomically; returns the created file path.

    File name is ``<identifier>_<UTC timestamp>.json``; microseconds keep
    rapid successive writes from colliding.
    """
    directory = Path(directory)
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")
    target = directory / f"{report.researcher_id}_{stamp}.json"
    try:
        directory.mkdir(parents=True, exist_ok=True)
        tmp = target.with_suffix(".json.tmp")
        tmp.write_text(dumps(report), encoding="utf-8")
        tmp.replace(target)
    except OSError as exc:
        raise IoFailure(f"cannot write audit to {directory}: {exc}") from exc
    return target


# ---------------------------------------------------------------------------
# Schema
# ---------------------------------------------------------------------------

_LABELS = [label.value for label in CitationClass]

_WORK_SCHEMA = {
    "type": "object",
    "required": ["work_id", "title", "doi", "publication_year", "authors"],
    "properties": {
        "work_id": {"type": "string"},
        "title": {"type": "string"},
        "doi": {"type": ["string", "null"]},
        "publication_year": {"type": ["integer", "null"]},
        "authors": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["author_id", "display_name", "institutions"],
                "properties": {
                    "author_id": {"type": "string"},
                    "display_name": {"type": "string"},
                    "institutions": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["institution_id"],
                            "properties": {
                                "institution_id": {"type": "string"},
                                "display_name": {"type": "string"},
                                "department": {"type": ["string", "null"]},
                            },
                        },
                    },
                },
            },
        },
    },
}

_FLAG_SCHEMA = {
    "type": "object",
    "required": ["work", "reason"],
    "properties": {"work": _WORK_SCHEMA, "reason": {"type": "string"}},
}

AUDIT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "generated_at", "disclaimer", "researcher",
                 "config", "validation", "works", "citations", "coauthor_graph",
                 "affiliation", "data_quality", "scores"],
    "properties": {
        "schema_version": {"type": "string", "pattern": r"^\d+\.\d+$"},
        "generated_at": {"type": "string"},
        "disclaimer": {"type": "string"},
        "researcher": {
            "type": "object",
            "required": ["kind", "id", "display_name"],
            "properties": {
                "kind": {"enum": ["ORCID", "OPENALEX"]},
                "id": {"type": "string"},
                "display_name": {"type": "string"},
            },
        },
        "config": {
            "type": "object",
            "required": ["max_phase", "depth", "since", "weights", "decay_rate",
                         "reference_year", "orcid_check", "confirm", "trajectory"],
            "properties": {
                "max_phase": {"enum": [1, 2, 3]},
                "depth": {"enum": [1, 2, 3]},
                "since": {"type": ["integer", "null"]},
                "weights": {
                    "type": "object",
                    "additionalProperties": {"type": "number", "minimum": 0, "maximum": 1},
                },
                "decay_rate": {"type": "number"},
                "reference_year": {"type": "integer"},
                "orcid_check": {"type": "boolean"},
                "confirm": {"type": "boolean"},
                "trajectory": {"type": "boolean"},
            },
        },
        "validation": {
            "type": "object",
            "required": ["mode", "coverage", "flags_reviewed", "user_exclusions",
                         "flagged", "excluded"],
            "properties": {
                "mode": {"enum": [m.value for m in ValidationMode]},
                "coverage": {"type": "number"},
                "flags_reviewed": {"type": "boolean"},
                "user_exclusions": {"type": "array", "items": {"type": "string"}},
                "flagged": {"type": "array", "items": _FLAG_SCHEMA},
                "excluded": {"type": "array", "items": _FLAG_SCHEMA},
            },
        },
        "works": {"type": "array", "items": _WORK_SCHEMA},
        "citations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["citing_work", "cited_work_id", "label", "phase",
                             "confidence", "rationale"],
                "properties": {
                    "citing_work": _WORK_SCHEMA,
                    "cited_work_id": {"type": "string"},
                    "label": {"enum": _LABELS},
                    "phase": {"enum": [1, 2, 3]},
                    "confidence": {"enum": [c.value for c in Confidence]},
                    "rationale": {"type": "string", "minLength": 1},
                },
            },
        },
        "coauthor_graph": {
            "type": "object",
            "required": ["root", "nodes", "edges", "display_retained"],
            "properties": {
                "root": {"type": "string"},
                "nodes": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["id", "name", "distance"],
                        "properties": {
                            "id": {"type": "string"},
                            "name": {"type": "string"},
                            "distance": {"type": "integer"},
                        },
                    },
                },
                "edges": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["a", "b", "shared_papers",
                                     "last_collaboration_year", "strength"],
                        "properties": {
                            "a": {"type": "string"},
                            "b": {"type": "string"},
                            "shared_papers": {"type": "integer", "minimum": 1},
                            "last_collaboration_year": {"type": ["integer", "null"]},
                            "strength": {"type": "number"},
                        },
                    },
                },
                "display_retained": {"type": "array", "items": {"type": "string"}},
            },
        },
        "affiliation": {
            "type": "object",
            "required": ["timeline", "hierarchy"],
            "properties": {
                "timeline": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["institution_id", "department", "years"],
                        "properties": {
                            "institution_id": {"type": "string"},
                            "display_name": {"type": "string"},
                            "department": {"type": ["string", "null"]},
                            "years": {"type": "array", "items": {"type": "integer"}},
                        },
                    },
                },
                "hierarchy": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["institution_id", "display_name", "parent_ids"],
                        "properties": {
                            "institution_id": {"type": "string"},
                            "display_name": {"type": "string"},
                            "parent_ids": {"type": "array", "items": {"type": "string"}},
                        },
                    },
                },
            },
        },
        "data_quality": {"type": "object"},
        "scores": {
            "type": ["object", "null"],
            "required": ["baron", "herocon", "gap", "total_citations",
                         "classifiable", "unknown", "reliability", "gap_band"],
            "properties": {
                "baron": {"type": "number"},
                "herocon": {"type": "number"},
                "gap": {"type": "number"},
                "total_citations": {"type": "integer", "minimum": 0},
                "classifiable": {"type": "integer", "minimum": 0},
                "unknown": {"type": "integer", "minimum": 0},
                "reliability": {"enum": [r.value for r in Reliability]},
                "gap_band": {"enum": [b.value for b in GapBand]},
            },
        },
        "trajectory": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["year", "baron", "herocon", "citations"],
                "properties": {
                    "year": {"type": "integer"},
                    "baron": {"type": "number"},
                    "herocon": {"type": "number"},
                    "citations": {"type": "integer", "minimum": 0},
                },
            },
        },
        "incomplete": {"type": "boolean"},
        "error": {"type": ["string", "null"]},
    },
}


def validate_document(document: dict) -> None:
    """Schema-check a parsed audit; raises SchemaMismatch at the first bad path."""
    validator = jsonschema.Draft202012Validator(AUDIT_SCHEMA)
    errors = sorted(validator.iter_errors(document),
                    key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        first = errors[0]
        path = "$" + "".join(
            f"[{p}]" if isinstance(p, int) else f".{p}" for p in first.absolute_path)
        raise SchemaMismatch(path, first.message)


# ---------------------------------------------------------------------------
# Deserialization
# ---------------------------------------------------------------------------

def _work_from(js: dict) -> Work:
    authors = tuple(
        AuthorRef(
            author_id=a["author_id"],
            display_name=a.get("display_name", ""),
            institutions=tuple(
                InstitutionRef(r["institution_id"], r.get("display_name", ""),
                               r.get("department"))
                for r in a.get("institutions", [])
            ),
        )
        for a in js["authors"]
    )
    return Work(js["work_id"], js["title"], js["doi"], js["publication_year"], authors)


def _scores_from(js: dict | None) -> ScoreSummary | None:
    if js is None:
        return None
    return ScoreSummary(
        baron=js["baron"], herocon=js["herocon"], gap=js["gap"],
        total_citations=js["total_citations"], classifiable=js["classifiable"],
        unknown=js["unknown"], reliability=Reliability(js["reliability"]),
        gap_band=GapBand(js["gap_band"]),
    )


def from_json_dict(document: dict) -> AuditReport:
    validate_document(document)

    version = document["schema_version"]
    if version.split(".")[0] != SCHEMA_VERSION.split(".")[0]:
        raise VersionUnsupported(
            f"audit schema {version} is not supported by this build "
            f"(accepts major version {SCHEMA_VERSION.split('.')[0]})")

    config_js = document["config"]
    weights = WeightConfig({CitationClass(k): float(v)
                            for k, v in config_js["weights"].items()})
    config = RunConfig(
        max_phase=config_js["max_phase"],
        depth=config_js["depth"],
        since=config_js["since"],
        weights=weights,
        decay_rate=config_js["decay_rate"],
        reference_year=config_js["reference_year"],
        orcid_check=config_js["orcid_check"],
        confirm=config_js["confirm"],
        trajectory=config_js["trajectory"],
    )

    works = [_work_from(js) for js in document["works"]]

    validation_js = document["validation"]
    validation = ValidationOutcome(
        mode=ValidationMode(validation_js["mode"]),
        coverage=validation_js["coverage"],
        validated_works=works,
        flagged=[(_work_from(f["work"]), f["reason"])
                 for f in validation_js["flagged"]],
        excluded=[(_work_from(f["work"]), f["reason"])
                  for f in validation_js["excluded"]],
        flags_reviewed=validation_js["flags_reviewed"],
        user_exclusions=list(validation_js["user_exclusions"]),
    )

    citations = [
        ClassifiedCitation(
            link=CitationLink(_work_from(c["citing_work"]), c["cited_work_id"]),
            label=CitationClass(c["label"]),
            phase=c["phase"],
            confidence=Confidence(c["confidence"]),
            rationale=c["rationale"],
        )
        for c in document["citations"]
    ]

    graph_js = document["coauthor_graph"]
    graph = CoauthorGraph(root=graph_js["root"])
    for node in graph_js["nodes"]:
        graph.names[node["id"]] = node["name"]
        graph._distances[node["id"]] = node["distance"]
        graph._adjacency.setdefault(node["id"], set())
    for edge_js in graph_js["edges"]:
        edge = CoauthorEdge(edge_js["a"], edge_js["b"], edge_js["shared_papers"],
                            edge_js["last_collaboration_year"], edge_js["strength"])
        graph.edges[(edge.a, edge.b)] = edge
        graph._adjacency.setdefault(edge.a, set()).add(edge.b)
        graph._adjacency.setdefault(edge.b, set()).add(edge.a)

    hierarchy = InstitutionHierarchy()
    for node_js in document["affiliation"]["hierarchy"]:
        node = InstitutionNode(node_js["institution_id"], node_js["display_name"],
                               tuple(node_js["parent_ids"]))
        hierarchy.nodes[node.institution_id] = node

    entries = []
    for entry_js in document["affiliation"]["timeline"]:
        iid = entry_js["institution_id"]
        if iid not in hierarchy.nodes:
            raise SchemaMismatch(f"$.affiliation.timeline[{iid}]",
                                 "timeline institution missing from hierarchy")
        entries.append(TimelineEntry(hierarchy.nodes[iid], entry_js["department"],
                                     frozenset(entry_js["years"])))
    timeline = AffiliationTimeline(entries)

    trajectory = None
    if "trajectory" in document:
        trajectory = [TrajectoryPoint(p["year"], p["baron"], p["herocon"],
                                      p["citations"])
                      for p in document["trajectory"]]

    return AuditReport(
        schema_version=version,
        generated_at=document["generated_at"],
        disclaimer=document["disclaimer"],
        researcher_kind=document["researcher"]["kind"],
        researcher_id=document["researcher"]["id"],
        researcher_name=document["researcher"]["display_name"],
        config=config,
        validation=validation,
        works=works,
        citations=citations,
        graph=graph,
        display_retained=list(graph_js["display_retained"]),
        timeline=timeline,
        hierarchy=hierarchy,
        data_quality=document["data_quality"],
        scores=_scores_from(document["scores"]),
        trajectory=trajectory,
        incomplete=document.get("incomplete", False),
        error=document.get("error"),
    )


def load_audit(source: str | Path | dict) -> AuditReport:
    """Parse and schema-validate an audit from a path, JSON text or dict."""
    if isinstance(source, dict):
        return from_json_dict(source)
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                    and source.endswith(".json")):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot read audit {source}: {exc}") from exc
    else:
        text = source
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaMismatch("$", f"not valid JSON: {exc}") from exc
    return from_json_dict(document)


def replay(report: AuditReport) -> ScoreSummary:
    """Recompute scores from the embedded citations and weights.

    Returns the recomputed summary when it matches the stored one to 1e-9;
    raises ReplayMismatch otherwise.
    """
    recomputed = compute_scores(report.citations, report.config.weights)
    stored = report.scores
    if stored is None:
        raise ReplayMismatch(recomputed, recomputed)
    same = (
        abs(stored.baron - recomputed.baron) <= 1e-9
        and abs(stored.herocon - recomputed.herocon) <= 1e-9
        and abs(stored.gap - recomputed.gap) <= 1e-9
        and stored.total_citations == recomputed.total_citations
        and stored.classifiable == recomputed.classifiable
        and stored.unknown == recomputed.unknown
        and stored.reliability is recomputed.reliability
    )
    if not same:
        raise ReplayMismatch(stored, recomputed)
    return recomputed
