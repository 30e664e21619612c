"""Citation network decomposition engine.

Classifies every incoming citation to a researcher by network proximity
(self, co-author, transitive co-author, institutional tiers, external,
unknown), computes the BARON and HEROCON scores, and records a complete,
replayable audit trail.
"""

from .affiliation import AffiliationTimeline, Tier, TierMatch, build_timeline, match_tier
from .audit import (AuditReport, DISCLAIMER, RunConfig, load_audit, replay,
                    write_audit)
from .classify import (CitationClass, ClassificationContext, ClassifiedCitation,
                       Confidence, classify_all)
from .graph import (BEYOND, CoauthorGraph, GraphConfig, bfs_distance, build_graph,
                    edge_strength, prune_for_display)
from .identity import (MatchKind, ValidationMode, ValidationOutcome,
                       apply_exclusions, career_span_warning, match_works, validate)
from .ids import IdKind, ResearcherIdentifier, extract_id, validate_orcid_checksum
from .pipeline import (AnalysisOptions, AnalysisResult, AnalysisSession,
                       SessionState, run_analysis)
from .scoring import (DEFAULT_WEIGHTS, GapBand, Reliability, ScoreSummary,
                      TrajectoryPoint, WeightConfig, compute_scores, load_weights,
                      trajectory)
from .sources import (CitationLink, InstitutionHierarchy, InstitutionNode,
                      OrcidEntry, ScholarlyClient, SourceConfig, SourceMode, Work)

__version__ = "0.1.0"
