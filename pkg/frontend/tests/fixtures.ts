/** Builders for schema-shaped audit documents used across the UI tests. */

import type {
  AuditDocument,
  CitationDoc,
  CoauthorGraphDoc,
  ScoresDoc,
  TrajectoryPointDoc,
  WorkDoc,
} from '../src/types.js';

export const DISCLAIMER =
  'BARON and HEROCON measure citation network structure, not research '
  + 'quality, impact, or integrity. They describe where in the social graph '
  + 'citations originate and should not be used for hiring, promotion, or '
  + 'funding decisions.';

export function workDoc(id: string, year: number | null = 2020,
                        authorIds: string[] = ['B1']): WorkDoc {
  return {
    work_id: id,
    title: `title of ${id}`,
    doi: null,
    publication_year: year,
    authors: authorIds.map((a) => ({
      author_id: a,
      display_name: `Author ${a}`,
      institutions: [],
    })),
  };
}

export function citationDoc(citingId: string, label: string,
                            year: number | null = 2020): CitationDoc {
  return {
    citing_work: workDoc(citingId, year),
    cited_work_id: 'W1',
    label,
    phase: label === 'SELF' ? 1
      : label === 'DIRECT_COAUTHOR' || label === 'TRANSITIVE_COAUTHOR' ? 2 : 3,
    confidence: 'MODERATE',
    rationale: `${label}: synthetic ui fixture (phase 3)`,
  };
}

export function starGraph(directCount: number, transitiveCount: number): CoauthorGraphDoc {
  const nodes = [{ id: 'A1', name: 'Root', distance: 0 }];
  const edges = [];
  for (let i = 0; i < directCount; i++) {
    const id = `D${String(i).padStart(3, '0')}`;
    nodes.push({ id, name: `Direct ${i}`, distance: 1 });
    edges.push({ a: 'A1', b: id, shared_papers: 1 + (i % 4),
                 last_collaboration_year: 2020, strength: 1 + (i % 4) });
  }
  for (let i = 0; i < transitiveCount; i++) {
    const id = `T${String(i).padStart(3, '0')}`;
    const anchor = `D${String(i % Math.max(directCount, 1)).padStart(3, '0')}`;
    nodes.push({ id, name: `Transitive ${i}`, distance: 2 });
    edges.push({ a: anchor, b: id, shared_papers: 1,
                 last_collaboration_year: 2018, strength: 0.8 - (i % 7) / 10 });
  }
  return { root: 'A1', nodes, edges, display_retained: nodes.map((n) => n.id) };
}

export interface AuditOverrides {
  scores?: ScoresDoc | null;
  citations?: CitationDoc[];
  graph?: CoauthorGraphDoc;
  trajectory?: TrajectoryPointDoc[] | undefined;
  researcherId?: string;
  researcherName?: string;
}

export function makeAudit(overrides: AuditOverrides = {}): AuditDocument {
  const citations = overrides.citations ?? [
    citationDoc('C1', 'EXTERNAL'),
    citationDoc('C2', 'EXTERNAL'),
    citationDoc('C3', 'SELF'),
    citationDoc('C4', 'DIRECT_COAUTHOR'),
  ];
  const scores = overrides.scores !== undefined ? overrides.scores : {
    baron: 50.0,
    herocon: 55.0,
    gap: 5.0,
    total_citations: citations.length,
    classifiable: citations.filter((c) => c.label !== 'UNKNOWN').length,
    unknown: citations.filter((c) => c.label === 'UNKNOWN').length,
    reliability: 'HIGH',
    gap_band: 'MODERATE',
  };
  const document: AuditDocument = {
    schema_version: '1.0',
    generated_at: '2026-01-01T00:00:00Z',
    disclaimer: DISCLAIMER,
    researcher: {
      kind: 'ORCID',
      id: overrides.researcherId ?? '0000-0002-1825-0097',
      display_name: overrides.researcherName ?? 'Fixture Researcher',
    },
    config: {
      max_phase: 3, depth: 2, since: null,
      weights: { SELF: 0, DIRECT_COAUTHOR: 0.2, TRANSITIVE_COAUTHOR: 0.5,
                 SAME_DEPT: 0.1, SAME_INSTITUTION: 0.4, SAME_PARENT_ORG: 0.7,
                 VENUE_SELF_GOVERNANCE: 0.05, VENUE_EDITOR_COAUTHOR: 0.15,
                 VENUE_EDITOR_AFFIL: 0.3, VENUE_COMMITTEE: 0.4, EXTERNAL: 1.0 },
      decay_rate: 0.1, reference_year: 2024, orcid_check: true,
      confirm: false, trajectory: overrides.trajectory !== undefined,
    },
    validation: {
      mode: 'HARD_FILTER', coverage: 0.8, flags_reviewed: false,
      user_exclusions: [], flagged: [], excluded: [],
    },
    works: [workDoc('W1', 2018, ['A1'])],
    citations,
    coauthor_graph: overrides.graph ?? starGraph(3, 4),
    affiliation: { timeline: [], hierarchy: [] },
    data_quality: { total_citations: citations.length, warnings: [] },
    scores,
  };
  if (overrides.trajectory !== undefined) {
    document.trajectory = overrides.trajectory;
  }
  return document;
}
