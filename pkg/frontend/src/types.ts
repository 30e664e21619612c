/**
 * Engine wire types: the audit JSON document and the HTTP boundary shapes.
 *
 * The UI is a pure client. Every score shown on screen is read from these
 * structures verbatim; nothing is recomputed browser-side.
 */

export interface InstitutionRef {
  institution_id: string;
  display_name?: string;
  department?: string | null;
}

export interface AuthorRef {
  author_id: string;
  display_name: string;
  institutions: InstitutionRef[];
}

export interface WorkDoc {
  work_id: string;
  title: string;
  doi: string | null;
  publication_year: number | null;
  authors: AuthorRef[];
}

export interface CitationDoc {
  citing_work: WorkDoc;
  cited_work_id: string;
  label: string;
  phase: number;
  confidence: string;
  rationale: string;
}

export interface GraphNodeDoc {
  id: string;
  name: string;
  distance: number;
}

export interface GraphEdgeDoc {
  a: string;
  b: string;
  shared_papers: number;
  last_collaboration_year: number | null;
  strength: number;
}

export interface CoauthorGraphDoc {
  root: string;
  nodes: GraphNodeDoc[];
  edges: GraphEdgeDoc[];
  display_retained: string[];
}

export interface ScoresDoc {
  baron: number;
  herocon: number;
  gap: number;
  total_citations: number;
  classifiable: number;
  unknown: number;
  reliability: string;
  gap_band: string;
}

export interface TrajectoryPointDoc {
  year: number;
  baron: number;
  herocon: number;
  citations: number;
}

export interface ValidationDoc {
  mode: string;
  coverage: number;
  flags_reviewed: boolean;
  user_exclusions: string[];
  flagged: { work: WorkDoc; reason: string }[];
  excluded: { work: WorkDoc; reason: string }[];
}

export interface AuditDocument {
  schema_version: string;
  generated_at: string;
  disclaimer: string;
  researcher: { kind: string; id: string; display_name: string };
  config: Record<string, unknown>;
  validation: ValidationDoc;
  works: WorkDoc[];
  citations: CitationDoc[];
  coauthor_graph: CoauthorGraphDoc;
  affiliation: {
    timeline: {
      institution_id: string;
      display_name?: string;
      department: string | null;
      years: number[];
    }[];
    hierarchy: { institution_id: string; display_name: string; parent_ids: string[] }[];
  };
  data_quality: Record<string, unknown>;
  scores: ScoresDoc | null;
  trajectory?: TrajectoryPointDoc[];
  incomplete?: boolean;
  error?: string | null;
}

export interface ProgressEventDoc {
  stage: string;
  detail: string;
  fraction: number;
}

export interface ProgressDoc {
  analysis_id: string;
  state: 'PENDING' | 'RUNNING' | 'AWAITING_DECISIONS' | 'COMPLETE' | 'FAILED';
  events: ProgressEventDoc[];
  error: string | null;
}

export interface FlaggedWorkDoc {
  work_id: string;
  title: string;
  publication_year: number | null;
  reason: string;
}

export interface AnalysisRequest {
  identifier: string;
  since?: number | null;
  depth?: number;
  max_phase?: number;
  weights?: Record<string, number> | null;
  orcid_check?: boolean;
  confirm?: boolean;
  trajectory?: boolean;
}

/** Engine HEROCON weights shown in the classification summary table. */
export type WeightTable = Record<string, number>;
