/**
 * Multi-audit comparison: a table of engine-reported scores, overlaid BARON
 * and HEROCON trajectory charts, and expandable full individual reports.
 * Up to 115 files; invalid files are flagged per file while valid ones
 * still render. Schema validation is delegated to the engine boundary.
 */

import { el, pct, svgEl } from './format.js';
import { resultView, trajectorySvg } from './panels.js';
import type { AuditDocument, TrajectoryPointDoc } from './types.js';

export const MAX_COMPARISONS = 115;

const OVERLAY_COLORS = [
  '#b01030', '#2060c0', '#2ca02c', '#ff7f0e', '#9467bd', '#8c564b',
  '#e377c2', '#17becf', '#bcbd22', '#7f7f7f',
];

export interface UploadedAudit {
  name: string;
  document: AuditDocument;
}

export interface RejectedUpload {
  name: string;
  error: string;
}

export interface ComparisonInput {
  accepted: UploadedAudit[];
  rejected: RejectedUpload[];
}

export class TooManyComparisons extends Error {
  constructor(count: number) {
    super(`${count} files uploaded; at most ${MAX_COMPARISONS} simultaneous `
      + 'comparisons are supported');
  }
}

/**
 * Validate uploads through the engine boundary. Throws TooManyComparisons
 * above the cap; individual schema failures land in `rejected`.
 */
export async function collectUploads(
  files: { name: string; text: string }[],
  validate: (document: unknown) => Promise<string | null>,
): Promise<ComparisonInput> {
  if (files.length > MAX_COMPARISONS) {
    throw new TooManyComparisons(files.length);
  }
  const accepted: UploadedAudit[] = [];
  const rejected: RejectedUpload[] = [];
  for (const file of files) {
    let parsed: unknown;
    try {
      parsed = JSON.parse(file.text);
    } catch (error) {
      rejected.push({ name: file.name, error: `not valid JSON: ${error}` });
      continue;
    }
    const problem = await validate(parsed);
    if (problem !== null) {
      rejected.push({ name: file.name, error: problem });
      continue;
    }
    accepted.push({ name: file.name, document: parsed as AuditDocument });
  }
  return { accepted, rejected };
}

function comparisonTable(audits: UploadedAudit[]): HTMLElement {
  const table = el('table', 'comparison-table');
  const head = el('tr');
  for (const column of ['Researcher', 'BARON', 'HEROCON', 'Gap',
                        'Total citations', 'Classifiable', 'Reliability']) {
    head.append(el('th', undefined, column));
  }
  table.append(head);
  for (const audit of audits) {
    const scores = audit.document.scores;
    const row = el('tr', 'comparison-row');
    row.append(el('td', undefined, audit.document.researcher.display_name
      || audit.name));
    if (scores) {
      row.append(el('td', 'cmp-baron', pct(scores.baron)));
      row.append(el('td', 'cmp-herocon', pct(scores.herocon)));
      row.append(el('td', undefined, pct(scores.gap)));
      row.append(el('td', undefined, String(scores.total_citations)));
      row.append(el('td', undefined, String(scores.classifiable)));
      row.append(el('td', undefined, scores.reliability));
    } else {
      const cell = el('td', undefined, 'scores undefined (no classifiable citations)');
      cell.colSpan = 6;
      row.append(cell);
    }
    table.append(row);
  }
  return table;
}

function overlayChart(audits: UploadedAudit[],
                      pick: (p: TrajectoryPointDoc) => number,
                      heading: string, cls: string): HTMLElement {
  const section = el('section', cls);
  section.append(el('h3', undefined, heading));
  const withSeries = audits.filter((a) => (a.document.trajectory ?? []).length > 0);
  if (withSeries.length === 0) {
    section.append(el('p', undefined,
      'None of the uploaded audits carry a trajectory series.'));
    return section;
  }
  const width = 640;
  const height = 300;
  const pad = 34;
  const years = withSeries.flatMap((a) => a.document.trajectory!.map((p) => p.year));
  const y0 = Math.min(...years);
  const y1 = Math.max(...years);
  const svg = svgEl('svg', { viewBox: `0 0 ${width} ${height}`, width, height });
  const x = (year: number) =>
    y1 === y0 ? width / 2 : pad + ((year - y0) / (y1 - y0)) * (width - 2 * pad);
  const y = (score: number) => height - pad - (score / 100) * (height - 2 * pad);
  withSeries.forEach((audit, i) => {
    const color = OVERLAY_COLORS[i % OVERLAY_COLORS.length];
    const series = audit.document.trajectory!;
    svg.append(svgEl('polyline', {
      points: series.map((p) => `${x(p.year)},${y(pick(p))}`).join(' '),
      fill: 'none', stroke: color, 'stroke-width': 2,
      class: 'overlay-line', 'data-researcher': audit.document.researcher.id,
    }));
  });
  section.append(svg);
  const legend = el('ul', 'overlay-legend');
  withSeries.forEach((audit, i) => {
    const item = el('li', undefined, audit.document.researcher.display_name
      || audit.name);
    item.style.color = OVERLAY_COLORS[i % OVERLAY_COLORS.length];
    legend.append(item);
  });
  section.append(legend);
  return section;
}

export function comparisonView(input: ComparisonInput): HTMLElement {
  const view = el('div', 'comparison-view');

  if (input.rejected.length > 0) {
    const box = el('div', 'rejected-files');
    box.append(el('h3', undefined, 'Rejected files'));
    const list = el('ul');
    for (const rejection of input.rejected) {
      list.append(el('li', 'rejected-file',
        `${rejection.name}: ${rejection.error}`));
    }
    box.append(list);
    view.append(box);
  }

  if (input.accepted.length === 0) {
    view.append(el('p', undefined, 'No valid audits to display.'));
    return view;
  }

  if (input.accepted.length === 1) {
    view.append(resultView(input.accepted[0].document));
    return view;
  }

  view.append(comparisonTable(input.accepted));
  view.append(overlayChart(input.accepted, (p) => p.baron,
    'BARON trajectory comparison', 'baron-overlay'));
  view.append(overlayChart(input.accepted, (p) => p.herocon,
    'HEROCON trajectory comparison', 'herocon-overlay'));

  const reports = el('section', 'individual-reports');
  reports.append(el('h3', undefined, 'Individual reports'));
  for (const audit of input.accepted) {
    const details = el('details', 'individual-report');
    details.append(el('summary', undefined,
      audit.document.researcher.display_name || audit.name));
    details.append(resultView(audit.document));
    reports.append(details);
  }
  view.append(reports);
  return view;
}
