/**
 * Result panels: disclaimer banner, score summary, classification donut,
 * co-author network, career trajectory, full citation table.
 *
 * Every score, gap, reliability and trajectory value shown here is read
 * from the audit document as stored; label counts for the donut and table
 * are structural tallies of the citation list, not score arithmetic.
 */

import { LABEL_COLORS, LABEL_ORDER, el, pct, svgEl } from './format.js';
import { displayNodes } from './prune.js';
import type { AuditDocument, CitationDoc, TrajectoryPointDoc } from './types.js';

export function disclaimerBanner(document_: AuditDocument): HTMLElement {
  const banner = el('div', 'disclaimer-banner', document_.disclaimer);
  banner.setAttribute('role', 'note');
  return banner;
}

export function scorePanel(document_: AuditDocument): HTMLElement {
  const panel = el('section', 'score-panel');
  panel.append(el('h3', undefined, 'Score summary'));
  const scores = document_.scores;
  if (!scores) {
    panel.append(el('p', 'score-undefined',
      'Scores are undefined: this audit has no classifiable citations.'));
    return panel;
  }
  const rows: [string, string][] = [
    ['BARON', pct(scores.baron)],
    ['HEROCON', pct(scores.herocon)],
    ['Gap', `${pct(scores.gap)} (${scores.gap_band})`],
    ['Total citations', String(scores.total_citations)],
    ['Classifiable', String(scores.classifiable)],
    ['Unknown (excluded)', String(scores.unknown)],
    ['Reliability', scores.reliability],
  ];
  const dl = el('dl', 'score-grid');
  for (const [label, value] of rows) {
    dl.append(el('dt', undefined, label));
    const dd = el('dd', undefined, value);
    dd.dataset.metric = label.toLowerCase().replace(/[^a-z]+/g, '-');
    dl.append(dd);
  }
  panel.append(dl);
  return panel;
}

export function labelCounts(citations: CitationDoc[]): Map<string, number> {
  const counts = new Map<string, number>();
  for (const citation of citations) {
    counts.set(citation.label, (counts.get(citation.label) ?? 0) + 1);
  }
  return counts;
}

export function donutChart(document_: AuditDocument, size = 260): HTMLElement {
  const wrap = el('section', 'donut-panel');
  wrap.append(el('h3', undefined, 'Citation origins'));
  const counts = labelCounts(document_.citations);
  const total = document_.citations.length;
  const svg = svgEl('svg', { viewBox: `0 0 ${size} ${size}`, width: size, height: size });
  const cx = size / 2;
  const cy = size / 2;
  const outer = size / 2 - 4;
  const inner = outer * 0.62;

  let angle = -Math.PI / 2;
  for (const label of LABEL_ORDER) {
    const count = counts.get(label);
    if (!count || total === 0) continue;
    const sweep = (count / total) * 2 * Math.PI;
    const path = svgEl('path', {
      d: donutSlice(cx, cy, inner, outer, angle, angle + sweep),
      fill: LABEL_COLORS[label] ?? '#999',
      'data-label': label,
      'data-count': count,
    });
    path.append(svgEl('title'));
    path.querySelector('title')!.textContent = `${label}: ${count}`;
    svg.append(path);
    angle += sweep;
  }

  const scores = document_.scores;
  const center = svgEl('text', {
    x: cx, y: cy, 'text-anchor': 'middle', class: 'donut-center',
  });
  const line1 = svgEl('tspan', { x: cx, dy: '-0.3em' });
  const line2 = svgEl('tspan', { x: cx, dy: '1.3em' });
  line1.textContent = scores ? `BARON ${pct(scores.baron)}` : 'no scores';
  line2.textContent = scores ? `HEROCON ${pct(scores.herocon)}` : '';
  center.append(line1, line2);
  svg.append(center);
  wrap.append(svg);
  return wrap;
}

function donutSlice(cx: number, cy: number, r0: number, r1: number,
                    a0: number, a1: number): string {
  // cap at a hair under a full turn so a single-label donut still draws
  const sweep = Math.min(a1 - a0, 2 * Math.PI - 1e-4);
  a1 = a0 + sweep;
  const large = sweep > Math.PI ? 1 : 0;
  const p = (r: number, a: number) =>
    `${cx + r * Math.cos(a)} ${cy + r * Math.sin(a)}`;
  return [
    `M ${p(r1, a0)}`,
    `A ${r1} ${r1} 0 ${large} 1 ${p(r1, a1)}`,
    `L ${p(r0, a1)}`,
    `A ${r0} ${r0} 0 ${large} 0 ${p(r0, a0)}`,
    'Z',
  ].join(' ');
}

export function networkGraph(document_: AuditDocument, size = 520): HTMLElement {
  const wrap = el('section', 'network-panel');
  const graph = document_.coauthor_graph;
  const visible = displayNodes(graph);
  wrap.append(el('h3', undefined,
    `Co-author network (${visible.size} of ${graph.nodes.length} authors)`));

  const svg = svgEl('svg', {
    viewBox: `0 0 ${size} ${size}`, width: size, height: size,
    class: 'network-svg',
  });
  const cx = size / 2;
  const cy = size / 2;
  const ringGap = size / 8;

  const byRing = new Map<number, string[]>();
  const info = new Map(graph.nodes.map((n) => [n.id, n]));
  for (const id of [...visible].sort()) {
    const ring = Math.max(info.get(id)?.distance ?? 0, 0);
    if (!byRing.has(ring)) byRing.set(ring, []);
    byRing.get(ring)!.push(id);
  }

  const positions = new Map<string, [number, number]>();
  positions.set(graph.root, [cx, cy]);
  for (const [ring, ids] of [...byRing.entries()].sort((a, b) => a[0] - b[0])) {
    if (ring === 0) continue;
    ids.forEach((id, i) => {
      const theta = (2 * Math.PI * i) / ids.length;
      positions.set(id, [
        cx + ring * ringGap * Math.cos(theta),
        cy + ring * ringGap * Math.sin(theta),
      ]);
    });
  }

  const sharedWithRoot = new Map<string, { shared: number; year: number | null }>();
  for (const edge of graph.edges) {
    const other = edge.a === graph.root ? edge.b : edge.b === graph.root ? edge.a : null;
    if (other) {
      sharedWithRoot.set(other, {
        shared: edge.shared_papers,
        year: edge.last_collaboration_year,
      });
    }
  }

  for (const edge of graph.edges) {
    const pa = positions.get(edge.a);
    const pb = positions.get(edge.b);
    if (!pa || !pb) continue;
    svg.append(svgEl('line', {
      x1: pa[0], y1: pa[1], x2: pb[0], y2: pb[1],
      stroke: '#d8d8d8', 'stroke-width': 0.6,
    }));
  }

  for (const [id, [x, y]] of positions) {
    const node = info.get(id);
    const distance = node?.distance ?? 0;
    const root = distance === 0;
    const direct = distance === 1;
    const rootEdge = sharedWithRoot.get(id);
    const radius = root ? 14 : direct ? 5 + 2 * Math.min(rootEdge?.shared ?? 1, 8) : 4;
    const circle = svgEl('circle', {
      cx: x, cy: y, r: radius,
      fill: root ? '#d4a017' : direct ? '#b01030' : '#2060c0',
      'data-node-id': id,
      'data-distance': distance,
      class: 'network-node',
    });
    const title = svgEl('title');
    const parts = [node?.name ?? id];
    if (rootEdge) {
      parts.push(`${rootEdge.shared} shared paper(s)`);
      if (rootEdge.year !== null) parts.push(`last collaboration ${rootEdge.year}`);
    }
    title.textContent = parts.join(' — ');
    circle.append(title);
    svg.append(circle);
  }
  wrap.append(svg);
  return wrap;
}

export function trajectoryChart(document_: AuditDocument,
                                width = 640, height = 300): HTMLElement {
  const wrap = el('section', 'trajectory-panel');
  wrap.append(el('h3', undefined, 'Career trajectory'));
  const series = document_.trajectory;
  if (!series || series.length === 0) {
    const note = el('p', 'trajectory-missing',
      'No trajectory in this audit: the trajectory flag must be included '
      + 'during generation. All other panels are unaffected.');
    wrap.append(note);
    return wrap;
  }
  wrap.append(trajectorySvg(series, width, height));
  return wrap;
}

export function trajectorySvg(series: TrajectoryPointDoc[], width: number,
                              height: number,
                              value: (p: TrajectoryPointDoc) => number[] =
                                (p) => [p.baron, p.herocon]): SVGSVGElement {
  const svg = svgEl('svg', {
    viewBox: `0 0 ${width} ${height}`, width, height, class: 'trajectory-svg',
  });
  const pad = 34;
  const years = series.map((p) => p.year);
  const y0 = Math.min(...years);
  const y1 = Math.max(...years);
  const x = (year: number) =>
    y1 === y0 ? width / 2 : pad + ((year - y0) / (y1 - y0)) * (width - 2 * pad);
  const y = (score: number) => height - pad - (score / 100) * (height - 2 * pad);

  const maxCount = Math.max(...series.map((p) => p.citations), 1);
  for (const point of series) {
    const barHeight = (point.citations / maxCount) * (height - 2 * pad) * 0.25;
    svg.append(svgEl('rect', {
      x: x(point.year) - 4, y: height - pad - barHeight,
      width: 8, height: barHeight, fill: '#bbb', opacity: 0.5,
      class: 'trajectory-bar', 'data-year': point.year,
      'data-citations': point.citations,
    }));
  }

  const gapPoints = [
    ...series.map((p) => `${x(p.year)},${y(p.baron)}`),
    ...[...series].reverse().map((p) => `${x(p.year)},${y(p.herocon)}`),
  ].join(' ');
  svg.append(svgEl('polygon', {
    points: gapPoints, fill: '#2060c0', opacity: 0.12, class: 'gap-area',
  }));

  const lines: [string, (p: TrajectoryPointDoc) => number, string][] = [
    ['baron-line', (p) => p.baron, '#b01030'],
    ['herocon-line', (p) => p.herocon, '#2060c0'],
  ];
  for (const [cls, pick, color] of lines) {
    svg.append(svgEl('polyline', {
      points: series.map((p) => `${x(p.year)},${y(pick(p))}`).join(' '),
      fill: 'none', stroke: color, 'stroke-width': 2, class: cls,
    }));
    for (const point of series) {
      svg.append(svgEl('circle', {
        cx: x(point.year), cy: y(pick(point)), r: 3, fill: color,
        class: `${cls}-point`, 'data-year': point.year,
        'data-value': pick(point),
      }));
    }
  }
  return svg;
}

export function citationTable(document_: AuditDocument): HTMLElement {
  const details = el('details', 'citation-table') as HTMLDetailsElement;
  const summary = el('summary', undefined,
    `Full citation table (${document_.citations.length} citations)`);
  details.append(summary);

  const exportButton = el('button', 'export-citations', 'Export citations as JSON');
  exportButton.addEventListener('click', () => {
    const blob = new Blob([JSON.stringify(document_.citations, null, 2)],
      { type: 'application/json' });
    const link = el('a') as HTMLAnchorElement;
    link.href = URL.createObjectURL(blob);
    link.download = `${document_.researcher.id}_citations.json`;
    link.click();
    URL.revokeObjectURL(link.href);
  });
  details.append(exportButton);

  const table = el('table');
  const head = el('tr');
  for (const column of ['Citing work', 'Year', 'Label', 'Confidence', 'Phase',
                        'Rationale']) {
    head.append(el('th', undefined, column));
  }
  table.append(head);
  for (const citation of document_.citations) {
    const row = el('tr', 'citation-row');
    row.append(el('td', undefined, citation.citing_work.title
      || citation.citing_work.work_id));
    row.append(el('td', undefined,
      citation.citing_work.publication_year?.toString() ?? ''));
    const label = el('td', 'citation-label', citation.label);
    label.style.color = LABEL_COLORS[citation.label] ?? 'inherit';
    row.append(label);
    row.append(el('td', undefined, citation.confidence));
    row.append(el('td', undefined, String(citation.phase)));
    row.append(el('td', 'citation-rationale', citation.rationale));
    table.append(row);
  }
  details.append(table);
  return details;
}

export function classificationSummary(document_: AuditDocument,
                                      weights?: Record<string, unknown>): HTMLElement {
  const section = el('section', 'classification-summary');
  section.append(el('h3', undefined, 'Classification summary'));
  const counts = labelCounts(document_.citations);
  const configWeights = (weights
    ?? (document_.config as { weights?: Record<string, number> }).weights
    ?? {}) as Record<string, number>;
  const table = el('table');
  const head = el('tr');
  for (const column of ['Label', 'Count', 'Weight']) {
    head.append(el('th', undefined, column));
  }
  table.append(head);
  for (const label of LABEL_ORDER) {
    const count = counts.get(label);
    if (!count) continue;
    const row = el('tr');
    row.append(el('td', undefined, label));
    row.append(el('td', undefined, String(count)));
    row.append(el('td', undefined,
      label === 'UNKNOWN' ? '—' : String(configWeights[label] ?? '')));
    table.append(row);
  }
  section.append(table);
  return section;
}

export function resultView(document_: AuditDocument): HTMLElement {
  const view = el('article', 'result-view');
  view.append(disclaimerBanner(document_));
  view.append(el('h2', undefined,
    `${document_.researcher.display_name} (${document_.researcher.id})`));
  view.append(scorePanel(document_));
  view.append(donutChart(document_));
  view.append(classificationSummary(document_));
  view.append(networkGraph(document_));
  view.append(trajectoryChart(document_));
  view.append(citationTable(document_));
  return view;
}
