/** Presentation helpers. Formatting only; the numbers come from the engine. */

export function pct(value: number): string {
  return `${value.toFixed(1)}%`;
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export const SVG_NS = 'http://www.w3.org/2000/svg';

export function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

export const LABEL_COLORS: Record<string, string> = {
  SELF: '#8c564b',
  DIRECT_COAUTHOR: '#d62728',
  TRANSITIVE_COAUTHOR: '#ff7f0e',
  SAME_DEPT: '#9467bd',
  SAME_INSTITUTION: '#e377c2',
  SAME_PARENT_ORG: '#bcbd22',
  VENUE_SELF_GOVERNANCE: '#17becf',
  VENUE_EDITOR_COAUTHOR: '#1f77b4',
  VENUE_EDITOR_AFFIL: '#aec7e8',
  VENUE_COMMITTEE: '#98df8a',
  EXTERNAL: '#2ca02c',
  UNKNOWN: '#7f7f7f',
};

export const LABEL_ORDER = Object.keys(LABEL_COLORS);
