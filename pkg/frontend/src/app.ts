/**
 * Application shell: six tabs, two of them functional (Run Analysis, View
 * Existing Audits) and four informational.
 */

import { EngineClient } from './api.js';
import { buildForm, defaultFormState, runAnalysis } from './analysisForm.js';
import { collectUploads, comparisonView, TooManyComparisons } from './compare.js';
import { el } from './format.js';

const INFO_TABS: [string, string][] = [
  ['How to Run Here & Install Locally',
   'Run an analysis in the first tab, or install the engine locally: '
   + 'pip install the package, then start "citekin-serve" and open this UI. '
   + 'The CLI ("citekin --orcid …") produces the same audits; upload them in '
   + 'the View Existing Audits tab.'],
  ['How BARON & HEROCON Work',
   'Every incoming citation is classified by network proximity: self, '
   + 'direct co-author, transitive co-author, institutional tiers, or '
   + 'external; citations with insufficient affiliation data are UNKNOWN '
   + 'and excluded from both scores. BARON is the percentage of '
   + 'classifiable citations with no detected relationship. HEROCON applies '
   + 'graduated weights to in-group citations. The gap between them '
   + 'characterizes citation structure, not quality.'],
  ['Future Features',
   'Venue-governance detection (editorial boards and program committees), '
   + 'field-normalized percentiles, and sensitivity analyses are planned; '
   + 'their taxonomy labels are reserved in the audit schema.'],
  ['About the Audit Format',
   'Audits are self-contained, schema-versioned JSON files. Anything shown '
   + 'here can be recomputed offline from the file alone, and the engine '
   + 'can replay an audit to verify its stored scores.'],
];

export function buildApp(client: EngineClient): HTMLElement {
  const root = el('div', 'citekin-app');
  const nav = el('nav', 'tabs');
  const body = el('main', 'tab-body');
  const panes: HTMLElement[] = [];

  function addTab(title: string, pane: HTMLElement): void {
    const index = panes.length;
    const button = el('button', 'tab-button', title);
    button.addEventListener('click', () => {
      panes.forEach((p, i) => { p.hidden = i !== index; });
    });
    nav.append(button);
    pane.hidden = index !== 0;
    panes.push(pane);
    body.append(pane);
  }

  // Tab 1: Run Analysis
  const runPane = el('section', 'run-analysis-tab');
  const state = defaultFormState();
  const form = buildForm(state);
  const output = el('div', 'analysis-output');
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    void runAnalysis(client, state, output);
  });
  runPane.append(el('h2', undefined, 'Run Analysis'), form, output);
  addTab('Run Analysis', runPane);

  // Tab 2: View Existing Audits
  const viewPane = el('section', 'view-audits-tab');
  viewPane.append(el('h2', undefined, 'View Existing Audits'));
  const picker = el('input') as HTMLInputElement;
  picker.type = 'file';
  picker.multiple = true;
  picker.accept = 'application/json';
  const compareOutput = el('div', 'compare-output');
  picker.addEventListener('change', async () => {
    const files = await Promise.all(
      Array.from(picker.files ?? []).map(async (f) => ({
        name: f.name,
        text: await f.text(),
      })));
    compareOutput.textContent = '';
    try {
      const input = await collectUploads(files,
        (document_) => client.validateAudit(document_));
      compareOutput.append(comparisonView(input));
    } catch (error) {
      if (error instanceof TooManyComparisons) {
        compareOutput.append(el('p', 'too-many-files', error.message));
      } else {
        compareOutput.append(el('p', 'engine-error', String(error)));
      }
    }
  });
  viewPane.append(picker, compareOutput);
  addTab('View Existing Audits', viewPane);

  for (const [title, text] of INFO_TABS) {
    const pane = el('section', 'info-tab');
    pane.append(el('h2', undefined, title), el('p', undefined, text));
    addTab(title, pane);
  }

  root.append(nav, body);
  return root;
}

export function mount(target: HTMLElement, baseUrl = ''): void {
  target.append(buildApp(new EngineClient(baseUrl)));
}
