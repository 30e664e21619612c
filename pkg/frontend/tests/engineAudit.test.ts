// Compatibility: render an audit produced by the real engine, untouched.

import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { describe, expect, it } from 'vitest';

import { buildApp } from '../src/app.js';
import { EngineClient } from '../src/api.js';
import { comparisonView } from '../src/compare.js';
import { resultView } from '../src/panels.js';
import { FakeEngine } from './fakeEngine.js';
import type { AuditDocument } from '../src/types.js';

const here = dirname(fileURLToPath(import.meta.url));
const engineAudit = JSON.parse(
  readFileSync(join(here, 'data', 'engine_audit.json'), 'utf-8'),
) as AuditDocument;

describe('engine-produced audit renders end to end', () => {
  it('full result view shows the stored scores and rationale text', () => {
    const view = resultView(engineAudit);
    expect(view.textContent).toContain(engineAudit.researcher.display_name);
    // engine stores full precision; the UI formats to one decimal
    expect(view.textContent).toContain((engineAudit.scores!.baron).toFixed(1));
    expect(view.querySelectorAll('.citation-row').length)
      .toBe(engineAudit.citations.length);
    expect(view.querySelector('.citation-rationale')!.textContent!.length)
      .toBeGreaterThan(0);
    expect(view.querySelector('.baron-line')).not.toBeNull(); // has trajectory
  });

  it('passes the engine-shaped schema check used for uploads', async () => {
    const engine = new FakeEngine(() => engineAudit);
    const client = new EngineClient('http://engine', engine.fetch, 'sess-x');
    expect(await client.validateAudit(engineAudit)).toBeNull();
  });

  it('compares against itself in the comparison view', () => {
    const view = comparisonView({
      accepted: [
        { name: 'a.json', document: engineAudit },
        { name: 'b.json', document: engineAudit },
      ],
      rejected: [],
    });
    expect(view.querySelectorAll('.comparison-row').length).toBe(2);
    expect(view.querySelectorAll('.baron-overlay .overlay-line').length).toBe(2);
  });
});

describe('application shell', () => {
  it('exposes six tabs, two functional and four informational', () => {
    const engine = new FakeEngine(() => engineAudit);
    const app = buildApp(new EngineClient('http://engine', engine.fetch, 's'));
    document.body.append(app);
    const tabs = app.querySelectorAll('.tab-button');
    expect(tabs.length).toBe(6);
    expect(tabs[0].textContent).toBe('Run Analysis');
    expect(tabs[1].textContent).toBe('View Existing Audits');
    expect(app.querySelectorAll('.info-tab').length).toBe(4);
    // run-analysis form defaults visible
    const sinceInput = app.querySelector(
      'input[name="career-start"]') as HTMLInputElement;
    expect(sinceInput.value).toBe('2000');
    const depth = app.querySelector('select[name="depth"]') as HTMLSelectElement;
    expect(depth.value).toBe('2');
  });
});
