// Comparison flow: caps, per-file rejection, overlays, individual reports.

import { describe, expect, it } from 'vitest';

import { collectUploads, comparisonView, MAX_COMPARISONS,
         TooManyComparisons } from '../src/compare.js';
import { EngineClient } from '../src/api.js';
import { FakeEngine } from './fakeEngine.js';
import { makeAudit } from './fixtures.js';

function engineValidator() {
  const engine = new FakeEngine(() => makeAudit());
  const client = new EngineClient('http://engine', engine.fetch, 'sess-test');
  return (document_: unknown) => client.validateAudit(document_);
}

function auditFile(i: number, trajectory = true) {
  const audit = makeAudit({
    researcherId: `0000-0002-1825-${String(i).padStart(4, '0')}`,
    researcherName: `Researcher ${i}`,
    trajectory: trajectory
      ? [{ year: 2018, baron: 60 + (i % 30), herocon: 70 + (i % 25), citations: 2 },
         { year: 2020, baron: 55 + (i % 30), herocon: 68 + (i % 25), citations: 4 }]
      : undefined,
  });
  return { name: `audit-${i}.json`, text: JSON.stringify(audit) };
}

describe('upload collection', () => {
  it('accepts exactly 115 files', async () => {
    const files = Array.from({ length: MAX_COMPARISONS }, (_, i) => auditFile(i));
    const input = await collectUploads(files, engineValidator());
    expect(input.accepted.length).toBe(115);
    expect(input.rejected.length).toBe(0);
  });

  it('rejects 116 files outright', async () => {
    const files = Array.from({ length: 116 }, (_, i) => auditFile(i));
    await expect(collectUploads(files, engineValidator()))
      .rejects.toThrow(TooManyComparisons);
  });

  it('flags invalid files while valid ones still load', async () => {
    const broken = { ...makeAudit() } as Record<string, unknown>;
    delete broken.scores;
    const files = [
      auditFile(1),
      { name: 'broken.json', text: JSON.stringify(broken) },
      { name: 'garbage.json', text: '{{{' },
    ];
    const input = await collectUploads(files, engineValidator());
    expect(input.accepted.length).toBe(1);
    expect(input.rejected.length).toBe(2);
    expect(input.rejected[0].error).toContain('scores');
    expect(input.rejected[1].error).toContain('JSON');
  });
});

describe('comparison view', () => {
  it('single file produces the full individual view', async () => {
    const input = await collectUploads([auditFile(7)], engineValidator());
    const view = comparisonView(input);
    expect(view.querySelector('.result-view')).not.toBeNull();
    expect(view.querySelector('.comparison-table')).toBeNull();
  });

  it('two files produce a table plus both overlay charts', async () => {
    const input = await collectUploads([auditFile(1), auditFile(2)],
      engineValidator());
    const view = comparisonView(input);
    expect(view.querySelectorAll('.comparison-row').length).toBe(2);
    expect(view.querySelector('.baron-overlay')).not.toBeNull();
    expect(view.querySelector('.herocon-overlay')).not.toBeNull();
    expect(view.querySelectorAll('.baron-overlay .overlay-line').length).toBe(2);
    const reports = view.querySelectorAll('.individual-report');
    expect(reports.length).toBe(2);
    expect(reports[0].querySelector('.result-view')).not.toBeNull();
  });

  it('table shows engine-stored numbers verbatim', async () => {
    const input = await collectUploads([auditFile(1), auditFile(2)],
      engineValidator());
    const view = comparisonView(input);
    const barons = Array.from(view.querySelectorAll('.cmp-baron'))
      .map((cell) => cell.textContent);
    expect(barons).toEqual(['50.0%', '50.0%']);  // stored fixture value
  });

  it('rejected files are listed with their messages alongside valid renders',
     async () => {
    const broken = { ...makeAudit() } as Record<string, unknown>;
    delete broken.citations;
    const input = await collectUploads(
      [auditFile(1), { name: 'nope.json', text: JSON.stringify(broken) }],
      engineValidator());
    const view = comparisonView(input);
    expect(view.querySelector('.rejected-file')!.textContent)
      .toContain('nope.json');
    expect(view.querySelector('.result-view')).not.toBeNull();
  });
});
