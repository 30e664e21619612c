/**
 * Run-analysis tab: identifier form with a career-start default of 2000,
 * depth selector, manual-validation checkbox, optional weight upload.
 * Drives the engine over HTTP, streams progress messages, pauses on
 * flagged works (checkbox review) and renders the result view.
 */

import { EngineClient, RateLimitError } from './api.js';
import { el } from './format.js';
import { resultView } from './panels.js';
import type { AnalysisRequest, FlaggedWorkDoc, ProgressDoc } from './types.js';

export const CAREER_START_DEFAULT = 2000;

export interface FormState {
  identifier: string;
  careerStart: number | null;
  depth: number;
  manualValidation: boolean;
  trajectory: boolean;
  weights: Record<string, number> | null;
}

export function defaultFormState(): FormState {
  return {
    identifier: '',
    careerStart: CAREER_START_DEFAULT,
    depth: 2,
    manualValidation: false,
    trajectory: true,
    weights: null,
  };
}

export function toRequest(state: FormState): AnalysisRequest {
  return {
    identifier: state.identifier.trim(),
    since: state.careerStart,
    depth: state.depth,
    max_phase: 3,
    weights: state.weights,
    confirm: state.manualValidation,
    trajectory: state.trajectory,
  };
}

export function buildForm(state: FormState): HTMLFormElement {
  const form = el('form', 'analysis-form') as HTMLFormElement;

  const idLabel = el('label', undefined, 'ORCID or OpenAlex ID ');
  const idInput = el('input') as HTMLInputElement;
  idInput.name = 'identifier';
  idInput.placeholder = '0000-0000-0000-0000 or A0000000000';
  idInput.addEventListener('input', () => { state.identifier = idInput.value; });
  idLabel.append(idInput);

  const sinceLabel = el('label', undefined, 'Career start year ');
  const sinceInput = el('input') as HTMLInputElement;
  sinceInput.type = 'number';
  sinceInput.name = 'career-start';
  sinceInput.value = String(CAREER_START_DEFAULT);
  sinceInput.addEventListener('input', () => {
    state.careerStart = sinceInput.value ? parseInt(sinceInput.value, 10) : null;
  });
  sinceLabel.append(sinceInput);

  const depthLabel = el('label', undefined, 'Co-author graph depth ');
  const depthSelect = el('select') as HTMLSelectElement;
  depthSelect.name = 'depth';
  for (const depth of [1, 2, 3]) {
    const option = el('option', undefined, String(depth)) as HTMLOptionElement;
    option.value = String(depth);
    if (depth === 2) option.selected = true;
    depthSelect.append(option);
  }
  depthSelect.addEventListener('change', () => {
    state.depth = parseInt(depthSelect.value, 10);
  });
  depthLabel.append(depthSelect);

  const confirmLabel = el('label', undefined,
    ' Wait for my validation before discarding flagged papers');
  const confirmBox = el('input') as HTMLInputElement;
  confirmBox.type = 'checkbox';
  confirmBox.name = 'manual-validation';
  confirmBox.addEventListener('change', () => {
    state.manualValidation = confirmBox.checked;
  });
  confirmLabel.prepend(confirmBox);

  const weightsLabel = el('label', undefined, 'Custom HEROCON weights (JSON) ');
  const weightsInput = el('input') as HTMLInputElement;
  weightsInput.type = 'file';
  weightsInput.name = 'weights';
  weightsInput.accept = 'application/json';
  weightsLabel.append(weightsInput);

  const submit = el('button', 'run-analysis', 'Run Analysis') as HTMLButtonElement;
  submit.type = 'submit';

  form.append(idLabel, sinceLabel, depthLabel, confirmLabel, weightsLabel, submit);
  return form;
}

export function flaggedReview(
  flagged: FlaggedWorkDoc[],
  onSubmit: (excludeWorkIds: string[]) => void,
): HTMLElement {
  const panel = el('section', 'flagged-review');
  panel.append(el('h3', undefined,
    `${flagged.length} flagged works need your review`));
  panel.append(el('p', undefined,
    'Check the works to exclude from scoring; unchecked works are kept.'));
  const boxes: [HTMLInputElement, string][] = [];
  for (const work of flagged) {
    const label = el('label', 'flagged-work');
    const box = el('input') as HTMLInputElement;
    box.type = 'checkbox';
    box.dataset.workId = work.work_id;
    label.append(box,
      ` (${work.publication_year ?? '????'}) ${work.title} — ${work.reason}`);
    boxes.push([box, work.work_id]);
    panel.append(label);
  }
  const button = el('button', 'submit-decisions', 'Apply decisions');
  button.addEventListener('click', () => {
    onSubmit(boxes.filter(([box]) => box.checked).map(([, id]) => id));
  });
  panel.append(button);
  return panel;
}

export function progressLine(progress: ProgressDoc): string {
  const last = progress.events[progress.events.length - 1];
  if (!last) return 'starting…';
  return `[${Math.round(last.fraction * 100)}%] ${last.stage}: ${last.detail}`;
}

/**
 * Submit the form state and drive the analysis to completion inside
 * `container`. Progress, flagged-work review, rate-limit rejections and
 * engine errors all render into the container.
 */
export async function runAnalysis(
  client: EngineClient,
  state: FormState,
  container: HTMLElement,
): Promise<void> {
  container.textContent = '';
  const status = el('p', 'progress-message', 'starting…');
  container.append(status);

  let analysisId: string;
  try {
    analysisId = await client.startAnalysis(toRequest(state));
  } catch (error) {
    if (error instanceof RateLimitError) {
      status.className = 'rate-limited';
      status.textContent = `${error.message} — try again in about `
        + `${Math.ceil(error.retryAfterSeconds / 60)} minute(s)`;
      return;
    }
    status.className = 'engine-error';
    status.textContent = String((error as Error).message ?? error);
    return;
  }

  let progress = await client.waitFor(analysisId, (p) => {
    status.textContent = progressLine(p);
  });

  if (progress.state === 'AWAITING_DECISIONS') {
    const flagged = await client.flagged(analysisId);
    await new Promise<void>((resolve) => {
      const review = flaggedReview(flagged, async (excluded) => {
        review.remove();
        await client.submitDecisions(analysisId, excluded);
        resolve();
      });
      container.append(review);
    });
    progress = await client.waitFor(analysisId, (p) => {
      status.textContent = progressLine(p);
    });
  }

  if (progress.state === 'FAILED') {
    status.className = 'engine-error';
    status.textContent = `analysis failed: ${progress.error}`;
    return;
  }

  const result = await client.result(analysisId);
  status.remove();
  container.append(resultView(result));
}
