/**
 * HTTP client for the engine service.
 *
 * One session token per browser session; the engine enforces the
 * 10-analyses-per-hour limit against it. 429 responses surface as
 * RateLimitError with the server's Retry-After value. Audit validation and
 * result fetches carry no limit.
 */

import type {
  AnalysisRequest,
  AuditDocument,
  FlaggedWorkDoc,
  ProgressDoc,
} from './types.js';

export class EngineError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class RateLimitError extends EngineError {
  constructor(message: string, readonly retryAfterSeconds: number) {
    super(message, 429);
  }
}

function randomToken(): string {
  return 'sess-' + Math.random().toString(36).slice(2) + Date.now().toString(36);
}

export function sessionToken(storage?: Storage): string {
  const store = storage ?? globalThis.sessionStorage;
  let token = store.getItem('citekin-session');
  if (!token) {
    token = randomToken();
    store.setItem('citekin-session', token);
  }
  return token;
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (typeof body.detail === 'string') return body.detail;
    if (body.detail) return JSON.stringify(body.detail);
    return JSON.stringify(body);
  } catch {
    return response.statusText || `HTTP ${response.status}`;
  }
}

export class EngineClient {
  constructor(
    readonly baseUrl: string = '',
    readonly fetchFn: typeof fetch = (...args) => fetch(...args),
    readonly token: string = sessionToken(),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const headers: Record<string, string> = {
      'Content-Type': 'application/json',
      'X-Session-Token': this.token,
      ...(init?.headers as Record<string, string> | undefined),
    };
    const response = await this.fetchFn(this.baseUrl + path, { ...init, headers });
    if (response.status === 429) {
      const retryAfter = parseInt(response.headers.get('Retry-After') ?? '0', 10);
      throw new RateLimitError(await errorDetail(response), retryAfter);
    }
    if (!response.ok) {
      throw new EngineError(await errorDetail(response), response.status);
    }
    return response;
  }

  async startAnalysis(request: AnalysisRequest): Promise<string> {
    const response = await this.request('/api/analyses', {
      method: 'POST',
      body: JSON.stringify(request),
    });
    const body = await response.json();
    return body.analysis_id as string;
  }

  async progress(analysisId: string): Promise<ProgressDoc> {
    const response = await this.request(`/api/analyses/${analysisId}`);
    return (await response.json()) as ProgressDoc;
  }

  async flagged(analysisId: string): Promise<FlaggedWorkDoc[]> {
    const response = await this.request(`/api/analyses/${analysisId}/flagged`);
    const body = await response.json();
    return body.flagged as FlaggedWorkDoc[];
  }

  async submitDecisions(analysisId: string, excludeWorkIds: string[]): Promise<void> {
    await this.request(`/api/analyses/${analysisId}/decisions`, {
      method: 'POST',
      body: JSON.stringify({ exclude_work_ids: excludeWorkIds }),
    });
  }

  async result(analysisId: string): Promise<AuditDocument> {
    const response = await this.request(`/api/analyses/${analysisId}/result`);
    return (await response.json()) as AuditDocument;
  }

  /** Schema-validate an uploaded audit; returns an error message or null. */
  async validateAudit(document: unknown): Promise<string | null> {
    try {
      await this.request('/api/audits/validate', {
        method: 'POST',
        body: JSON.stringify(document),
      });
      return null;
    } catch (error) {
      if (error instanceof EngineError && error.status === 422) {
        return error.message;
      }
      throw error;
    }
  }

  /** Poll until the analysis leaves RUNNING, reporting progress along the way. */
  async waitFor(
    analysisId: string,
    onProgress: (progress: ProgressDoc) => void,
    intervalMs = 500,
    timeoutMs = 10 * 60 * 1000,
  ): Promise<ProgressDoc> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const progress = await this.progress(analysisId);
      onProgress(progress);
      if (progress.state !== 'RUNNING' && progress.state !== 'PENDING') {
        return progress;
      }
      if (Date.now() > deadline) {
        throw new EngineError('analysis timed out', 0);
      }
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
  }
}
