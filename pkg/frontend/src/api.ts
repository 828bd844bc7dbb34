import type {
  ApiErrorPayload,
  BuilderPayload,
  DocumentExplanationPayload,
  DocumentPayload,
  InstanceExplanationPayload,
  QueryExplanationPayload,
  RankPayload,
  TopicsPayload,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

/** Monotonic ticket dispenser: stale responses are dropped by comparing the
 * ticket they were issued with against the latest one. */
export class RequestSequence {
  private current = 0;

  next(): number {
    return ++this.current;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.current;
  }

  /** Invalidate every outstanding ticket (client-side cancel). */
  cancel(): void {
    this.current++;
  }
}

async function post<T>(base: string, path: string, body: unknown): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${base}${path}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  } catch (err) {
    throw new ApiError('unreachable', `service unreachable: ${err}`, 0);
  }
  const payload = await response.json();
  if (!response.ok) {
    const error = payload as ApiErrorPayload;
    throw new ApiError(error.code ?? 'internal', error.message ?? 'unknown error', response.status);
  }
  return payload as T;
}

export class ApiClient {
  constructor(public readonly base: string) {}

  async corpora(): Promise<string[]> {
    let response: Response;
    try {
      response = await fetch(`${this.base}/corpora`);
    } catch (err) {
      throw new ApiError('unreachable', `service unreachable: ${err}`, 0);
    }
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(payload.code ?? 'internal', payload.message ?? 'unknown error', response.status);
    }
    return payload.corpora as string[];
  }

  rank(corpus: string, query: string, k: number): Promise<RankPayload> {
    return post(this.base, '/rank', { corpus, query, k });
  }

  document(corpus: string, docId: string): Promise<DocumentPayload> {
    return post(this.base, '/document', { corpus, doc_id: docId });
  }

  explainDocument(
    corpus: string,
    query: string,
    k: number,
    docId: string,
    n: number,
  ): Promise<{ explanations: DocumentExplanationPayload[] }> {
    return post(this.base, '/explanations/document', { corpus, query, k, doc_id: docId, n });
  }

  explainQuery(
    corpus: string,
    query: string,
    k: number,
    docId: string,
    n: number,
    threshold: number,
  ): Promise<{ explanations: QueryExplanationPayload[] }> {
    return post(this.base, '/explanations/query', {
      corpus, query, k, doc_id: docId, n, threshold,
    });
  }

  explainInstance(
    corpus: string,
    query: string,
    k: number,
    docId: string,
    n: number,
    variant: 'cosine_sampled' | 'embedding_nearest',
    samples?: number,
    seed = 0,
  ): Promise<{ explanations: InstanceExplanationPayload[] }> {
    const body: Record<string, unknown> = {
      corpus, query, k, doc_id: docId, n, variant, seed,
    };
    if (variant === 'cosine_sampled' && samples !== undefined) {
      body.s = samples;
    }
    return post(this.base, '/explanations/instance', body);
  }

  builderRerank(
    corpus: string,
    query: string,
    k: number,
    docId: string,
    editedBody: string,
  ): Promise<BuilderPayload> {
    return post(this.base, '/builder/rerank', {
      corpus, query, k, doc_id: docId, edited_body: editedBody,
    });
  }

  topics(corpus: string, query: string, k: number, topicCount = 5, seed = 0): Promise<TopicsPayload> {
    return post(this.base, '/topics', { corpus, query, k, T: topicCount, seed });
  }
}
