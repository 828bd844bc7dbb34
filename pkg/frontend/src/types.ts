// Payload shapes of the explanation service. The UI never computes ranks,
// scores, or validity itself; every displayed number originates here.

export interface RankEntryPayload {
  doc_id: string;
  title: string | null;
  score: number;
  rank: number;
}

export interface RankPayload {
  entries: RankEntryPayload[];
}

export interface DocumentPayload {
  doc_id: string;
  title: string | null;
  body: string;
  sentences: string[];
}

export interface DocumentExplanationPayload {
  removed_indices: number[];
  removed_texts: string[];
  importance: number;
  new_rank: number;
  valid: boolean;
}

export interface QueryExplanationPayload {
  appended_terms: string[];
  score: number;
  augmented_query: string;
  new_rank: number;
  valid: boolean;
}

export interface InstanceExplanationPayload {
  doc_id: string;
  title: string | null;
  body: string;
  similarity: number;
  corpus_rank: number;
}

export interface BuilderDeltaPayload {
  doc_id: string;
  old_rank: number;
  new_rank: number;
  direction: 'raised' | 'lowered' | 'unchanged';
  is_hidden_entrant: boolean;
}

export interface BuilderPayload {
  deltas: BuilderDeltaPayload[];
  valid: boolean;
}

export interface TopicTermPayload {
  term: string;
  probability: number;
}

export interface TopicPayload {
  index: number;
  top_terms: TopicTermPayload[];
}

export interface TopicsPayload {
  topics: TopicPayload[];
}

export interface ApiErrorPayload {
  code: string;
  message: string;
}
