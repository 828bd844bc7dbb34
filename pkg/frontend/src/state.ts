// Page view-state and its visibility rules. State is client-side only; a
// reload restarts the session cleanly.

import type { RankEntryPayload } from './types.js';

export type ExplanationType =
  | 'sentence_removal'
  | 'query_augmentation'
  | 'cosine_sampled'
  | 'embedding_nearest';

export const EXPLANATION_TYPE_LABELS: Record<ExplanationType, string> = {
  sentence_removal: 'Sentence Removal',
  query_augmentation: 'Query Augmentation',
  cosine_sampled: 'Cosine Sampled',
  embedding_nearest: 'Embedding Nearest',
};

export interface ExplanationsViewState {
  corpus: string | null;
  query: string;
  k: number;
  rows: RankEntryPayload[];
  selectedDocId: string | null;
  explanationType: ExplanationType;
  n: number;
  threshold: number;
  samples: number;
  inFlight: boolean;
}

export function initialExplanationsState(): ExplanationsViewState {
  return {
    corpus: null,
    query: '',
    k: 10,
    rows: [],
    selectedDocId: null,
    explanationType: 'sentence_removal',
    n: 1,
    threshold: 1,
    samples: 10,
    inFlight: false,
  };
}

/** The Generate Explanation pane spawns only once a ranked row is selected. */
export function isPaneVisible(state: ExplanationsViewState): boolean {
  return state.selectedDocId !== null;
}

/** The rank threshold input applies to query augmentation only. */
export function isThresholdVisible(state: ExplanationsViewState): boolean {
  return state.explanationType === 'query_augmentation';
}

/** The sample-count input applies to the cosine-sampled variant only. */
export function isSamplesVisible(state: ExplanationsViewState): boolean {
  return state.explanationType === 'cosine_sampled';
}

export function selectDocument(state: ExplanationsViewState, docId: string): ExplanationsViewState {
  return { ...state, selectedDocId: docId };
}

export function setRanking(
  state: ExplanationsViewState,
  rows: RankEntryPayload[],
): ExplanationsViewState {
  // A fresh ranking invalidates the previous selection and its pane.
  return { ...state, rows, selectedDocId: null };
}

export interface BuilderViewState {
  corpus: string | null;
  query: string;
  k: number;
  rows: RankEntryPayload[];
  selectedDocId: string | null;
  editedBody: string;
  rerankDone: boolean;
  topicsOpen: boolean;
  inFlight: boolean;
}

export function initialBuilderState(): BuilderViewState {
  return {
    corpus: null,
    query: '',
    k: 10,
    rows: [],
    selectedDocId: null,
    editedBody: '',
    rerankDone: false,
    topicsOpen: false,
    inFlight: false,
  };
}

/** Re-ranking is possible only after a document body has been loaded for editing. */
export function canRerank(state: BuilderViewState): boolean {
  return state.selectedDocId !== null;
}

/** The validity badge may render only after a re-rank round trip. */
export function canShowVerdict(state: BuilderViewState): boolean {
  return state.rerankDone;
}

export function loadDocumentForEditing(
  state: BuilderViewState,
  docId: string,
  body: string,
): BuilderViewState {
  return { ...state, selectedDocId: docId, editedBody: body, rerankDone: false };
}
