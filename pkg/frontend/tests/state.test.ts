import { describe, expect, it } from 'vitest';

import { RequestSequence } from '../src/api.js';
import {
  canRerank,
  canShowVerdict,
  initialBuilderState,
  initialExplanationsState,
  isPaneVisible,
  isSamplesVisible,
  isThresholdVisible,
  loadDocumentForEditing,
  selectDocument,
  setRanking,
} from '../src/state.js';

const ROWS = [
  { doc_id: 'a', title: 'A', score: 2.0, rank: 1 },
  { doc_id: 'b', title: 'B', score: 1.0, rank: 2 },
];

describe('explanations view state', () => {
  it('hides the explanation pane until a document row is selected', () => {
    let state = initialExplanationsState();
    expect(isPaneVisible(state)).toBe(false);
    state = setRanking(state, ROWS);
    expect(isPaneVisible(state)).toBe(false);
    state = selectDocument(state, 'a');
    expect(isPaneVisible(state)).toBe(true);
  });

  it('re-ranking clears the selection and hides the pane again', () => {
    let state = selectDocument(setRanking(initialExplanationsState(), ROWS), 'a');
    state = setRanking(state, ROWS);
    expect(state.selectedDocId).toBeNull();
    expect(isPaneVisible(state)).toBe(false);
  });

  it('shows the threshold input only for query augmentation', () => {
    const state = initialExplanationsState();
    for (const type of ['sentence_removal', 'cosine_sampled', 'embedding_nearest'] as const) {
      expect(isThresholdVisible({ ...state, explanationType: type })).toBe(false);
    }
    expect(isThresholdVisible({ ...state, explanationType: 'query_augmentation' })).toBe(true);
  });

  it('shows the samples input only for the cosine-sampled variant', () => {
    const state = initialExplanationsState();
    for (const type of ['sentence_removal', 'query_augmentation', 'embedding_nearest'] as const) {
      expect(isSamplesVisible({ ...state, explanationType: type })).toBe(false);
    }
    expect(isSamplesVisible({ ...state, explanationType: 'cosine_sampled' })).toBe(true);
  });
});

describe('builder view state', () => {
  it('enables re-rank only once an edit body has loaded', () => {
    let state = initialBuilderState();
    expect(canRerank(state)).toBe(false);
    state = loadDocumentForEditing(state, 'a', 'Body text.');
    expect(canRerank(state)).toBe(true);
    expect(state.editedBody).toBe('Body text.');
  });

  it('allows the validity badge only after a re-rank round trip', () => {
    let state = loadDocumentForEditing(initialBuilderState(), 'a', 'Body.');
    expect(canShowVerdict(state)).toBe(false);
    state = { ...state, rerankDone: true };
    expect(canShowVerdict(state)).toBe(true);
    // Loading a different document invalidates the verdict again.
    state = loadDocumentForEditing(state, 'b', 'Other.');
    expect(canShowVerdict(state)).toBe(false);
  });
});

describe('request sequence', () => {
  it('drops superseded responses', () => {
    const seq = new RequestSequence();
    const first = seq.next();
    const second = seq.next();
    expect(seq.isCurrent(first)).toBe(false);
    expect(seq.isCurrent(second)).toBe(true);
  });

  it('cancel invalidates the in-flight ticket', () => {
    const seq = new RequestSequence();
    const ticket = seq.next();
    seq.cancel();
    expect(seq.isCurrent(ticket)).toBe(false);
  });
});
