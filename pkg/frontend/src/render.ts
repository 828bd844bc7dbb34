// Pure view-model builders and HTML renderers. Everything here is a direct
// projection of a service payload: no ranks, scores, or validity are ever
// computed client-side.

import type {
  BuilderDeltaPayload,
  InstanceExplanationPayload,
  QueryExplanationPayload,
  RankEntryPayload,
  TopicsPayload,
} from './types.js';

export interface SentenceView {
  index: number;
  text: string;
  struck: boolean;
}

export interface DocumentExplanationView {
  sentences: SentenceView[];
  /** Payload indices that fell outside the sentence range (clamped away). */
  invalidIndices: number[];
}

/** Mark the removed sentences of a rendered body. Out-of-range indices are
 * dropped but reported so the UI can show a warning instead of crashing. */
export function renderDocumentExplanation(
  sentences: string[],
  removedIndices: number[],
): DocumentExplanationView {
  const removed = new Set<number>();
  const invalid: number[] = [];
  for (const index of removedIndices) {
    if (Number.isInteger(index) && index >= 0 && index < sentences.length) {
      removed.add(index);
    } else {
      invalid.push(index);
    }
  }
  return {
    sentences: sentences.map((text, index) => ({
      index,
      text,
      struck: removed.has(index),
    })),
    invalidIndices: invalid,
  };
}

export type Arrow = 'up' | 'down' | 'none';

export interface DeltaRowView {
  docId: string;
  oldRank: number;
  newRank: number;
  arrow: Arrow;
  hiddenEntrant: boolean;
}

export interface RankDeltasView {
  rows: DeltaRowView[];
  /** Green check badge: rendered iff the service said the edit is valid. */
  showCheck: boolean;
}

export function renderRankDeltas(
  deltas: BuilderDeltaPayload[],
  valid: boolean,
): RankDeltasView {
  const arrows: Record<BuilderDeltaPayload['direction'], Arrow> = {
    raised: 'up',
    lowered: 'down',
    unchanged: 'none',
  };
  return {
    rows: deltas.map((d) => ({
      docId: d.doc_id,
      oldRank: d.old_rank,
      newRank: d.new_rank,
      arrow: arrows[d.direction],
      hiddenEntrant: d.is_hidden_entrant,
    })),
    showCheck: valid,
  };
}

export interface RankRowView {
  docId: string;
  title: string;
  rank: number;
  score: number;
  scoreText: string;
}

export function rankTableRows(entries: RankEntryPayload[]): RankRowView[] {
  return entries.map((e) => ({
    docId: e.doc_id,
    title: e.title ?? '(untitled)',
    rank: e.rank,
    score: e.score,
    scoreText: e.score.toFixed(4),
  }));
}

export interface TopicCardView {
  index: number;
  terms: { term: string; probability: number; label: string }[];
}

export function topicCards(payload: TopicsPayload): TopicCardView[] {
  return payload.topics.map((t) => ({
    index: t.index,
    terms: t.top_terms.map((item) => ({
      term: item.term,
      probability: item.probability,
      label: `${item.term} (${item.probability.toFixed(3)})`,
    })),
  }));
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

// ---------------------------------------------------------------------------
// HTML fragments (string-level, DOM-free so they stay testable in node)
// ---------------------------------------------------------------------------

export function documentExplanationHtml(view: DocumentExplanationView): string {
  const parts = view.sentences.map((s) =>
    s.struck
      ? `<s class="removed" data-index="${s.index}">${escapeHtml(s.text)}</s>`
      : `<span data-index="${s.index}">${escapeHtml(s.text)}</span>`,
  );
  const warning = view.invalidIndices.length
    ? `<p class="warning">Ignored out-of-range sentence indices: ${view.invalidIndices.join(', ')}</p>`
    : '';
  return `${warning}<p class="doc-body">${parts.join(' ')}</p>`;
}

const ARROW_GLYPHS: Record<Arrow, string> = { up: '▲', down: '▼', none: '•' };

export function deltaTableHtml(view: RankDeltasView): string {
  const rows = view.rows
    .map((row) => {
      const glyph = ARROW_GLYPHS[row.arrow];
      const entrant = row.hiddenEntrant ? ' <span class="entrant">+</span>' : '';
      return (
        `<tr data-doc-id="${escapeHtml(row.docId)}">` +
        `<td>${row.newRank}</td>` +
        `<td class="arrow ${row.arrow}">${glyph}</td>` +
        `<td>${row.oldRank}</td>` +
        `<td>${escapeHtml(row.docId)}${entrant}</td>` +
        `</tr>`
      );
    })
    .join('');
  const check = view.showCheck
    ? '<p class="valid-badge" data-valid="true">✔ valid counterfactual</p>'
    : '';
  return (
    `<table class="deltas"><thead><tr><th>new</th><th></th><th>old</th><th>document</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>${check}`
  );
}

export function queryExplanationsHtml(explanations: QueryExplanationPayload[]): string {
  const rows = explanations
    .map(
      (e) =>
        `<tr><td>${escapeHtml(e.augmented_query)}</td>` +
        `<td>${escapeHtml(e.appended_terms.join(' '))}</td>` +
        `<td>${e.new_rank}</td><td>${e.score.toFixed(4)}</td></tr>`,
    )
    .join('');
  return (
    `<table class="augmentations"><thead><tr><th>query</th><th>added</th>` +
    `<th>new rank</th><th>tf-idf</th></tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function instanceExplanationsHtml(explanations: InstanceExplanationPayload[]): string {
  return explanations
    .map(
      (e) =>
        `<article class="instance" data-doc-id="${escapeHtml(e.doc_id)}">` +
        `<h4>${escapeHtml(e.title ?? e.doc_id)} — ${(e.similarity * 100).toFixed(1)}% similar ` +
        `(corpus rank ${e.corpus_rank})</h4>` +
        `<p>${escapeHtml(e.body)}</p></article>`,
    )
    .join('');
}
