// DOM wiring for the Explanations and Builder pages. Every number shown
// comes from a service payload; this file only moves bytes into the page.

import { ApiClient, ApiError, RequestSequence } from './api.js';
import {
  deltaTableHtml,
  documentExplanationHtml,
  escapeHtml,
  instanceExplanationsHtml,
  queryExplanationsHtml,
  rankTableRows,
  renderDocumentExplanation,
  renderRankDeltas,
  topicCards,
} from './render.js';
import {
  ExplanationType,
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
} from './state.js';
import type { RankEntryPayload } from './types.js';

const api = new ApiClient(
  new URLSearchParams(location.search).get('api') ?? `${location.protocol}//${location.host}`,
);

let explanations = initialExplanationsState();
let builder = initialBuilderState();
const explanationSeq = new RequestSequence();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showError(target: HTMLElement, err: unknown): void {
  const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
  target.innerHTML = `<p class="error">${escapeHtml(message)}</p>`;
}

function rankTableHtml(rows: RankEntryPayload[]): string {
  const body = rankTableRows(rows)
    .map(
      (row) =>
        `<tr data-doc-id="${escapeHtml(row.docId)}"><td>${row.rank}</td>` +
        `<td>${escapeHtml(row.title)}</td><td>${row.scoreText}</td></tr>`,
    )
    .join('');
  return (
    `<table class="ranking"><thead><tr><th>rank</th><th>title</th><th>score</th></tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

async function loadCorpora(): Promise<void> {
  const names = await api.corpora();
  for (const id of ['explanations-corpus', 'builder-corpus']) {
    el<HTMLSelectElement>(id).innerHTML = names
      .map((n) => `<option value="${escapeHtml(n)}">${escapeHtml(n)}</option>`)
      .join('');
  }
}

// ---------------------------------------------------------------------------
// Explanations page
// ---------------------------------------------------------------------------

function refreshExplanationControls(): void {
  el('explanation-pane').hidden = !isPaneVisible(explanations);
  el('threshold-field').hidden = !isThresholdVisible(explanations);
  el('samples-field').hidden = !isSamplesVisible(explanations);
  el('selected-doc-label').textContent = explanations.selectedDocId ?? '';
}

async function runExplanationsRank(): Promise<void> {
  const output = el('explanations-ranking');
  explanations.corpus = el<HTMLSelectElement>('explanations-corpus').value;
  explanations.query = el<HTMLInputElement>('explanations-query').value;
  explanations.k = Number(el<HTMLInputElement>('explanations-k').value);
  try {
    const payload = await api.rank(explanations.corpus, explanations.query, explanations.k);
    explanations = setRanking(explanations, payload.entries);
    output.innerHTML = rankTableHtml(payload.entries);
    output.querySelectorAll('tr[data-doc-id]').forEach((row) => {
      row.addEventListener('click', () => {
        explanations = selectDocument(explanations, (row as HTMLElement).dataset.docId ?? '');
        refreshExplanationControls();
      });
    });
  } catch (err) {
    showError(output, err);
  }
  refreshExplanationControls();
}

async function generateExplanation(): Promise<void> {
  const output = el('explanation-output');
  const progress = el('explanation-progress');
  if (!explanations.corpus || !explanations.selectedDocId) return;
  const { corpus, query, k, selectedDocId } = explanations;
  const type = el<HTMLSelectElement>('explanation-type').value as ExplanationType;
  explanations.n = Number(el<HTMLInputElement>('explanation-n').value);
  explanations.threshold = Number(el<HTMLInputElement>('explanation-threshold').value);
  explanations.samples = Number(el<HTMLInputElement>('explanation-samples').value);

  const ticket = explanationSeq.next();
  explanations.inFlight = true;
  progress.hidden = false;
  output.innerHTML = '';
  try {
    let html = '';
    if (type === 'sentence_removal') {
      const [doc, payload] = await Promise.all([
        api.document(corpus, selectedDocId),
        api.explainDocument(corpus, query, k, selectedDocId, explanations.n),
      ]);
      if (!explanationSeq.isCurrent(ticket)) return; // superseded or canceled
      html = payload.explanations.length
        ? payload.explanations
            .map(
              (e) =>
                `<h4>Rank ${e.new_rank} after removing ${e.removed_indices.length} sentence(s)` +
                ` (importance ${e.importance})</h4>` +
                documentExplanationHtml(renderDocumentExplanation(doc.sentences, e.removed_indices)),
            )
            .join('')
        : '<p>No valid removal found within the search budget.</p>';
    } else if (type === 'query_augmentation') {
      const payload = await api.explainQuery(
        corpus, query, k, selectedDocId, explanations.n, explanations.threshold,
      );
      if (!explanationSeq.isCurrent(ticket)) return;
      html = payload.explanations.length
        ? queryExplanationsHtml(payload.explanations)
        : '<p>No valid augmentation found within the search budget.</p>';
    } else {
      const payload = await api.explainInstance(
        corpus, query, k, selectedDocId, explanations.n, type,
        type === 'cosine_sampled' ? explanations.samples : undefined,
      );
      if (!explanationSeq.isCurrent(ticket)) return;
      html = instanceExplanationsHtml(payload.explanations);
    }
    output.innerHTML = html;
  } catch (err) {
    if (explanationSeq.isCurrent(ticket)) showError(output, err);
  } finally {
    if (explanationSeq.isCurrent(ticket)) {
      explanations.inFlight = false;
      progress.hidden = true;
    }
  }
}

function cancelExplanation(): void {
  explanationSeq.cancel();
  explanations.inFlight = false;
  el('explanation-progress').hidden = true;
}

// ---------------------------------------------------------------------------
// Builder page
// ---------------------------------------------------------------------------

function refreshBuilderControls(): void {
  el<HTMLButtonElement>('builder-rerank').disabled = !canRerank(builder);
  el<HTMLButtonElement>('builder-topics').disabled = builder.rows.length === 0;
  if (!canShowVerdict(builder)) {
    el('builder-result').innerHTML = '';
  }
}

async function runBuilderRank(): Promise<void> {
  const output = el('builder-ranking');
  builder.corpus = el<HTMLSelectElement>('builder-corpus').value;
  builder.query = el<HTMLInputElement>('builder-query').value;
  builder.k = Number(el<HTMLInputElement>('builder-k').value);
  try {
    const payload = await api.rank(builder.corpus, builder.query, builder.k);
    builder.rows = payload.entries;
    builder.selectedDocId = null;
    builder.rerankDone = false;
    el<HTMLTextAreaElement>('builder-editor').value = '';
    output.innerHTML = rankTableHtml(payload.entries);
    output.querySelectorAll('tr[data-doc-id]').forEach((row) => {
      row.addEventListener('click', () => {
        void loadBuilderDocument((row as HTMLElement).dataset.docId ?? '');
      });
    });
  } catch (err) {
    showError(output, err);
  }
  refreshBuilderControls();
}

async function loadBuilderDocument(docId: string): Promise<void> {
  if (!builder.corpus) return;
  try {
    const doc = await api.document(builder.corpus, docId);
    builder = { ...loadDocumentForEditing(builder, docId, doc.body), corpus: builder.corpus };
    el<HTMLTextAreaElement>('builder-editor').value = doc.body;
    el('builder-editing-label').textContent = docId;
  } catch (err) {
    showError(el('builder-result'), err);
  }
  refreshBuilderControls();
}

async function runBuilderRerank(): Promise<void> {
  const output = el('builder-result');
  if (!builder.corpus || !builder.selectedDocId) return;
  try {
    const payload = await api.builderRerank(
      builder.corpus, builder.query, builder.k, builder.selectedDocId,
      el<HTMLTextAreaElement>('builder-editor').value,
    );
    builder.rerankDone = true;
    output.innerHTML = deltaTableHtml(renderRankDeltas(payload.deltas, payload.valid));
  } catch (err) {
    showError(output, err);
  }
}

async function openTopicsModal(): Promise<void> {
  const modal = el('topics-modal');
  const content = el('topics-content');
  builder.topicsOpen = true;
  modal.hidden = false;
  content.innerHTML = '<p class="progress">Fitting topics…</p>';
  if (!builder.corpus) return;
  try {
    const payload = await api.topics(builder.corpus, builder.query, builder.k);
    content.innerHTML = topicCards(payload)
      .map(
        (card) =>
          `<section class="topic-card"><h4>Topic ${card.index}</h4><ul>` +
          card.terms
            .map(
              (t) =>
                `<li><button class="term" data-term="${escapeHtml(t.term)}" ` +
                `title="click to copy">${escapeHtml(t.label)}</button></li>`,
            )
            .join('') +
          `</ul></section>`,
      )
      .join('');
    content.querySelectorAll('button.term').forEach((button) => {
      button.addEventListener('click', () => {
        const term = (button as HTMLElement).dataset.term ?? '';
        void navigator.clipboard?.writeText(term);
      });
    });
  } catch (err) {
    // Error banner inside the modal; the modal itself stays open.
    showError(content, err);
  }
}

function closeTopicsModal(): void {
  builder.topicsOpen = false;
  el('topics-modal').hidden = true;
}

// ---------------------------------------------------------------------------
// Page assembly
// ---------------------------------------------------------------------------

function switchPage(page: 'explanations' | 'builder'): void {
  el('page-explanations').hidden = page !== 'explanations';
  el('page-builder').hidden = page !== 'builder';
  el('tab-explanations').classList.toggle('active', page === 'explanations');
  el('tab-builder').classList.toggle('active', page === 'builder');
}

window.addEventListener('DOMContentLoaded', () => {
  el('tab-explanations').addEventListener('click', () => switchPage('explanations'));
  el('tab-builder').addEventListener('click', () => switchPage('builder'));

  el('explanations-rank').addEventListener('click', () => void runExplanationsRank());
  el<HTMLSelectElement>('explanation-type').addEventListener('change', (event) => {
    explanations.explanationType = (event.target as HTMLSelectElement).value as ExplanationType;
    refreshExplanationControls();
  });
  el('explanation-generate').addEventListener('click', () => void generateExplanation());
  el('explanation-cancel').addEventListener('click', cancelExplanation);

  el('builder-rank').addEventListener('click', () => void runBuilderRank());
  el('builder-rerank').addEventListener('click', () => void runBuilderRerank());
  el('builder-topics').addEventListener('click', () => void openTopicsModal());
  el('topics-close').addEventListener('click', closeTopicsModal);

  switchPage('explanations');
  refreshExplanationControls();
  refreshBuilderControls();
  void loadCorpora().catch((err) => showError(el('explanations-ranking'), err));
});
