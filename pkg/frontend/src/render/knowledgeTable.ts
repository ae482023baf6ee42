/** Knowledge table: one row per category with the 16-glyph summary and the
 * match bar (wider bar = better match, normalized by the view's best score).
 */

import { el } from '../dom.js';
import type { MatchPayload } from '../types.js';
import {
  formatScore,
  glyphClass,
  matchBarFractions,
  sortMatchResults,
  type SortDirection,
} from '../viewmodel.js';

export interface KnowledgeTableHandlers {
  onSelectCategory(categoryId: string): void;
  onSort(key: 'name' | 'score'): void;
}

export function renderKnowledgeTable(
  doc: Document,
  match: MatchPayload | null,
  selectedCategoryId: string | null,
  sort: { key: 'name' | 'score'; direction: SortDirection },
  handlers: KnowledgeTableHandlers,
): HTMLElement {
  const section = el(doc, 'div', { class: 'knowledge-table', id: 'knowledge-table' });
  section.append(el(doc, 'h2', {}, ['Knowledge table']));
  if (!match) {
    section.append(
      el(doc, 'p', { class: 'hint' }, ['Load a patient trial to see category matches.']),
    );
    return section;
  }

  const table = el(doc, 'table');
  const headRow = el(doc, 'tr');
  const nameHead = el(doc, 'th', { class: 'sortable' }, ['Category']);
  nameHead.addEventListener('click', () => handlers.onSort('name'));
  const paramsHead = el(doc, 'th', {}, ['Params in category']);
  const matchHead = el(doc, 'th', { class: 'sortable' }, ['Match']);
  matchHead.addEventListener('click', () => handlers.onSort('score'));
  headRow.append(nameHead, paramsHead, matchHead);
  table.append(headRow);

  const ordered = sortMatchResults(match.results, sort.key, sort.direction);
  const fractions = matchBarFractions(ordered);
  ordered.forEach((result, index) => {
    const row = el(doc, 'tr', {
      class: `kt-row${result.category_id === selectedCategoryId ? ' selected' : ''}`,
      'data-category': result.category_id,
    });
    row.addEventListener('click', () => handlers.onSelectCategory(result.category_id));

    row.append(el(doc, 'td', { class: 'kt-name' }, [result.category_name]));

    const glyphCell = el(doc, 'td', { class: 'kt-glyphs' });
    result.summary.forEach((state, glyphIndex) => {
      glyphCell.append(
        el(doc, 'span', {
          class: glyphClass(state),
          title: `STP ${glyphIndex + 1}: ${state.replace(/_/g, ' ')}`,
        }),
      );
    });
    row.append(glyphCell);

    const barCell = el(doc, 'td', { class: 'kt-match' });
    const bar = el(doc, 'div', { class: 'match-bar' });
    const fill = el(doc, 'div', {
      class: 'match-bar-fill',
      style: `width:${(fractions[index] * 100).toFixed(1)}%`,
      'data-score': String(result.score),
    });
    bar.append(fill);
    barCell.append(
      bar,
      el(doc, 'span', { class: 'score-text' }, [formatScore(result.score)]),
    );
    row.append(barCell);
    table.append(row);
  });

  section.append(table);
  return section;
}
