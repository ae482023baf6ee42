/** Knowledge tree: the store as boxes (root), folders (categories), and
 * sheets (patients). Member counts follow each category; a hand-adjusted
 * category carries an orange triangle until it is reset.
 */

import { el } from '../dom.js';
import type { TreePayload } from '../types.js';

export interface TreeHandlers {
  onSelectCategory(categoryId: string): void;
}

export function renderTree(
  doc: Document,
  tree: TreePayload | null,
  selectedCategoryId: string | null,
  handlers: TreeHandlers,
): HTMLElement {
  const section = el(doc, 'div', { class: 'knowledge-tree', id: 'knowledge-tree' });
  section.append(el(doc, 'h2', {}, ['Knowledge tree']));
  if (!tree) {
    section.append(el(doc, 'p', { class: 'hint' }, ['Loading…']));
    return section;
  }
  const root = el(doc, 'ul', { class: 'tree-root' });
  const storeItem = el(doc, 'li', { class: 'tree-box' }, ['EKS']);
  const categoryList = el(doc, 'ul');
  for (const category of tree.categories) {
    const item = el(doc, 'li', {
      class: `tree-category${category.id === selectedCategoryId ? ' selected' : ''}`,
      'data-category': category.id,
    });
    const label = el(doc, 'span', { class: 'tree-label' }, [
      `${category.name} `,
      el(doc, 'span', { class: 'tree-count' }, [`(${category.n_patients})`]),
    ]);
    if (category.has_manual_override) {
      label.append(
        el(
          doc,
          'span',
          {
            class: 'manual-marker',
            title: `manually adjusted: STP ${category.manual_stp_ids.join(', ')}`,
          },
          ['▲'],
        ),
      );
    }
    label.addEventListener('click', () => handlers.onSelectCategory(category.id));
    item.append(label);

    if (category.patients.length > 0) {
      const details = el(doc, 'details');
      details.append(el(doc, 'summary', {}, ['patients']));
      const sheets = el(doc, 'ul', { class: 'tree-patients' });
      for (const patient of category.patients) {
        sheets.append(el(doc, 'li', { class: 'tree-sheet' }, [patient.id]));
      }
      details.append(sheets);
      item.append(details);
    }
    categoryList.append(item);
  }
  storeItem.append(categoryList);
  root.append(storeItem);
  section.append(root);
  return section;
}
