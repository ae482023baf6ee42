/** Demographic filter panel; every change immediately re-fetches the matching
 * results. Filters are session-only and reset on restart by design.
 */

import { el } from '../dom.js';
import type { FilterState, Gender } from '../types.js';

export interface FilterHandlers {
  onChange(filter: FilterState): void;
}

export function renderFilters(
  doc: Document,
  filter: FilterState,
  handlers: FilterHandlers,
): HTMLElement {
  const section = el(doc, 'div', { class: 'filter-panel', id: 'filter-panel' });
  section.append(el(doc, 'h2', {}, ['Filter']));

  const genderRow = el(doc, 'div', { class: 'filter-row' });
  genderRow.append(el(doc, 'label', {}, ['Gender ']));
  for (const gender of ['female', 'male'] as Gender[]) {
    const box = el(doc, 'input', {
      type: 'checkbox',
      id: `filter-gender-${gender}`,
      ...(filter.genders.includes(gender) ? { checked: 'checked' } : {}),
    }) as HTMLInputElement;
    box.addEventListener('change', () => {
      const genders = box.checked
        ? [...filter.genders, gender]
        : filter.genders.filter((g) => g !== gender);
      handlers.onChange({ ...filter, genders });
    });
    genderRow.append(box, el(doc, 'label', { for: `filter-gender-${gender}` }, [gender]));
  }
  section.append(genderRow);

  const bounds: [string, keyof FilterState, keyof FilterState][] = [
    ['Age', 'ageMin', 'ageMax'],
    ['Body height [cm]', 'heightMin', 'heightMax'],
    ['Body mass [kg]', 'massMin', 'massMax'],
  ];
  for (const [label, loKey, hiKey] of bounds) {
    const row = el(doc, 'div', { class: 'filter-row' });
    row.append(el(doc, 'label', {}, [`${label} `]));
    for (const key of [loKey, hiKey]) {
      const input = el(doc, 'input', {
        type: 'number',
        class: 'filter-bound',
        id: `filter-${key}`,
        placeholder: key === loKey ? 'min' : 'max',
        value: String(filter[key]),
      }) as HTMLInputElement;
      input.addEventListener('change', () => {
        handlers.onChange({ ...filter, [key]: input.value });
      });
      row.append(input);
    }
    section.append(row);
  }

  const clear = el(doc, 'button', { id: 'filter-clear' }, ['Clear filters']);
  clear.addEventListener('click', () =>
    handlers.onChange({
      genders: [],
      ageMin: '',
      ageMax: '',
      heightMin: '',
      heightMax: '',
      massMin: '',
      massMax: '',
    }),
  );
  section.append(clear);
  return section;
}
