/** Parameter explorer: sixteen rows, each with the patient's values, the twin
 * box plot (norm in blue on top, selected category in orange below), the
 * hatching range slider (HRS) carrying the selected category's raw member
 * values and its draggable [min, max] range, and the category-difference bar.
 */

import { el, svgEl } from '../dom.js';
import type {
  ItbpRowWire,
  ParametersPayload,
  RangeWire,
  TreeCategoryWire,
} from '../types.js';
import {
  boxGeometry,
  differenceFractions,
  formatValue,
  hatchPositions,
  makeScale,
  rowDomain,
  sortExplorerRows,
  type Scale,
  type SortDirection,
} from '../viewmodel.js';

export interface ExplorerHandlers {
  onSort(key: 'id' | 'name' | 'difference'): void;
  onToggleSubset(stpId: number, checked: boolean): void;
  onApply(): void;
  onReset(): void;
  onOverride(stpId: number, min: number, max: number): void;
}

const SVG_WIDTH = 280;
const SVG_HEIGHT = 64;
const STRIP_TOP = 24;
const STRIP_BOTTOM = 40;
const HANDLE_WIDTH = 7;

function boxPlot(
  doc: Document,
  stats: ItbpRowWire['norm'],
  scale: Scale,
  yCenter: number,
  cssClass: string,
): SVGElement | null {
  const geometry = boxGeometry(stats, scale);
  if (!geometry) return null;
  const group = svgEl(doc, 'g', { class: `box ${cssClass}` });
  group.append(
    svgEl(doc, 'line', {
      x1: geometry.whiskerLo.toFixed(1),
      x2: geometry.whiskerHi.toFixed(1),
      y1: String(yCenter),
      y2: String(yCenter),
      class: 'whisker',
    }),
    svgEl(doc, 'rect', {
      x: geometry.boxLo.toFixed(1),
      y: String(yCenter - 8),
      width: Math.max(geometry.boxHi - geometry.boxLo, 1).toFixed(1),
      height: '16',
      class: 'box-rect',
    }),
    svgEl(doc, 'line', {
      x1: geometry.median.toFixed(1),
      x2: geometry.median.toFixed(1),
      y1: String(yCenter - 8),
      y2: String(yCenter + 8),
      class: 'median',
    }),
  );
  return group;
}

function patientMarker(
  doc: Document,
  value: number,
  scale: Scale,
  cssClass: string,
): SVGElement {
  const x = scale.toPx(value).toFixed(1);
  const group = svgEl(doc, 'g', { class: `patient-marker ${cssClass}` });
  group.append(
    svgEl(doc, 'line', { x1: x, x2: x, y1: '0', y2: String(SVG_HEIGHT) }),
  );
  return group;
}

interface DragContext {
  svg: SVGElement;
  scale: Scale;
  stpId: number;
  handlers: ExplorerHandlers;
}

function attachHandleDrag(
  doc: Document,
  handle: SVGElement,
  other: SVGElement,
  context: DragContext,
): void {
  handle.addEventListener('mousedown', (event) => {
    event.preventDefault();
    const bounds = context.svg.getBoundingClientRect();
    const track = context.svg.querySelector('.hrs-range');
    const move = (moveEvent: Event) => {
      const clientX = (moveEvent as MouseEvent).clientX;
      const px = Math.min(Math.max(clientX - bounds.left, 0), context.scale.width);
      handle.setAttribute('x', String(px - HANDLE_WIDTH / 2));
      handle.setAttribute('data-px', String(px));
      track?.classList.add('dragging');
    };
    const up = () => {
      doc.removeEventListener('mousemove', move);
      doc.removeEventListener('mouseup', up);
      const read = (node: SVGElement) =>
        context.scale.fromPx(
          Number(node.getAttribute('data-px') ?? node.getAttribute('data-origin-px')),
        );
      const a = read(handle);
      const b = read(other);
      context.handlers.onOverride(
        context.stpId,
        Math.min(a, b),
        Math.max(a, b),
      );
    };
    doc.addEventListener('mousemove', move);
    doc.addEventListener('mouseup', up);
  });
}

function hatchingRangeSlider(
  doc: Document,
  row: ItbpRowWire,
  range: RangeWire | undefined,
  scale: Scale,
  context: DragContext,
): SVGElement {
  const group = svgEl(doc, 'g', { class: 'hrs' });
  group.append(
    svgEl(doc, 'rect', {
      x: '0',
      y: String(STRIP_TOP),
      width: String(scale.width),
      height: String(STRIP_BOTTOM - STRIP_TOP),
      class: 'hrs-track',
    }),
  );

  // Range region; falls back to the full domain on categories without data so
  // a clinician can still carve out a range by hand.
  const lo = range && range.min !== null ? range.min : scale.min;
  const hi = range && range.max !== null ? range.max : scale.max;
  const manual = range?.manual ?? false;
  const loPx = scale.toPx(lo);
  const hiPx = scale.toPx(hi);
  group.append(
    svgEl(doc, 'rect', {
      x: loPx.toFixed(1),
      y: String(STRIP_TOP),
      width: Math.max(hiPx - loPx, 0).toFixed(1),
      height: String(STRIP_BOTTOM - STRIP_TOP),
      class: `hrs-range${manual ? ' hrs-manual' : ''}`,
      'data-min': String(lo),
      'data-max': String(hi),
    }),
  );

  // Hatching: one thin line per stored member value.
  for (const px of hatchPositions(row.selected.raw_values, scale)) {
    group.append(
      svgEl(doc, 'line', {
        x1: px.toFixed(1),
        x2: px.toFixed(1),
        y1: String(STRIP_TOP + 2),
        y2: String(STRIP_BOTTOM - 2),
        class: 'hrs-hatch',
      }),
    );
  }

  const makeHandle = (px: number, kind: 'min' | 'max', value: number) =>
    svgEl(doc, 'rect', {
      x: (px - HANDLE_WIDTH / 2).toFixed(1),
      y: String(STRIP_TOP - 2),
      width: String(HANDLE_WIDTH),
      height: String(STRIP_BOTTOM - STRIP_TOP + 4),
      class: 'hrs-handle',
      'data-kind': kind,
      'data-value': String(value),
      'data-origin-px': String(px),
    });
  const minHandle = makeHandle(loPx, 'min', lo);
  const maxHandle = makeHandle(hiPx, 'max', hi);
  attachHandleDrag(doc, minHandle, maxHandle, context);
  attachHandleDrag(doc, maxHandle, minHandle, context);
  group.append(minHandle, maxHandle);
  return group;
}

function itbpCell(
  doc: Document,
  row: ItbpRowWire,
  range: RangeWire | undefined,
  handlers: ExplorerHandlers,
): HTMLElement {
  const cell = el(doc, 'td', { class: 'itbp-cell' });
  const domain = rowDomain(row, range);
  if (!domain) {
    cell.append(el(doc, 'span', { class: 'hint' }, ['no data']));
    return cell;
  }
  const scale = makeScale(domain[0], domain[1], SVG_WIDTH);
  const svg = svgEl(doc, 'svg', {
    viewBox: `0 0 ${SVG_WIDTH} ${SVG_HEIGHT}`,
    width: String(SVG_WIDTH),
    height: String(SVG_HEIGHT),
    class: 'itbp',
  });
  const context: DragContext = { svg, scale, stpId: row.stp_id, handlers };

  const normBox = boxPlot(doc, row.norm, scale, 10, 'box-norm');
  if (normBox) svg.append(normBox);
  svg.append(hatchingRangeSlider(doc, row, range, scale, context));
  const selectedBox = boxPlot(doc, row.selected, scale, 54, 'box-selected');
  if (selectedBox) svg.append(selectedBox);
  if (row.patient_left !== null) {
    svg.append(patientMarker(doc, row.patient_left, scale, 'marker-left'));
  }
  if (row.patient_right !== null) {
    svg.append(patientMarker(doc, row.patient_right, scale, 'marker-right'));
  }
  cell.append(svg);
  return cell;
}

export function renderParameterExplorer(
  doc: Document,
  payload: ParametersPayload | null,
  category: TreeCategoryWire | null,
  patientLoaded: boolean,
  subset: Set<number>,
  sort: { key: 'id' | 'name' | 'difference'; direction: SortDirection },
  handlers: ExplorerHandlers,
): HTMLElement {
  const section = el(doc, 'div', {
    class: 'parameter-explorer',
    id: 'parameter-explorer',
  });
  const title = payload
    ? `Parameter explorer – ${payload.category_name}`
    : 'Parameter explorer';
  section.append(el(doc, 'h2', {}, [title]));
  if (!payload) {
    section.append(
      el(doc, 'p', { class: 'hint' }, ['Select a category in the knowledge table.']),
    );
    return section;
  }

  const controls = el(doc, 'div', { class: 'explorer-controls' });
  const applyButton = el(
    doc,
    'button',
    { id: 'apply-button', ...(patientLoaded ? {} : { disabled: 'disabled' }) },
    [subset.size > 0 ? `Apply ${subset.size} selected` : 'Apply'],
  );
  applyButton.addEventListener('click', () => handlers.onApply());
  const resetButton = el(doc, 'button', { id: 'reset-button' }, ['Reset']);
  resetButton.addEventListener('click', () => handlers.onReset());
  controls.append(applyButton, resetButton);
  section.append(controls);

  const table = el(doc, 'table');
  const headRow = el(doc, 'tr');
  const heads: [string, 'id' | 'name' | 'difference' | null][] = [
    ['', null],
    ['ID', 'id'],
    ['Parameter', 'name'],
    ['Patient L/R', null],
    ['Norm vs selected', null],
    ['Difference', 'difference'],
  ];
  for (const [label, key] of heads) {
    const head = el(doc, 'th', key ? { class: 'sortable' } : {}, [label]);
    if (key) head.addEventListener('click', () => handlers.onSort(key));
    headRow.append(head);
  }
  table.append(headRow);

  const rangesById = new Map<number, RangeWire>(
    (category?.ranges ?? []).map((r) => [r.stp_id, r]),
  );
  const ordered = sortExplorerRows(payload.parameters, sort.key, sort.direction);
  const fractions = differenceFractions(ordered);

  ordered.forEach((row, index) => {
    const tr = el(doc, 'tr', { class: 'pe-row', 'data-stp': String(row.stp_id) });

    const checkbox = el(doc, 'input', {
      type: 'checkbox',
      class: 'subset-check',
      ...(subset.has(row.stp_id) ? { checked: 'checked' } : {}),
    }) as HTMLInputElement;
    checkbox.addEventListener('change', () =>
      handlers.onToggleSubset(row.stp_id, checkbox.checked),
    );
    tr.append(el(doc, 'td', {}, [checkbox]));

    tr.append(el(doc, 'td', { class: 'pe-id' }, [String(row.stp_id)]));
    tr.append(
      el(doc, 'td', { class: 'pe-name' }, [`${row.name} (${row.foot})`]),
    );

    const left = el(doc, 'span', { class: 'value-left' }, [
      formatValue(row.patient_left, ''),
    ]);
    const right = el(doc, 'span', { class: 'value-right' }, [
      formatValue(row.patient_right, ''),
    ]);
    tr.append(
      el(doc, 'td', { class: 'pe-values' }, [left, ' / ', right, ` ${row.unit}`]),
    );

    tr.append(itbpCell(doc, row, rangesById.get(row.stp_id), handlers));

    const diffCell = el(doc, 'td', { class: 'pe-diff' });
    const fraction = fractions[index];
    if (fraction === null) {
      diffCell.append(el(doc, 'span', { class: 'hint' }, ['–']));
    } else {
      const bar = el(doc, 'div', { class: 'diff-bar' });
      bar.append(
        el(doc, 'div', {
          class: 'diff-bar-fill',
          style: `width:${(fraction * 100).toFixed(1)}%`,
        }),
      );
      const label = row.difference?.degenerate
        ? '∞'
        : (row.difference?.d ?? 0).toPrecision(3);
      diffCell.append(bar, el(doc, 'span', { class: 'diff-text' }, [label]));
    }
    tr.append(diffCell);
    table.append(tr);
  });

  section.append(table);
  return section;
}
