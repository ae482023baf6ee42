/** Pure helpers turning confirmed API payloads into render-ready values.
 *
 * Nothing in here recomputes scores or differences; it only maps already
 * computed numbers to pixels, fractions, and sort orders.
 */

import type {
  ItbpRowWire,
  MatchResultWire,
  ParamStateWire,
  RangeWire,
  StatsWire,
} from './types.js';

/** Bar width fractions, proportional to score / max score in the view. */
export function matchBarFractions(results: MatchResultWire[]): number[] {
  const top = Math.max(0, ...results.map((r) => r.score));
  if (top <= 0) return results.map(() => 0);
  return results.map((r) => r.score / top);
}

export function glyphClass(state: ParamStateWire): string {
  switch (state) {
    case 'in_range':
      return 'glyph glyph-in';
    case 'out_of_range':
      return 'glyph glyph-out';
    default:
      return 'glyph glyph-none';
  }
}

export interface Scale {
  min: number;
  max: number;
  width: number;
  toPx(value: number): number;
  fromPx(px: number): number;
}

export function makeScale(min: number, max: number, width: number): Scale {
  const span = max - min || 1;
  return {
    min,
    max,
    width,
    toPx: (value: number) => ((value - min) / span) * width,
    fromPx: (px: number) => min + (Math.min(Math.max(px, 0), width) / width) * span,
  };
}

/** Common value domain of one explorer row, padded so markers stay visible. */
export function rowDomain(
  row: ItbpRowWire,
  range: RangeWire | undefined,
): [number, number] | null {
  const candidates: number[] = [];
  for (const stats of [row.norm, row.selected]) {
    if (stats.min !== null) candidates.push(stats.min);
    if (stats.max !== null) candidates.push(stats.max);
  }
  if (row.patient_left !== null) candidates.push(row.patient_left);
  if (row.patient_right !== null) candidates.push(row.patient_right);
  if (range && range.min !== null && range.max !== null) {
    candidates.push(range.min, range.max);
  }
  if (candidates.length === 0) return null;
  const lo = Math.min(...candidates);
  const hi = Math.max(...candidates);
  const pad = (hi - lo || Math.abs(lo) || 1) * 0.08;
  return [lo - pad, hi + pad];
}

export interface BoxGeometry {
  whiskerLo: number;
  whiskerHi: number;
  boxLo: number;
  boxHi: number;
  median: number;
}

export function boxGeometry(stats: StatsWire, scale: Scale): BoxGeometry | null {
  if (
    stats.n === 0 ||
    stats.min === null ||
    stats.max === null ||
    stats.q1 === null ||
    stats.q3 === null ||
    stats.median === null
  ) {
    return null;
  }
  return {
    whiskerLo: scale.toPx(stats.min),
    whiskerHi: scale.toPx(stats.max),
    boxLo: scale.toPx(stats.q1),
    boxHi: scale.toPx(stats.q3),
    median: scale.toPx(stats.median),
  };
}

/** Hatching positions of the raw member values on the slider strip. */
export function hatchPositions(rawValues: number[], scale: Scale): number[] {
  return rawValues.map((v) => scale.toPx(v));
}

/** Difference bar fractions; degenerate (infinite) rows fill the bar. */
export function differenceFractions(rows: ItbpRowWire[]): (number | null)[] {
  let top = 0;
  for (const row of rows) {
    if (row.difference && row.difference.d !== null) {
      top = Math.max(top, row.difference.d);
    }
  }
  return rows.map((row) => {
    if (!row.difference) return null;
    if (row.difference.degenerate) return 1;
    if (row.difference.d === null) return null;
    return top > 0 ? row.difference.d / top : 0;
  });
}

export type SortDirection = 1 | -1;

export function sortMatchResults(
  results: MatchResultWire[],
  key: 'name' | 'score',
  direction: SortDirection,
): MatchResultWire[] {
  const sorted = [...results];
  sorted.sort((a, b) => {
    const cmp =
      key === 'name'
        ? a.category_name.localeCompare(b.category_name)
        : a.score - b.score;
    return cmp * direction;
  });
  return sorted;
}

export function sortExplorerRows(
  rows: ItbpRowWire[],
  key: 'id' | 'name' | 'difference',
  direction: SortDirection,
): ItbpRowWire[] {
  const rank = (row: ItbpRowWire): number => {
    if (!row.difference) return -1;
    if (row.difference.degenerate) return Number.POSITIVE_INFINITY;
    return row.difference.d ?? -1;
  };
  const sorted = [...rows];
  sorted.sort((a, b) => {
    let cmp: number;
    if (key === 'id') cmp = a.stp_id - b.stp_id;
    else if (key === 'name')
      cmp = `${a.name} ${a.foot}`.localeCompare(`${b.name} ${b.foot}`);
    else cmp = rank(a) - rank(b);
    return cmp * direction;
  });
  return sorted;
}

export function formatValue(value: number | null, unit: string): string {
  if (value === null) return '–';
  const text = Math.abs(value) >= 100 ? value.toFixed(1) : value.toPrecision(4);
  return `${text} ${unit}`;
}

export function formatScore(score: number): string {
  if (score === 0) return '0';
  if (score >= 1000 || score < 0.01) return score.toExponential(2);
  return score.toPrecision(4);
}

/** Polyline points attribute for an SVG curve panel. */
export function polylinePoints(
  values: number[],
  width: number,
  height: number,
  yMax: number,
  xs?: number[],
  xMax?: number,
): string {
  const n = values.length;
  if (n === 0) return '';
  const spanX = xs && xMax ? xMax : Math.max(n - 1, 1);
  return values
    .map((v, i) => {
      const xv = xs && xMax ? xs[i] : i;
      const x = (xv / spanX) * width;
      const y = height - (Math.min(v, yMax) / yMax) * height;
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(' ');
}
