/** Patient area: person info, one consistency graph per foot (single steps in
 * light gray, mean curve emphasized; red = left foot, blue = right foot), and
 * both feet's full signals on a combined time axis.
 */

import { el, svgEl } from '../dom.js';
import type { LoadResponse } from '../types.js';
import { polylinePoints } from '../viewmodel.js';

const FOOT_COLOR: Record<string, string> = { left: '#c0392b', right: '#2a5db0' };

function curvePanel(
  doc: Document,
  title: string,
  curves: number[][],
  meanCurve: number[],
  color: string,
): HTMLElement {
  const width = 300;
  const height = 110;
  const yMax = Math.max(1.2, ...curves.flat(), ...meanCurve) * 1.05;
  const svg = svgEl(doc, 'svg', {
    viewBox: `0 0 ${width} ${height}`,
    class: 'curve-panel',
    width: String(width),
    height: String(height),
  });
  for (const curve of curves) {
    svg.append(
      svgEl(doc, 'polyline', {
        points: polylinePoints(curve, width, height, yMax),
        class: 'step-curve',
      }),
    );
  }
  svg.append(
    svgEl(doc, 'polyline', {
      points: polylinePoints(meanCurve, width, height, yMax),
      class: 'mean-curve',
      style: `stroke:${color}`,
    }),
  );
  const panel = el(doc, 'figure', { class: 'graph-panel' });
  panel.append(el(doc, 'figcaption', {}, [title]), svg);
  return panel;
}

function combinedPanel(doc: Document, data: LoadResponse): HTMLElement {
  const width = 640;
  const height = 110;
  const tMax = Math.max(
    data.graphs.combined.left.times_s.at(-1) ?? 1,
    data.graphs.combined.right.times_s.at(-1) ?? 1,
  );
  const yMax =
    Math.max(
      1.2,
      ...data.graphs.combined.left.values_bw,
      ...data.graphs.combined.right.values_bw,
    ) * 1.05;
  const svg = svgEl(doc, 'svg', {
    viewBox: `0 0 ${width} ${height}`,
    class: 'curve-panel',
    width: String(width),
    height: String(height),
  });
  for (const foot of ['left', 'right'] as const) {
    const series = data.graphs.combined[foot];
    svg.append(
      svgEl(doc, 'polyline', {
        points: polylinePoints(
          series.values_bw,
          width,
          height,
          yMax,
          series.times_s,
          tMax,
        ),
        class: 'combined-curve',
        style: `stroke:${FOOT_COLOR[foot]}`,
      }),
    );
  }
  const panel = el(doc, 'figure', { class: 'graph-panel wide' });
  panel.append(el(doc, 'figcaption', {}, ['Both feet, trial time']), svg);
  return panel;
}

export function renderPatientArea(
  doc: Document,
  data: LoadResponse | null,
): HTMLElement {
  const section = el(doc, 'div', { class: 'patient-area', id: 'patient-area' });
  section.append(el(doc, 'h2', {}, ['Patient']));
  if (!data) {
    section.append(el(doc, 'p', { class: 'hint' }, ['No trial loaded yet.']));
    return section;
  }
  const meta = data.patient;
  const info = el(doc, 'dl', { class: 'person-info', id: 'person-info' });
  const fields: [string, string][] = [
    ['ID', meta.id],
    ['Age', String(meta.age)],
    ['Body mass', `${meta.body_mass_kg} kg`],
    ['Body height', `${meta.body_height_cm} cm`],
    ['Gender', meta.gender],
  ];
  for (const [label, value] of fields) {
    info.append(el(doc, 'dt', {}, [label]), el(doc, 'dd', {}, [value]));
  }
  section.append(info);

  const graphs = el(doc, 'div', { class: 'graphs' });
  graphs.append(
    curvePanel(
      doc,
      'Left foot (% stance)',
      data.graphs.left.step_curves,
      data.graphs.left.mean_curve,
      FOOT_COLOR.left,
    ),
    curvePanel(
      doc,
      'Right foot (% stance)',
      data.graphs.right.step_curves,
      data.graphs.right.mean_curve,
      FOOT_COLOR.right,
    ),
    combinedPanel(doc, data),
  );
  section.append(graphs);
  return section;
}
