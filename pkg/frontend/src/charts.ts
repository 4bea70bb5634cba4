/** Result renderers: every view is built purely from an API result payload.
 * No statistics are computed here; counts and labels come from the engine. */

import type {
  CrosstabResult,
  DistributionResult,
  PreviewResult,
  ResultPayload,
  ScalarResult,
  SeriesResult,
  SummaryResult,
} from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Horizontal bar chart; one labeled row per codebook value. */
export function renderBarChart(doc: Document, result: DistributionResult): HTMLElement {
  const root = el(doc, 'div', 'chart bar-chart');
  root.setAttribute('data-column', result.column);
  const max = Math.max(...result.entries.map((e) => e.count), 1);
  for (const entry of result.entries) {
    const row = el(doc, 'div', 'bar-row');
    row.appendChild(el(doc, 'span', 'bar-label', entry.label));
    const track = el(doc, 'div', 'bar-track');
    const bar = el(doc, 'div', 'bar');
    bar.style.width = `${(100 * entry.count) / max}%`;
    bar.setAttribute('data-count', String(entry.count));
    track.appendChild(bar);
    row.appendChild(track);
    row.appendChild(el(doc, 'span', 'bar-count', String(entry.count)));
    root.appendChild(row);
  }
  return root;
}

/** Line chart with a direction badge. */
export function renderSeriesLine(doc: Document, result: SeriesResult): HTMLElement {
  const root = el(doc, 'div', 'chart series-chart');
  const badge = el(doc, 'span', `direction-badge direction-${result.direction}`, result.direction);
  root.appendChild(badge);

  const width = 320;
  const height = 120;
  const pad = 10;
  const svg = doc.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('viewBox', `0 0 ${width} ${height}`);
  svg.setAttribute('class', 'series-svg');

  const points = result.points;
  if (points.length > 0) {
    const years = points.map((p) => p.year);
    const counts = points.map((p) => p.count);
    const minYear = Math.min(...years);
    const maxYear = Math.max(...years);
    const maxCount = Math.max(...counts, 1);
    const x = (year: number) =>
      maxYear === minYear
        ? width / 2
        : pad + ((width - 2 * pad) * (year - minYear)) / (maxYear - minYear);
    const y = (count: number) => height - pad - ((height - 2 * pad) * count) / maxCount;
    const line = doc.createElementNS(SVG_NS, 'polyline');
    line.setAttribute('points', points.map((p) => `${x(p.year)},${y(p.count)}`).join(' '));
    line.setAttribute('class', 'series-line');
    line.setAttribute('fill', 'none');
    svg.appendChild(line);
  }
  root.appendChild(svg as unknown as HTMLElement);

  const legend = el(doc, 'div', 'series-legend');
  for (const p of points) {
    legend.appendChild(el(doc, 'span', 'series-point', `${p.year}: ${p.count}`));
  }
  root.appendChild(legend);
  return root;
}

/** Contingency table with count-shaded cells. */
export function renderCrosstab(doc: Document, result: CrosstabResult): HTMLElement {
  const table = el(doc, 'table', 'chart crosstab');
  const maxCount = Math.max(...result.counts.flat(), 1);

  const head = el(doc, 'tr');
  head.appendChild(el(doc, 'th', undefined, `${result.row_column} \\ ${result.col_column}`));
  for (const label of result.col_labels) {
    head.appendChild(el(doc, 'th', undefined, label));
  }
  table.appendChild(head);

  result.row_labels.forEach((rowLabel, i) => {
    const tr = el(doc, 'tr');
    tr.appendChild(el(doc, 'th', undefined, rowLabel));
    result.counts[i].forEach((count) => {
      const td = el(doc, 'td', 'heat-cell', String(count));
      td.style.backgroundColor = `rgba(31, 119, 180, ${(0.85 * count) / maxCount})`;
      tr.appendChild(td);
    });
    table.appendChild(tr);
  });
  return table;
}

export function renderScalarCard(doc: Document, result: ScalarResult): HTMLElement {
  const card = el(doc, 'div', 'chart scalar-card');
  card.appendChild(el(doc, 'div', 'scalar-label', result.label));
  if (result.count !== null && result.total !== null) {
    card.appendChild(el(doc, 'div', 'scalar-detail', `${result.count} of ${result.total}`));
  }
  return card;
}

export function renderSummaryCard(doc: Document, result: SummaryResult): HTMLElement {
  const card = el(doc, 'div', 'chart summary-card');
  card.appendChild(el(doc, 'div', 'summary-title', result.column));
  const rows: [string, number][] = [
    ['min', result.min],
    ['max', result.max],
    ['mean', result.mean],
    ['median', result.median],
    ['std', result.std],
  ];
  for (const [name, value] of rows) {
    const row = el(doc, 'div', 'summary-row');
    row.appendChild(el(doc, 'span', 'summary-name', name));
    row.appendChild(el(doc, 'span', 'summary-value', String(value)));
    card.appendChild(row);
  }
  return card;
}

export function renderPreviewTable(doc: Document, result: PreviewResult): HTMLElement {
  const table = el(doc, 'table', 'chart preview-table');
  const head = el(doc, 'tr');
  for (const column of result.columns) {
    head.appendChild(el(doc, 'th', undefined, column));
  }
  table.appendChild(head);
  for (const row of result.rows) {
    const tr = el(doc, 'tr');
    for (const cell of row) {
      tr.appendChild(el(doc, 'td', undefined, cell === null ? '' : String(cell)));
    }
    table.appendChild(tr);
  }
  return table;
}

/** Dispatch a result payload to its renderer. */
export function renderResult(doc: Document, result: ResultPayload): HTMLElement {
  switch (result.shape) {
    case 'distribution':
      return renderBarChart(doc, result);
    case 'series':
      return renderSeriesLine(doc, result);
    case 'crosstab':
      return renderCrosstab(doc, result);
    case 'scalar':
      return renderScalarCard(doc, result);
    case 'summary':
      return renderSummaryCard(doc, result);
    case 'preview':
      return renderPreviewTable(doc, result);
  }
}
