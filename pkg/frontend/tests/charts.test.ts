import { describe, expect, it } from 'vitest';

import {
  renderBarChart,
  renderCrosstab,
  renderResult,
  renderScalarCard,
  renderSeriesLine,
  renderSummaryCard,
} from '../src/charts.js';
import type { CrosstabResult, DistributionResult, SeriesResult } from '../src/types.js';

const sexDistribution: DistributionResult = {
  shape: 'distribution',
  column: 'sexe',
  entries: [
    { code: 1, label: 'Male', count: 210 },
    { code: 2, label: 'Feminine', count: 110 },
  ],
  total: 320,
};

describe('bar chart', () => {
  it('renders one labeled bar per codebook value', () => {
    const chart = renderBarChart(document, sexDistribution);
    const rows = chart.querySelectorAll('.bar-row');
    expect(rows.length).toBe(2);
    const labels = [...chart.querySelectorAll('.bar-label')].map((n) => n.textContent);
    expect(labels).toEqual(['Male', 'Feminine']);
    const counts = [...chart.querySelectorAll('.bar')].map((n) =>
      n.getAttribute('data-count'),
    );
    expect(counts).toEqual(['210', '110']);
  });

  it('scales bar widths against the maximum count', () => {
    const chart = renderBarChart(document, sexDistribution);
    const bars = [...chart.querySelectorAll('.bar')] as HTMLElement[];
    expect(bars[0].style.width).toBe('100%');
    expect(parseFloat(bars[1].style.width)).toBeCloseTo((110 / 210) * 100, 3);
  });
});

describe('series line', () => {
  const series: SeriesResult = {
    shape: 'series',
    points: [
      { year: 2016, count: 60 },
      { year: 2017, count: 52 },
      { year: 2018, count: 46 },
      { year: 2019, count: 42 },
    ],
    direction: 'decreasing',
    slope: -6,
  };

  it('shows a direction badge and a polyline point per year', () => {
    const chart = renderSeriesLine(document, series);
    const badge = chart.querySelector('.direction-badge');
    expect(badge?.textContent).toBe('decreasing');
    expect(badge?.className).toContain('direction-decreasing');
    const line = chart.querySelector('polyline');
    expect(line?.getAttribute('points')?.split(' ').length).toBe(4);
    const legend = [...chart.querySelectorAll('.series-point')].map((n) => n.textContent);
    expect(legend).toEqual(['2016: 60', '2017: 52', '2018: 46', '2019: 42']);
  });
});

describe('crosstab heat table', () => {
  const crosstab: CrosstabResult = {
    shape: 'crosstab',
    row_column: 'secu',
    col_column: 'grav',
    row_codes: [0, 1],
    col_codes: [1, 2],
    counts: [
      [4, 1],
      [8, 2],
    ],
    row_labels: ['No equipment', 'Belt'],
    col_labels: ['Unharmed', 'Killed'],
  };

  it('renders a shaded cell per code pair', () => {
    const table = renderCrosstab(document, crosstab);
    const cells = [...table.querySelectorAll('.heat-cell')] as HTMLElement[];
    expect(cells.map((c) => c.textContent)).toEqual(['4', '1', '8', '2']);
    // deepest shade on the largest count
    const alphas = cells.map((c) => {
      const m = /rgba\(31, 119, 180, ([\d.]+)\)/.exec(c.style.backgroundColor);
      return m ? parseFloat(m[1]) : 0;
    });
    expect(Math.max(...alphas)).toBeCloseTo(0.85, 5);
    expect(alphas[2]).toBeGreaterThan(alphas[0]);
  });
});

describe('cards and dispatch', () => {
  it('renders scalar and summary text cards', () => {
    const scalar = renderScalarCard(document, {
      shape: 'scalar',
      value: 1,
      label: 'Normal',
      count: 95,
      total: 193,
    });
    expect(scalar.querySelector('.scalar-label')?.textContent).toBe('Normal');
    expect(scalar.querySelector('.scalar-detail')?.textContent).toBe('95 of 193');

    const summary = renderSummaryCard(document, {
      shape: 'summary',
      column: 'an_nais',
      min: 1950,
      max: 2004,
      mean: 1976.24,
      median: 1976,
      std: 15.01,
    });
    expect(summary.textContent).toContain('an_nais');
    expect(summary.textContent).toContain('1950');
  });

  it('dispatches by result shape', () => {
    expect(renderResult(document, sexDistribution).className).toContain('bar-chart');
  });
});
