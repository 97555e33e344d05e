import { describe, expect, it } from 'vitest';

import { sparklinePoints } from '../src/sparkline.js';

describe('sparklinePoints', () => {
  it('is empty for no values', () => {
    expect(sparklinePoints([], 100, 50)).toBe('');
  });

  it('centers a single value horizontally', () => {
    expect(sparklinePoints([1.0], 104, 54)).toBe('52,52');
  });

  it('maps low to the bottom and high to the top', () => {
    expect(sparklinePoints([0, 1], 104, 54)).toBe('2,52 102,2');
  });

  it('keeps a flat series on the baseline', () => {
    const points = sparklinePoints([2, 2, 2], 104, 54).split(' ');
    expect(points).toHaveLength(3);
    for (const point of points) {
      expect(point.endsWith(',52')).toBe(true);
    }
  });

  it('produces strictly decreasing y for increasing values', () => {
    const ys = sparklinePoints([0, 1, 2, 3], 104, 54)
      .split(' ')
      .map((p) => Number(p.split(',')[1]));
    for (let i = 1; i < ys.length; i += 1) {
      expect(ys[i]).toBeLessThan(ys[i - 1]);
    }
  });
});
