import { describe, expect, it } from 'vitest';

import {
  ViewState,
  displayToImage,
  imageToDisplay,
  initialView,
  placeSeed,
  removeSeedNear,
  setZoom,
} from '../src/view';

function viewOf(overrides: Partial<ViewState> = {}): ViewState {
  return {
    ...initialView(),
    imageId: 'img',
    imageWidth: 64,
    imageHeight: 48,
    ...overrides,
  };
}

describe('display/image coordinate mapping', () => {
  it('round trips every pixel at zooms 0.5, 1, 2 and 4', () => {
    for (const zoom of [0.5, 1, 2, 4]) {
      for (const [panX, panY] of [
        [0, 0],
        [33, -7],
        [-12.5, 4.25],
      ]) {
        const view = viewOf({ zoom, panX, panY });
        for (let row = 0; row < view.imageHeight; row += 5) {
          for (let col = 0; col < view.imageWidth; col += 5) {
            const p = imageToDisplay(view, row, col);
            expect(displayToImage(view, p.x, p.y)).toEqual({ row, col });
          }
        }
      }
    }
  });

  it('maps a click on image pixel (10, 12) at zoom 1 to seed (10, 12)', () => {
    const view = viewOf({ zoom: 1 });
    expect(displayToImage(view, 12, 10)).toEqual({ row: 10, col: 12 });
    expect(displayToImage(view, 12.9, 10.9)).toEqual({ row: 10, col: 12 });
  });

  it('maps a click at display x=24, y=20 at zoom 2 to seed (10, 12)', () => {
    const view = viewOf({ zoom: 2 });
    expect(displayToImage(view, 24, 20)).toEqual({ row: 10, col: 12 });
  });

  it('maps whole pixel blocks to one seed at zoom 4', () => {
    const view = viewOf({ zoom: 4 });
    for (const dx of [0, 1, 3.99]) {
      for (const dy of [0, 2, 3.99]) {
        expect(displayToImage(view, 8 + dx, 12 + dy)).toEqual({ row: 3, col: 2 });
      }
    }
  });

  it('respects pan offsets', () => {
    const view = viewOf({ zoom: 2, panX: 100, panY: 50 });
    expect(displayToImage(view, 100, 50)).toEqual({ row: 0, col: 0 });
    expect(displayToImage(view, 99, 50)).toBeNull();
  });

  it('returns null outside the image bounds', () => {
    const view = viewOf({ zoom: 1 });
    expect(displayToImage(view, -1, 0)).toBeNull();
    expect(displayToImage(view, 0, -0.01)).toBeNull();
    expect(displayToImage(view, 64, 0)).toBeNull();
    expect(displayToImage(view, 0, 48)).toBeNull();
  });

  it('keeps pixel centers distinct at fractional zoom', () => {
    const view = viewOf({ zoom: 0.5 });
    const seen = new Set<string>();
    for (let row = 0; row < 10; row++) {
      for (let col = 0; col < 10; col++) {
        const p = imageToDisplay(view, row, col);
        const back = displayToImage(view, p.x, p.y);
        expect(back).toEqual({ row, col });
        seen.add(`${p.x},${p.y}`);
      }
    }
    expect(seen.size).toBe(100);
  });
});

describe('seed placement', () => {
  it('appends a seed for an in-bounds click', () => {
    const view = viewOf({ zoom: 2 });
    const next = placeSeed(view, 24, 20);
    expect(next.seeds).toEqual([{ row: 10, col: 12 }]);
    expect(view.seeds).toEqual([]);
  });

  it('returns the identical state object for an out-of-bounds click', () => {
    const view = viewOf({ zoom: 1 });
    expect(placeSeed(view, -5, 10)).toBe(view);
    expect(placeSeed(view, 10, 1e9)).toBe(view);
  });

  it('removes the nearest seed within the pick radius', () => {
    let view = viewOf({ zoom: 4 });
    view = placeSeed(view, 10, 10);
    view = placeSeed(view, 100, 100);
    const after = removeSeedNear(view, 11, 11);
    expect(after.seeds).toEqual(view.seeds.slice(1));
  });

  it('leaves state untouched when no seed is near', () => {
    let view = viewOf({ zoom: 1 });
    view = placeSeed(view, 5, 5);
    expect(removeSeedNear(view, 40, 40)).toBe(view);
  });
});

describe('setZoom', () => {
  it('accepts positive zooms and rejects the rest', () => {
    const view = viewOf();
    expect(setZoom(view, 0.5).zoom).toBe(0.5);
    expect(() => setZoom(view, 0)).toThrow(/positive/);
    expect(() => setZoom(view, -2)).toThrow(/positive/);
  });
});
