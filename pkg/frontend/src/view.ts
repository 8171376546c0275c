/**
 * View state and the display/image coordinate mapping.
 *
 * Image pixels map to display space through zoom and pan only; there is no
 * other scaling anywhere, which is what makes seed markers land on their
 * exact pixel at every zoom level.
 */

import type { Method, Seed, SeedDiagnostic } from './api.js';

export interface ViewState {
  imageId: string | null;
  imageWidth: number;
  imageHeight: number;
  zoom: number;
  panX: number;
  panY: number;
  overlayOpacity: number;
  seeds: Seed[];
  method: Method;
  diagnostics: SeedDiagnostic[];
}

export function initialView(): ViewState {
  return {
    imageId: null,
    imageWidth: 0,
    imageHeight: 0,
    zoom: 1,
    panX: 0,
    panY: 0,
    overlayOpacity: 0.4,
    seeds: [],
    method: 'flood',
    diagnostics: [],
  };
}

export interface DisplayPoint {
  x: number;
  y: number;
}

/** Display position of an image pixel's center. */
export function imageToDisplay(view: ViewState, row: number, col: number): DisplayPoint {
  return {
    x: (col + 0.5) * view.zoom + view.panX,
    y: (row + 0.5) * view.zoom + view.panY,
  };
}

/** Image pixel under a display position, or null outside the image. */
export function displayToImage(view: ViewState, x: number, y: number): Seed | null {
  const col = Math.floor((x - view.panX) / view.zoom);
  const row = Math.floor((y - view.panY) / view.zoom);
  if (row < 0 || col < 0 || row >= view.imageHeight || col >= view.imageWidth) {
    return null;
  }
  return { row, col };
}

/**
 * Register a click as a pending seed. Clicks outside the image bounds are
 * ignored and return the state unchanged (same object, so callers can use
 * identity to skip re-rendering).
 */
export function placeSeed(view: ViewState, x: number, y: number): ViewState {
  const hit = displayToImage(view, x, y);
  if (hit === null) return view;
  return { ...view, seeds: [...view.seeds, hit] };
}

/** Drop the pending seed nearest to a display position, within a pixel radius. */
export function removeSeedNear(view: ViewState, x: number, y: number, radiusPx = 8): ViewState {
  let bestIndex = -1;
  let bestDist = radiusPx * radiusPx;
  view.seeds.forEach((seed, index) => {
    const p = imageToDisplay(view, seed.row, seed.col);
    const d = (p.x - x) * (p.x - x) + (p.y - y) * (p.y - y);
    if (d <= bestDist) {
      bestDist = d;
      bestIndex = index;
    }
  });
  if (bestIndex < 0) return view;
  const seeds = view.seeds.slice();
  seeds.splice(bestIndex, 1);
  return { ...view, seeds };
}

export function setZoom(view: ViewState, zoom: number): ViewState {
  if (!(zoom > 0)) throw new Error(`zoom must be positive, got ${zoom}`);
  return { ...view, zoom };
}
