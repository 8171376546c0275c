/**
 * Pure pixel compositing for the preview overlay. No canvas here: these
 * functions take and return plain byte arrays so they are trivially
 * testable, and the app layer just blits the result into an ImageData.
 */

export interface Tint {
  r: number;
  g: number;
  b: number;
}

/** Fill tint for previewed mask pixels. */
export const MASK_TINT: Tint = { r: 64, g: 160, b: 255 };

export const STATUS_COLORS: Record<string, string> = {
  filled_ok: '#2e9e4f',
  seed_on_barrier: '#e0a020',
  suspect_leak: '#d03030',
};

export function statusColor(status: string): string {
  return STATUS_COLORS[status] ?? '#888888';
}

/** Expand an 8-bit grayscale buffer into opaque RGBA. */
export function grayToRgba(gray: Uint8Array | Uint8ClampedArray, width: number, height: number): Uint8ClampedArray {
  if (gray.length !== width * height) {
    throw new Error(`grayscale buffer is ${gray.length} bytes, expected ${width * height}`);
  }
  const out = new Uint8ClampedArray(width * height * 4);
  for (let i = 0; i < gray.length; i++) {
    const v = gray[i];
    const j = i * 4;
    out[j] = v;
    out[j + 1] = v;
    out[j + 2] = v;
    out[j + 3] = 255;
  }
  return out;
}

/**
 * Draw the mask as a translucent tint over the grayscale base. Pixels the
 * mask does not cover stay untouched, and opacity 0 leaves every pixel
 * identical to the plain base render.
 */
export function compositeOverlay(
  gray: Uint8Array | Uint8ClampedArray,
  mask: Uint8Array | Uint8ClampedArray,
  width: number,
  height: number,
  opacity: number,
  tint: Tint = MASK_TINT,
): Uint8ClampedArray {
  if (mask.length !== width * height) {
    throw new Error(`mask buffer is ${mask.length} bytes, expected ${width * height}`);
  }
  if (!(opacity >= 0 && opacity <= 1)) {
    throw new Error(`opacity must lie in [0, 1], got ${opacity}`);
  }
  const out = grayToRgba(gray, width, height);
  for (let i = 0; i < mask.length; i++) {
    if (mask[i] === 0) continue;
    const j = i * 4;
    const keep = 1 - opacity;
    out[j] = Math.round(out[j] * keep + tint.r * opacity);
    out[j + 1] = Math.round(out[j + 1] * keep + tint.g * opacity);
    out[j + 2] = Math.round(out[j + 2] * keep + tint.b * opacity);
  }
  return out;
}
