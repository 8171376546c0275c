/**
 * Trailing-edge debounce used to keep slider drags and click bursts from
 * flooding the preview endpoint.
 */

export interface Debounced<A extends unknown[]> {
  call: (...args: A) => void;
  /** Run a pending call immediately instead of waiting out the delay. */
  flush: () => void;
  cancel: () => void;
  pending: () => boolean;
}

export const PREVIEW_DEBOUNCE_MS = 150;

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number = PREVIEW_DEBOUNCE_MS,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let lastArgs: A | null = null;

  const fire = () => {
    timer = null;
    if (lastArgs !== null) {
      const args = lastArgs;
      lastArgs = null;
      fn(...args);
    }
  };

  return {
    call: (...args: A) => {
      lastArgs = args;
      if (timer !== null) clearTimeout(timer);
      timer = setTimeout(fire, delayMs);
    },
    flush: () => {
      if (timer !== null) {
        clearTimeout(timer);
        fire();
      }
    },
    cancel: () => {
      if (timer !== null) clearTimeout(timer);
      timer = null;
      lastArgs = null;
    },
    pending: () => timer !== null,
  };
}
