/**
 * Debounced, sequence-numbered preview requests.
 *
 * Only the newest request's response may be rendered: every request gets an
 * increasing sequence number, and a response is dropped whenever a newer
 * request has been issued in the meantime, no matter the arrival order.
 */

import type { PreviewRequest, PreviewResponse } from './api.js';
import { debounce, Debounced, PREVIEW_DEBOUNCE_MS } from './debounce.js';

export type SendPreview = (request: PreviewRequest) => Promise<PreviewResponse>;
export type RenderPreview = (response: PreviewResponse) => void;
export type ReportError = (error: unknown) => void;

export class PreviewScheduler {
  private sequence = 0;
  private readonly debounced: Debounced<[PreviewRequest]>;

  constructor(
    private readonly send: SendPreview,
    private readonly render: RenderPreview,
    private readonly onError: ReportError = () => {},
    delayMs: number = PREVIEW_DEBOUNCE_MS,
  ) {
    this.debounced = debounce((request: PreviewRequest) => this.fire(request), delayMs);
  }

  /** Ask for a preview soon; bursts within the debounce window coalesce. */
  request(request: PreviewRequest): void {
    this.debounced.call(request);
  }

  /** Skip the debounce delay for the pending request, if any. */
  flush(): void {
    this.debounced.flush();
  }

  issuedCount(): number {
    return this.sequence;
  }

  private fire(request: PreviewRequest): void {
    const id = ++this.sequence;
    this.send(request).then(
      (response) => {
        if (id === this.sequence) this.render(response);
        // else: superseded while in flight; a stale mask must never paint
      },
      (error) => {
        if (id === this.sequence) this.onError(error);
      },
    );
  }
}
