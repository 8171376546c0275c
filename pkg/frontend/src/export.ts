/**
 * Mask export. The bytes travel straight from the service response into the
 * download; the UI never re-encodes, so the saved file is byte-equal to the
 * service's own export.
 */

import type { ApiClient, Method } from './api.js';

export interface ExportedMask {
  filename: string;
  bytes: Uint8Array;
  mediaType: string;
}

const MEDIA: Record<'png' | 'pgm', string> = {
  png: 'image/png',
  pgm: 'image/x-portable-graymap',
};

export async function exportMask(
  client: ApiClient,
  project: string,
  imageId: string,
  format: 'png' | 'pgm',
  method?: Method,
): Promise<ExportedMask> {
  const bytes = await client.exportMask(project, imageId, format, method);
  return {
    filename: `${imageId}.${format}`,
    bytes,
    mediaType: MEDIA[format],
  };
}

/** Hand the exported bytes to the browser as a file download. */
export function triggerDownload(doc: Document, exported: ExportedMask): void {
  const blob = new Blob([exported.bytes as BlobPart], { type: exported.mediaType });
  const url = URL.createObjectURL(blob);
  const anchor = doc.createElement('a');
  anchor.href = url;
  anchor.download = exported.filename;
  doc.body.appendChild(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}
