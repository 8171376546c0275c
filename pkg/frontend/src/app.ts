/**
 * Browser wiring: one canvas, a control strip, and the annotation loop of
 * click -> debounced preview -> overlay render -> save/export.
 */

import { ApiClient, PreviewResponse, SeedDiagnostic } from './api.js';
import { compositeOverlay, grayToRgba, statusColor } from './overlay.js';
import { PreviewScheduler } from './preview.js';
import { exportMask, triggerDownload } from './export.js';
import {
  ViewState,
  displayToImage,
  imageToDisplay,
  initialView,
  placeSeed,
  removeSeedNear,
  setZoom,
} from './view.js';

const ZOOM_STEPS = [0.5, 1, 2, 4];

interface PixelBuffers {
  gray: Uint8ClampedArray;
  mask: Uint8Array | null;
}

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

async function pngToGray(bytes: Uint8Array, width: number, height: number): Promise<Uint8ClampedArray> {
  const blob = new Blob([bytes as BlobPart], { type: 'image/png' });
  const bitmap = await createImageBitmap(blob);
  const scratch = document.createElement('canvas');
  scratch.width = width;
  scratch.height = height;
  const ctx = scratch.getContext('2d');
  if (!ctx) throw new Error('no 2d context');
  ctx.drawImage(bitmap, 0, 0);
  const rgba = ctx.getImageData(0, 0, width, height).data;
  const gray = new Uint8ClampedArray(width * height);
  for (let i = 0; i < gray.length; i++) gray[i] = rgba[i * 4]; // grayscale PNG: R = gray
  return gray;
}

function base64ToBytes(b64: string): Uint8Array {
  const raw = atob(b64);
  const out = new Uint8Array(raw.length);
  for (let i = 0; i < raw.length; i++) out[i] = raw.charCodeAt(i);
  return out;
}

export class AnnotatorApp {
  private view: ViewState = initialView();
  private buffers: PixelBuffers = { gray: new Uint8ClampedArray(0), mask: null };
  private project: string | null = null;
  private readonly scheduler: PreviewScheduler;

  constructor(
    private readonly client: ApiClient,
    private readonly canvas: HTMLCanvasElement,
    private readonly status: HTMLElement,
  ) {
    this.scheduler = new PreviewScheduler(
      (req) => this.client.preview(req),
      (resp) => void this.onPreview(resp),
      (err) => this.note(`preview failed: ${String(err)}`),
    );
  }

  private note(text: string): void {
    this.status.textContent = text;
  }

  async openProject(name: string): Promise<void> {
    const existing = await this.client.listProjects();
    if (!existing.some((p) => p.name === name)) {
      await this.client.createProject(name);
    }
    this.project = name;
    this.note(`project ${name} open`);
  }

  async uploadImage(imageId: string, file: File): Promise<void> {
    if (!this.project) throw new Error('open a project first');
    const bytes = new Uint8Array(await file.arrayBuffer());
    const info = await this.client.uploadImage(this.project, imageId, bytes);
    const png = await this.client.fetchImagePng(this.project, imageId);
    this.buffers = { gray: await pngToGray(png, info.width, info.height), mask: null };
    this.view = {
      ...initialView(),
      imageId,
      imageWidth: info.width,
      imageHeight: info.height,
      method: this.view.method,
      overlayOpacity: this.view.overlayOpacity,
    };
    this.render();
    this.note(`${imageId}: ${info.width}x${info.height}`);
  }

  handleClick(x: number, y: number, erase: boolean): void {
    const next = erase ? removeSeedNear(this.view, x, y) : placeSeed(this.view, x, y);
    if (next === this.view) return; // outside the image: no-op
    this.view = next;
    this.render();
    this.requestPreview();
  }

  setMethod(method: 'flood' | 'rg'): void {
    this.view = { ...this.view, method };
    this.requestPreview();
  }

  setOpacity(opacity: number): void {
    this.view = { ...this.view, overlayOpacity: opacity };
    this.render();
  }

  zoomTo(zoom: number): void {
    this.view = setZoom(this.view, zoom);
    this.render();
  }

  requestPreview(): void {
    if (!this.project || !this.view.imageId) return;
    const floodThreshold = byId<HTMLInputElement>('threshold').value;
    this.scheduler.request({
      project: this.project,
      image_id: this.view.imageId,
      seeds: this.view.seeds,
      method: this.view.method,
      flood_params: {
        threshold: floodThreshold === 'auto' ? null : Number(floodThreshold),
        closing_radius: Number(byId<HTMLInputElement>('radius').value),
      },
      rg_params: { stop_threshold: Number(byId<HTMLInputElement>('stop').value) },
    });
  }

  private async onPreview(resp: PreviewResponse): Promise<void> {
    const maskGray = await pngToGray(base64ToBytes(resp.mask_png_base64), resp.width, resp.height);
    const mask = new Uint8Array(maskGray.length);
    for (let i = 0; i < mask.length; i++) mask[i] = maskGray[i] === 0 ? 0 : 1;
    this.buffers = { ...this.buffers, mask };
    this.view = { ...this.view, diagnostics: resp.diagnostics };
    this.render();
    const leaks = resp.diagnostics.filter((d) => d.status === 'suspect_leak').length;
    this.note(
      `${resp.diagnostics.length} seeds` +
        (leaks ? `, ${leaks} suspected leak(s)` : '') +
        (resp.partial ? ', preview truncated by pixel budget' : ''),
    );
  }

  async save(): Promise<void> {
    if (!this.project) return;
    if (this.view.imageId) {
      await this.client.putSeeds(this.project, this.view.imageId, this.view.seeds);
    }
    const result = await this.client.save(this.project);
    this.note(`saved ${result.masks.length} mask(s)`);
  }

  async download(format: 'png' | 'pgm'): Promise<void> {
    if (!this.project || !this.view.imageId) return;
    const exported = await exportMask(this.client, this.project, this.view.imageId, format, this.view.method);
    triggerDownload(document, exported);
  }

  render(): void {
    const { imageWidth: w, imageHeight: h } = this.view;
    const ctx = this.canvas.getContext('2d');
    if (!ctx || w === 0) return;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);

    const rgba = this.buffers.mask
      ? compositeOverlay(this.buffers.gray, this.buffers.mask, w, h, this.view.overlayOpacity)
      : grayToRgba(this.buffers.gray, w, h);
    const frame = document.createElement('canvas');
    frame.width = w;
    frame.height = h;
    const frameCtx = frame.getContext('2d');
    if (frameCtx) {
      const imageData = frameCtx.createImageData(w, h);
      imageData.data.set(rgba);
      frameCtx.putImageData(imageData, 0, 0);
    }

    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(frame, this.view.panX, this.view.panY, w * this.view.zoom, h * this.view.zoom);
    this.drawSeeds(ctx);
  }

  private drawSeeds(ctx: CanvasRenderingContext2D): void {
    const byPos = new Map<string, SeedDiagnostic>();
    for (const d of this.view.diagnostics) byPos.set(`${d.row},${d.col}`, d);
    for (const seed of this.view.seeds) {
      const p = imageToDisplay(this.view, seed.row, seed.col);
      const diag = byPos.get(`${seed.row},${seed.col}`);
      ctx.beginPath();
      ctx.arc(p.x, p.y, 4, 0, Math.PI * 2);
      ctx.fillStyle = diag ? statusColor(diag.status) : '#ffffff';
      ctx.fill();
      ctx.strokeStyle = '#000000';
      ctx.stroke();
    }
  }

  debugHit(x: number, y: number): string {
    const hit = displayToImage(this.view, x, y);
    return hit ? `(${hit.row}, ${hit.col})` : 'outside';
  }
}

export function mount(): void {
  const client = new ApiClient('');
  const canvas = byId<HTMLCanvasElement>('view');
  const app = new AnnotatorApp(client, canvas, byId('status'));

  byId<HTMLButtonElement>('open').addEventListener('click', () => {
    void app.openProject(byId<HTMLInputElement>('project').value.trim());
  });
  byId<HTMLInputElement>('file').addEventListener('change', (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (file) void app.uploadImage(file.name.replace(/\.[^.]*$/, ''), file);
  });
  canvas.addEventListener('click', (e) => {
    const rect = canvas.getBoundingClientRect();
    app.handleClick(e.clientX - rect.left, e.clientY - rect.top, e.shiftKey);
  });
  byId<HTMLSelectElement>('method').addEventListener('change', (e) => {
    app.setMethod((e.target as HTMLSelectElement).value as 'flood' | 'rg');
  });
  byId<HTMLInputElement>('opacity').addEventListener('input', (e) => {
    app.setOpacity(Number((e.target as HTMLInputElement).value));
  });
  for (const z of ZOOM_STEPS) {
    byId<HTMLButtonElement>(`zoom-${z}`).addEventListener('click', () => app.zoomTo(z));
  }
  for (const id of ['threshold', 'radius', 'stop']) {
    byId<HTMLInputElement>(id).addEventListener('input', () => app.requestPreview());
  }
  byId<HTMLButtonElement>('save').addEventListener('click', () => void app.save());
  byId<HTMLButtonElement>('export-png').addEventListener('click', () => void app.download('png'));
  byId<HTMLButtonElement>('export-pgm').addEventListener('click', () => void app.download('pgm'));
}

if (typeof document !== 'undefined' && document.getElementById('view')) {
  mount();
}
