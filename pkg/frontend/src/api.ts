/**
 * Typed client for the annotation service. Every call maps 1:1 onto one of
 * the service's HTTP endpoints; nothing else in the UI talks to the network.
 */

export interface Seed {
  row: number;
  col: number;
}

export interface FloodParams {
  threshold: number | null;
  closing_radius: number;
}

export interface RgParams {
  stop_threshold: number;
}

export type Method = 'flood' | 'rg';

export interface ProjectInfo {
  name: string;
  image_count: number;
  dirty: boolean;
}

export interface ImageInfo {
  image_id: string;
  path: string;
  height: number;
  width: number;
}

export interface SeedDiagnostic {
  row: number;
  col: number;
  status: string;
  region_size: number;
}

export interface PreviewRequest {
  project: string;
  image_id: string;
  seeds: Seed[];
  method: Method;
  flood_params?: FloodParams;
  rg_params?: RgParams;
  leak_ratio?: number;
  max_pixels?: number;
}

export interface PreviewResponse {
  mask_png_base64: string;
  diagnostics: SeedDiagnostic[];
  partial: boolean;
  height: number;
  width: number;
}

export interface SaveResponse {
  saved: boolean;
  document: string;
  masks: string[];
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function ensureOk(response: Response): Promise<Response> {
  if (response.ok) return response;
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: string };
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await ensureOk(await this.fetchFn(this.baseUrl + path));
    return (await response.json()) as T;
  }

  private async sendJson<T>(method: string, path: string, body: unknown): Promise<T> {
    const response = await ensureOk(
      await this.fetchFn(this.baseUrl + path, {
        method,
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(body),
      }),
    );
    return (await response.json()) as T;
  }

  listProjects(): Promise<ProjectInfo[]> {
    return this.getJson('/projects');
  }

  createProject(name: string): Promise<ProjectInfo> {
    return this.sendJson('POST', '/projects', { name });
  }

  async uploadImage(project: string, imageId: string, bytes: Uint8Array): Promise<ImageInfo> {
    const response = await ensureOk(
      await this.fetchFn(`${this.baseUrl}/image/${encodeURIComponent(imageId)}?project=${encodeURIComponent(project)}`, {
        method: 'PUT',
        headers: { 'content-type': 'application/octet-stream' },
        body: bytes as BodyInit,
      }),
    );
    return (await response.json()) as ImageInfo;
  }

  /** Raw PNG bytes of the source image, exactly as the service encodes them. */
  async fetchImagePng(project: string, imageId: string): Promise<Uint8Array> {
    const response = await ensureOk(
      await this.fetchFn(`${this.baseUrl}/image/${encodeURIComponent(imageId)}?project=${encodeURIComponent(project)}`),
    );
    return new Uint8Array(await response.arrayBuffer());
  }

  putSeeds(project: string, imageId: string, seeds: Seed[]): Promise<unknown> {
    return this.sendJson('PUT', '/seeds', { project, image_id: imageId, seeds });
  }

  preview(request: PreviewRequest): Promise<PreviewResponse> {
    return this.sendJson('POST', '/preview', request);
  }

  save(project: string): Promise<SaveResponse> {
    return this.sendJson('POST', '/save', { project });
  }

  /**
   * Mask bytes straight from the service, untouched: the UI never decodes
   * and re-encodes an exported mask, so its download is byte-equal to what
   * the service serves.
   */
  async exportMask(
    project: string,
    imageId: string,
    format: 'png' | 'pgm',
    method?: Method,
  ): Promise<Uint8Array> {
    const query = new URLSearchParams({ project });
    if (method) query.set('method', method);
    const response = await ensureOk(
      await this.fetchFn(
        `${this.baseUrl}/export/${encodeURIComponent(imageId)}.${format}?${query.toString()}`,
      ),
    );
    return new Uint8Array(await response.arrayBuffer());
  }
}
