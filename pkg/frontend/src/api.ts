/**
 * Typed client for the annotation service.
 *
 * Edits use optimistic concurrency: every mutation quotes the version the
 * client last saw. The server answers 409 when that version is stale and
 * 422 with a typed body when the op itself is invalid, so `postEdit`
 * returns a discriminated result instead of throwing on those.
 */

import type {
  DiagramListEntry,
  DiagramPayload,
  EditOpObj,
  RegistryObj,
  ReportObj,
} from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export type EditResult =
  | { status: 'ok'; version: number; report: ReportObj; payload: DiagramPayload }
  | { status: 'conflict'; currentVersion: number; message: string }
  | { status: 'invalid'; error: string; message: string }
  | { status: 'network'; message: string };

export class ApiClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.base + path);
    if (!response.ok) {
      throw new Error(`GET ${path} -> ${response.status}`);
    }
    return (await response.json()) as T;
  }

  async listDiagrams(): Promise<DiagramListEntry[]> {
    const body = await this.getJson<{ diagrams: DiagramListEntry[] }>('/diagrams');
    return body.diagrams;
  }

  async getDiagram(id: string): Promise<DiagramPayload> {
    return this.getJson<DiagramPayload>(`/diagrams/${encodeURIComponent(id)}`);
  }

  async getValidation(id: string): Promise<{ version: number; report: ReportObj }> {
    return this.getJson(`/diagrams/${encodeURIComponent(id)}/validation`);
  }

  async getRegistry(): Promise<RegistryObj> {
    return this.getJson<RegistryObj>('/registry');
  }

  imageUrl(id: string): string {
    return `${this.base}/diagrams/${encodeURIComponent(id)}/image`;
  }

  async postEdit(id: string, baseVersion: number, op: EditOpObj): Promise<EditResult> {
    let response: Response;
    try {
      response = await this.fetchImpl(
        `${this.base}/diagrams/${encodeURIComponent(id)}/edit`,
        {
          method: 'POST',
          headers: { 'Content-Type': 'application/json' },
          body: JSON.stringify({ baseVersion, op }),
        },
      );
    } catch (err) {
      return { status: 'network', message: String(err) };
    }
    if (response.status === 409) {
      const body = (await response.json()) as { currentVersion: number; message: string };
      return {
        status: 'conflict',
        currentVersion: body.currentVersion,
        message: body.message,
      };
    }
    if (response.status === 422) {
      const body = (await response.json()) as { error: string; message: string };
      return { status: 'invalid', error: body.error, message: body.message };
    }
    if (!response.ok) {
      return { status: 'network', message: `unexpected status ${response.status}` };
    }
    const payload = (await response.json()) as DiagramPayload & { report: ReportObj };
    return {
      status: 'ok',
      version: payload.version,
      report: payload.report,
      payload,
    };
  }

  async postSave(id: string): Promise<{ version: number; path: string }> {
    const response = await this.fetchImpl(
      `${this.base}/diagrams/${encodeURIComponent(id)}/save`,
      { method: 'POST' },
    );
    if (!response.ok) {
      throw new Error(`save failed with ${response.status}`);
    }
    return (await response.json()) as { version: number; path: string };
  }
}
