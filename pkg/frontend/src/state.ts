/**
 * Workbench view state.
 *
 * Server authority: the displayed document and version only ever change in
 * `acceptServer`, fed by an acknowledged server response. Drafts live next
 * to the document and never touch it; a 409 keeps the draft for retry and
 * flags that a reload is needed, a 422 surfaces the violation inline.
 */

import type { EditResult } from './api.js';
import type { DiagramPayload, DocumentObj, ReportObj } from './types.js';
import type { Draft } from './drafts.js';

export type LayerTab = 'grouping' | 'connectivity' | 'discourse';

export interface ViewState {
  diagramId: string | null;
  version: number | null;
  document: DocumentObj | null;
  activeTab: LayerTab;
  selection: string[];
  draft: Draft | null;
  report: ReportObj | null;
  inlineError: string | null;
  banner: string | null;
  reloadNeeded: boolean;
}

export function initialState(): ViewState {
  return {
    diagramId: null,
    version: null,
    document: null,
    activeTab: 'grouping',
    selection: [],
    draft: null,
    report: null,
    inlineError: null,
    banner: null,
    reloadNeeded: false,
  };
}

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = initialState();
  private listeners: Listener[] = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  /** The only entry point that changes the displayed graphs. */
  acceptServer(payload: DiagramPayload, report: ReportObj | null = null): void {
    this.set({
      diagramId: payload.id,
      version: payload.version,
      document: payload.document,
      report: report ?? this.state.report,
      inlineError: null,
      banner: null,
      reloadNeeded: false,
    });
  }

  setReport(report: ReportObj): void {
    this.set({ report });
  }

  setTab(tab: LayerTab): void {
    // drafts are tab-specific; switching discards the pending one
    this.set({ activeTab: tab, draft: null, inlineError: null });
  }

  toggleSelect(ref: string): void {
    const selection = this.state.selection.includes(ref)
      ? this.state.selection.filter((r) => r !== ref)
      : [...this.state.selection, ref];
    this.set({ selection });
  }

  clearSelection(): void {
    this.set({ selection: [] });
  }

  setDraft(draft: Draft | null): void {
    this.set({ draft, inlineError: null });
  }

  setBanner(message: string | null): void {
    this.set({ banner: message });
  }

  /** Fold an edit response into the state per the retry/violation rules. */
  applyEditResult(result: EditResult): void {
    switch (result.status) {
      case 'ok':
        this.acceptServer(result.payload, result.report);
        this.set({ draft: null });
        break;
      case 'conflict':
        // keep the draft for retry; displayed graphs stay as-is until the
        // caller reloads the acknowledged state
        this.set({
          reloadNeeded: true,
          banner: `someone moved first: server is at version ${result.currentVersion}; reloading`,
        });
        break;
      case 'invalid':
        this.set({ inlineError: `${result.error}: ${result.message}` });
        break;
      case 'network':
        this.set({ banner: `network failure: ${result.message}` });
        break;
    }
  }
}
