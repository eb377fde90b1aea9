import { describe, expect, it } from 'vitest';

import { Store } from '../src/state.js';
import type { DiagramPayload, ReportObj } from '../src/types.js';
import { loadFixtureDocument } from './fakeserver.js';

const CLEAN: ReportObj = { passed: true, findings: [] };

function payload(version: number): DiagramPayload {
  return { id: '4210', version, document: loadFixtureDocument() };
}

describe('server authority', () => {
  it('only acknowledged responses change the displayed document', () => {
    const store = new Store();
    expect(store.get().document).toBeNull();
    store.acceptServer(payload(1), CLEAN);
    expect(store.get().version).toBe(1);

    const shown = store.get().document;
    // composing and failing a draft must not touch the displayed graphs
    store.setDraft({ kind: 'tag', node: 'G12', tag: 'x' });
    store.applyEditResult({ status: 'invalid', error: 'E', message: 'nope' });
    expect(store.get().document).toBe(shown);
    expect(store.get().version).toBe(1);
  });

  it('version always matches the last server response', () => {
    const store = new Store();
    store.acceptServer(payload(1), CLEAN);
    store.applyEditResult({
      status: 'ok',
      version: 2,
      report: CLEAN,
      payload: payload(2),
    });
    expect(store.get().version).toBe(2);
  });
});

describe('edit result handling', () => {
  it('conflict preserves the draft and requests a reload', () => {
    const store = new Store();
    store.acceptServer(payload(1), CLEAN);
    const draft = { kind: 'tag', node: 'G12', tag: 'x' } as const;
    store.setDraft(draft);
    store.applyEditResult({ status: 'conflict', currentVersion: 3, message: 'stale' });
    expect(store.get().draft).toEqual(draft);
    expect(store.get().reloadNeeded).toBe(true);
    expect(store.get().banner).toContain('version 3');
    // the reload wipes the flag but keeps the draft for retry
    store.acceptServer(payload(3), CLEAN);
    expect(store.get().reloadNeeded).toBe(false);
    expect(store.get().draft).toEqual(draft);
  });

  it('invalid op surfaces inline and keeps everything else', () => {
    const store = new Store();
    store.acceptServer(payload(1), CLEAN);
    store.applyEditResult({
      status: 'invalid',
      error: 'NuclearityViolation',
      message: "disjunction cannot take roles ['n']",
    });
    expect(store.get().inlineError).toContain('NuclearityViolation');
    expect(store.get().version).toBe(1);
  });

  it('accepted edit clears the draft and adopts the new report', () => {
    const store = new Store();
    store.acceptServer(payload(1), CLEAN);
    store.setDraft({ kind: 'tag', node: 'G12', tag: 'x' });
    const report: ReportObj = {
      passed: false,
      findings: [{ code: 'UNCOVERED_ELEMENT', severity: 'warning', refs: ['T1'], message: 'm' }],
    };
    store.applyEditResult({ status: 'ok', version: 2, report, payload: payload(2) });
    expect(store.get().draft).toBeNull();
    expect(store.get().report).toEqual(report);
  });

  it('network failures raise the banner only', () => {
    const store = new Store();
    store.acceptServer(payload(1), CLEAN);
    store.applyEditResult({ status: 'network', message: 'connection refused' });
    expect(store.get().banner).toContain('network failure');
    expect(store.get().version).toBe(1);
  });
});

describe('tabs and selection', () => {
  it('switching tabs discards the tab-specific draft', () => {
    const store = new Store();
    store.setDraft({ kind: 'tag', node: 'G12', tag: 'x' });
    store.setTab('discourse');
    expect(store.get().draft).toBeNull();
    expect(store.get().activeTab).toBe('discourse');
  });

  it('toggleSelect adds and removes refs', () => {
    const store = new Store();
    store.toggleSelect('T1');
    store.toggleSelect('T2');
    store.toggleSelect('T1');
    expect(store.get().selection).toEqual(['T2']);
  });
});
