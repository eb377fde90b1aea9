import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import type { EditOpObj } from '../src/types.js';

const OP: EditOpObj = {
  opId: 'ui1',
  kind: 'tagMacroGroup',
  timestamp: '',
  params: { node: 'G12', tag: 'x' },
};

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), { status });
}

describe('ApiClient.postEdit', () => {
  it('discriminates an accepted edit', async () => {
    const client = new ApiClient('', async () =>
      jsonResponse(200, {
        id: '4210',
        version: 2,
        report: { passed: true, findings: [] },
        document: {},
      }),
    );
    const result = await client.postEdit('4210', 1, OP);
    expect(result.status).toBe('ok');
    if (result.status === 'ok') {
      expect(result.version).toBe(2);
      expect(result.report.passed).toBe(true);
    }
  });

  it('discriminates a version conflict', async () => {
    const client = new ApiClient('', async () =>
      jsonResponse(409, { error: 'VersionConflict', message: 'stale', currentVersion: 5 }),
    );
    const result = await client.postEdit('4210', 1, OP);
    expect(result).toMatchObject({ status: 'conflict', currentVersion: 5 });
  });

  it('discriminates a typed invalid-op body', async () => {
    const client = new ApiClient('', async () =>
      jsonResponse(422, { error: 'NuclearityViolation', message: "disjunction cannot take roles ['n']" }),
    );
    const result = await client.postEdit('4210', 1, OP);
    expect(result).toMatchObject({ status: 'invalid', error: 'NuclearityViolation' });
  });

  it('maps thrown fetch errors to a network result', async () => {
    const client = new ApiClient('', async () => {
      throw new Error('connection refused');
    });
    const result = await client.postEdit('4210', 1, OP);
    expect(result.status).toBe('network');
  });

  it('sends the base version it was given', async () => {
    let seen: unknown = null;
    const client = new ApiClient('', async (_url, init) => {
      seen = JSON.parse(String(init?.body));
      return jsonResponse(200, { id: 'x', version: 8, report: { passed: true, findings: [] }, document: {} });
    });
    await client.postEdit('4210', 7, OP);
    expect(seen).toMatchObject({ baseVersion: 7, op: { opId: 'ui1' } });
  });
});
