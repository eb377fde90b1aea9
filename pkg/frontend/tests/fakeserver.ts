/**
 * In-memory stand-in for the annotation service, honouring its wire
 * contract (versioned reads, 409 on stale baseVersion, 422 with a typed
 * body on invalid ops) over the real bundled fixture document.
 */

import { readFileSync } from 'node:fs';

import type { FetchLike } from '../src/api.js';
import type { DocumentObj, EditOpObj, ReportObj } from '../src/types.js';

const FIXTURE_URL = new URL(
  '../../src/diaganno/fixtures/4210_decomposed.json',
  import.meta.url,
);

export function loadFixtureDocument(): DocumentObj {
  return JSON.parse(readFileSync(FIXTURE_URL, 'utf-8')) as DocumentObj;
}

const MULTINUCLEAR = new Set(['disjunction', 'cyclic sequence']);
const MONONUCLEAR = new Set(['identification', 'elaboration', 'background']);

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

export class FakeServer {
  doc: DocumentObj;
  version = 1;
  saves = 0;

  constructor(public readonly id = '4210') {
    this.doc = loadFixtureDocument();
  }

  report(): ReportObj {
    return { passed: true, findings: [] };
  }

  private applyOp(op: EditOpObj): { error: string; message: string } | null {
    const params = op.params as Record<string, any>;
    switch (op.kind) {
      case 'tagMacroGroup': {
        const node = this.doc.grouping.nodes.find((n) => n.id === params.node);
        if (!node) return { error: 'DanglingRef', message: `no node ${params.node}` };
        node.macroGroup = params.tag ?? undefined;
        return null;
      }
      case 'addGroup': {
        const members: string[] = params.members;
        if (members.length < 2) {
          return { error: 'TooFewParts', message: 'a group needs at least 2 members' };
        }
        this.doc.grouping.nodes.push({ id: params.group, kind: 'group' });
        this.doc.grouping.edges = this.doc.grouping.edges.filter(
          ([, child]) => !members.includes(child),
        );
        if (params.parent) {
          this.doc.grouping.edges.push([params.parent, params.group]);
        }
        for (const member of members) {
          this.doc.grouping.edges.push([params.group, member]);
        }
        return null;
      }
      case 'addRelation': {
        const children: { ref: string; role: 'n' | 's'; occurrence: string | null }[] =
          params.children;
        const roles = children.map((c) => c.role);
        const nuclei = roles.filter((r) => r === 'n').length;
        const satellites = roles.length - nuclei;
        if (MULTINUCLEAR.has(params.type) && (nuclei < 2 || satellites > 0)) {
          return {
            error: 'NuclearityViolation',
            message: `${params.type} cannot take roles ${JSON.stringify(roles)}`,
          };
        }
        if (MONONUCLEAR.has(params.type) && (nuclei !== 1 || satellites !== 1)) {
          return {
            error: 'NuclearityViolation',
            message: `${params.type} cannot take roles ${JSON.stringify(roles)}`,
          };
        }
        this.doc.discourse.relations.push({ id: params.relation, type: params.type });
        for (const child of children) {
          if (child.occurrence !== null) {
            this.doc.discourse.occurrences.push({ id: child.occurrence, target: child.ref });
            this.doc.discourse.edges.push({
              parent: params.relation,
              child: child.occurrence,
              role: child.role,
            });
          } else {
            this.doc.discourse.edges.push({
              parent: params.relation,
              child: child.ref,
              role: child.role,
            });
          }
        }
        return null;
      }
      default:
        return { error: 'EditError', message: `unsupported op kind ${op.kind}` };
    }
  }

  fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? 'GET';
    const path = url.replace(/^https?:\/\/[^/]+/, '');
    if (method === 'GET' && path === '/diagrams') {
      return json(200, {
        diagrams: [
          { id: this.id, diagramId: this.id, version: this.version, dirty: false },
        ],
      });
    }
    if (method === 'GET' && path === `/diagrams/${this.id}`) {
      return json(200, { id: this.id, version: this.version, document: this.doc });
    }
    if (method === 'GET' && path === `/diagrams/${this.id}/validation`) {
      return json(200, { id: this.id, version: this.version, report: this.report() });
    }
    if (method === 'GET' && path === '/registry') {
      return json(200, {
        ai2d: [],
        rst: [
          { name: 'identification', nuclearity: 'mononuclear', nucleusGloss: '', satelliteGloss: '' },
          { name: 'joint', nuclearity: 'unconstrained', nucleusGloss: '', satelliteGloss: '' },
          { name: 'disjunction', nuclearity: 'multinuclear', nucleusGloss: '', satelliteGloss: null },
        ],
      });
    }
    if (method === 'POST' && path === `/diagrams/${this.id}/edit`) {
      const body = JSON.parse(String(init?.body)) as { baseVersion: number; op: EditOpObj };
      if (body.baseVersion !== this.version) {
        return json(409, {
          error: 'VersionConflict',
          message: `stale version; current is ${this.version}`,
          currentVersion: this.version,
        });
      }
      const failure = this.applyOp(body.op);
      if (failure) {
        return json(422, failure);
      }
      this.doc.editLog.push(body.op);
      this.version += 1;
      return json(200, {
        id: this.id,
        version: this.version,
        report: this.report(),
        document: this.doc,
      });
    }
    if (method === 'POST' && path === `/diagrams/${this.id}/save`) {
      this.saves += 1;
      return json(200, { id: this.id, version: this.version, path: '/tmp/fake.json' });
    }
    return json(404, { error: 'UnknownDiagram' });
  };
}
