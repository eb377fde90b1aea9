/** Wire types mirroring the annotation service's JSON bodies. */

export type ElementKind = 'text' | 'blob' | 'arrow' | 'arrowhead';

export interface ShapeObj {
  rect?: number[];
  polygon?: number[][];
}

export interface ElementObj {
  id: string;
  kind: ElementKind;
  shape: ShapeObj;
  text?: string;
  provenance?: { parent: string; ordinal: number };
}

export type GroupingNodeKind = 'diagramRoot' | 'group' | 'leaf';

export interface GroupingNodeObj {
  id: string;
  kind: GroupingNodeKind;
  element?: string;
  macroGroup?: string;
}

export interface GroupingObj {
  nodes: GroupingNodeObj[];
  edges: [string, string][];
}

export interface ConnectivityEdgeObj {
  id: string;
  source: string;
  target: string | null;
  connector: string;
  directed: boolean;
  openEnded: boolean;
}

export interface DiscourseRelationObj {
  id: string;
  type: string;
}

export interface DiscourseOccurrenceObj {
  id: string;
  target: string;
}

export interface DiscourseEdgeObj {
  parent: string;
  child: string;
  role: 'n' | 's';
}

export interface DiscourseObj {
  relations: DiscourseRelationObj[];
  occurrences: DiscourseOccurrenceObj[];
  edges: DiscourseEdgeObj[];
}

export interface DocumentObj {
  format: string;
  version: number;
  diagramId: string;
  imageRef: string | null;
  inventory: { elements: ElementObj[]; retired: ElementObj[] };
  grouping: GroupingObj;
  connectivity: { edges: ConnectivityEdgeObj[] };
  discourse: DiscourseObj;
  dpg: unknown;
  editLog: EditOpObj[];
  base: unknown;
}

export interface EditOpObj {
  opId: string;
  kind: string;
  timestamp: string;
  params: Record<string, unknown>;
}

export interface FindingObj {
  code: string;
  severity: 'error' | 'warning';
  refs: string[];
  message: string;
}

export interface ReportObj {
  passed: boolean;
  findings: FindingObj[];
}

export interface DiagramListEntry {
  id: string;
  diagramId: string;
  version: number;
  dirty: boolean;
}

export interface DiagramPayload {
  id: string;
  version: number;
  document: DocumentObj;
}

export interface RegistryObj {
  ai2d: { name: string; description: string }[];
  rst: {
    name: string;
    nuclearity: 'mononuclear' | 'multinuclear' | 'unconstrained';
    nucleusGloss: string;
    satelliteGloss: string | null;
  }[];
}
