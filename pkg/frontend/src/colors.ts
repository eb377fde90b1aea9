/** Element-kind colour scheme shared by overlay and legend. */

import type { ElementKind } from './types.js';

export const KIND_COLORS: Record<ElementKind, string> = {
  text: '#4060e8',
  blob: '#d63030',
  arrow: '#20a040',
  arrowhead: '#f09618',
};

export const SELECTION_COLOR = '#111111';

export function kindColor(kind: ElementKind): string {
  return KIND_COLORS[kind];
}
