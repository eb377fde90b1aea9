/**
 * Segmentation overlay: pure scene computation plus a thin canvas adapter.
 *
 * The scene is a list of draw instructions derived from the inventory and
 * the current selection, one per element, coloured by kind; with anything
 * selected, unselected elements are dimmed. Keeping this pure makes the
 * rendering testable without a canvas.
 */

import { kindColor, SELECTION_COLOR } from './colors.js';
import type { ElementObj } from './types.js';

export interface DrawInstruction {
  elementId: string;
  kind: ElementObj['kind'];
  shape: { rect?: number[]; polygon?: number[][] };
  stroke: string;
  lineWidth: number;
  dimmed: boolean;
  selected: boolean;
  label: string;
}

export interface Scene {
  instructions: DrawInstruction[];
  placeholder: boolean;
}

export function buildScene(
  inventory: ElementObj[],
  selection: string[],
  imageAvailable: boolean,
): Scene {
  const selected = new Set(selection);
  const anySelection = selected.size > 0;
  const instructions = inventory.map((element) => {
    const isSelected = selected.has(element.id);
    return {
      elementId: element.id,
      kind: element.kind,
      shape: element.shape,
      stroke: isSelected ? SELECTION_COLOR : kindColor(element.kind),
      lineWidth: isSelected ? 4 : 2,
      dimmed: anySelection && !isSelected,
      selected: isSelected,
      label: element.id,
    };
  });
  return { instructions, placeholder: !imageAvailable };
}

/** Point-in-shape hit test used to select elements by clicking the image. */
export function hitTest(inventory: ElementObj[], x: number, y: number): string | null {
  // iterate in reverse so later (usually smaller) elements win
  for (let i = inventory.length - 1; i >= 0; i--) {
    const element = inventory[i]!;
    if (element.shape.rect) {
      const [x0, y0, x1, y1] = element.shape.rect;
      if (x >= x0! && x <= x1! && y >= y0! && y <= y1!) return element.id;
    } else if (element.shape.polygon) {
      if (pointInPolygon(element.shape.polygon, x, y)) return element.id;
    }
  }
  return null;
}

function pointInPolygon(polygon: number[][], x: number, y: number): boolean {
  let inside = false;
  for (let i = 0, j = polygon.length - 1; i < polygon.length; j = i++) {
    const [xi, yi] = polygon[i]!;
    const [xj, yj] = polygon[j]!;
    const intersects =
      yi! > y !== yj! > y &&
      x < ((xj! - xi!) * (y - yi!)) / (yj! - yi!) + xi!;
    if (intersects) inside = !inside;
  }
  return inside;
}

/** Draw a scene onto a canvas on top of the diagram image (if any). */
export function renderScene(
  ctx: CanvasRenderingContext2D,
  scene: Scene,
  image: CanvasImageSource | null,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  if (image !== null && !scene.placeholder) {
    ctx.drawImage(image, 0, 0);
  } else {
    ctx.fillStyle = '#f2f2ee';
    ctx.fillRect(0, 0, width, height);
    ctx.fillStyle = '#777';
    ctx.font = '14px sans-serif';
    ctx.fillText('image unavailable; overlays only', 16, 28);
  }
  for (const ins of scene.instructions) {
    ctx.globalAlpha = ins.dimmed ? 0.25 : 1.0;
    ctx.strokeStyle = ins.stroke;
    ctx.lineWidth = ins.lineWidth;
    if (ins.shape.rect) {
      const [x0, y0, x1, y1] = ins.shape.rect;
      ctx.strokeRect(x0!, y0!, x1! - x0!, y1! - y0!);
      ctx.fillStyle = ins.stroke;
      ctx.font = '11px sans-serif';
      ctx.fillText(ins.label, x0! + 3, y0! + 12);
    } else if (ins.shape.polygon) {
      ctx.beginPath();
      const [first, ...rest] = ins.shape.polygon;
      ctx.moveTo(first![0]!, first![1]!);
      for (const [x, y] of rest) ctx.lineTo(x!, y!);
      ctx.closePath();
      ctx.stroke();
      ctx.fillStyle = ins.stroke;
      ctx.font = '11px sans-serif';
      ctx.fillText(ins.label, first![0]! + 3, first![1]! + 12);
    }
  }
  ctx.globalAlpha = 1.0;
}
