// Detection overlay geometry and drawing. Stored coordinates are in the
// image's natural pixel space; everything is multiplied by the
// displayed/natural ratio before it touches the canvas.

import { OverlayDetection } from './types.js';

export const BUCKET_COLORS: Record<string, string> = {
  severe: '#d64541',
  mild: '#e8882d',
  minor: '#e3c01f',
  none: '#3da35d',
};

export interface ScaledDetection {
  label: string;
  color: string;
  bbox: { x: number; y: number; w: number; h: number };
  points: Array<[number, number]>;
}

export function displayScale(naturalWidth: number, displayedWidth: number): number {
  if (naturalWidth <= 0) return 1;
  return displayedWidth / naturalWidth;
}

export function scaleDetection(det: OverlayDetection, scale: number): ScaledDetection {
  const [x, y, w, h] = det.bbox;
  const xs = det.polygon.all_points_x;
  const ys = det.polygon.all_points_y;
  return {
    label: `${det.label} (${det.confidence.toFixed(2)})`,
    color: BUCKET_COLORS[det.label] ?? '#4a90d9',
    bbox: { x: x * scale, y: y * scale, w: w * scale, h: h * scale },
    points: xs.map((px, i) => [px * scale, ys[i] * scale] as [number, number]),
  };
}

/** One filled polygon, one bbox outline, and one label per detection. */
export function drawOverlays(
  ctx: CanvasRenderingContext2D,
  detections: OverlayDetection[],
  scale: number,
): ScaledDetection[] {
  const scaled = detections.map((det) => scaleDetection(det, scale));
  ctx.lineWidth = 2;
  ctx.font = '13px sans-serif';
  for (const det of scaled) {
    ctx.strokeStyle = det.color;
    ctx.fillStyle = det.color + '33'; // translucent fill
    ctx.beginPath();
    det.points.forEach(([px, py], i) => (i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py)));
    ctx.closePath();
    ctx.fill();
    ctx.stroke();
    ctx.strokeRect(det.bbox.x, det.bbox.y, det.bbox.w, det.bbox.h);

    const textWidth = ctx.measureText(det.label).width + 8;
    const labelY = Math.max(0, det.bbox.y - 18);
    ctx.fillStyle = det.color;
    ctx.fillRect(det.bbox.x, labelY, textWidth, 18);
    ctx.fillStyle = '#fff';
    ctx.fillText(det.label, det.bbox.x + 4, labelY + 13);
  }
  return scaled;
}
