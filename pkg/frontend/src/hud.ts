// HUD pieces: score gauge coloring, the reminder toast window, and the canvas
// skeleton overlay with worst-angle-pair highlighting.

export function gaugeColor(score: number, sStd = 60): "red" | "yellow" | "green" {
  if (score <= 0) return "red";
  if (score < sStd) return "yellow";
  return "green";
}

export class ToastState {
  private worst: number[] = [];
  private expiresAtMs = -Infinity;

  trigger(worst: number[], nowMs: number, durationMs = 1500): void {
    this.worst = worst;
    this.expiresAtMs = nowMs + durationMs;
  }

  active(nowMs: number): boolean {
    return nowMs < this.expiresAtMs;
  }

  worstPairs(nowMs: number): number[] {
    return this.active(nowMs) ? this.worst : [];
  }
}

// Joint13 -> COCO source index, as the scoring engine maps them.
export const JOINT13_COCO = [0, 6, 8, 10, 5, 7, 9, 12, 14, 16, 11, 13, 15];

// The engine's default limb table, expressed in COCO indices.
export const LIMBS_COCO: Array<[number, number]> = [
  [0, 6], [0, 5], [6, 8], [8, 10], [5, 7], [7, 9],
  [6, 12], [5, 11], [12, 14], [14, 16], [11, 13], [13, 15],
];

// Which two limbs make up each scored angle pair.
export const ANGLE_PAIR_LIMBS: Array<[number, number]> = [
  [0, 2], [1, 4], [2, 3], [4, 5], [6, 2], [7, 4],
  [6, 8], [7, 10], [8, 9], [10, 11], [0, 6], [1, 7],
];

export interface OverlayStyle {
  bone: string;
  boneWidth: number;
  badBone: string;
  badBoneWidth: number;
  joint: string;
  jointRadius: number;
  minConfidence: number;
}

const DEFAULT_STYLE: OverlayStyle = {
  bone: "rgba(120,220,160,0.9)",
  boneWidth: 3,
  badBone: "rgba(255,70,70,0.95)",
  badBoneWidth: 5,
  joint: "rgba(255,255,255,0.9)",
  jointRadius: 4,
  minConfidence: 0.3,
};

/**
 * Draw the skeleton over the (already mirrored) video. `worstPairs` holds
 * angle-pair indices from reminder events; their limbs paint in the alert
 * color.
 */
export function drawSkeleton(
  ctx: CanvasRenderingContext2D,
  kp: number[][],
  scaleX: number,
  scaleY: number,
  worstPairs: number[] = [],
  style: OverlayStyle = DEFAULT_STYLE,
): void {
  if (kp.length !== 17) return;
  const badLimbs = new Set<number>();
  for (const pair of worstPairs) {
    const limbs = ANGLE_PAIR_LIMBS[pair];
    if (limbs) {
      badLimbs.add(limbs[0]);
      badLimbs.add(limbs[1]);
    }
  }
  LIMBS_COCO.forEach(([a, b], limb) => {
    if (kp[a][2] < style.minConfidence || kp[b][2] < style.minConfidence) return;
    ctx.strokeStyle = badLimbs.has(limb) ? style.badBone : style.bone;
    ctx.lineWidth = badLimbs.has(limb) ? style.badBoneWidth : style.boneWidth;
    ctx.beginPath();
    ctx.moveTo(kp[a][0] * scaleX, kp[a][1] * scaleY);
    ctx.lineTo(kp[b][0] * scaleX, kp[b][1] * scaleY);
    ctx.stroke();
  });
  ctx.fillStyle = style.joint;
  for (const idx of JOINT13_COCO) {
    if (kp[idx][2] < style.minConfidence) continue;
    ctx.beginPath();
    ctx.arc(kp[idx][0] * scaleX, kp[idx][1] * scaleY, style.jointRadius, 0, 2 * Math.PI);
    ctx.fill();
  }
}

export function drawGauge(
  ctx: CanvasRenderingContext2D,
  score: number | null,
  sStd: number,
  x: number,
  y: number,
  width: number,
  height: number,
): void {
  ctx.fillStyle = "rgba(0,0,0,0.5)";
  ctx.fillRect(x, y, width, height);
  if (score === null) return;
  const colors = { red: "#e23b3b", yellow: "#e2c53b", green: "#43d17a" };
  ctx.fillStyle = colors[gaugeColor(score, sStd)];
  ctx.fillRect(x + 2, y + 2, (width - 4) * (score / 100), height - 4);
  ctx.fillStyle = "#fff";
  ctx.font = `${height - 8}px monospace`;
  ctx.textBaseline = "middle";
  ctx.fillText(String(Math.round(score)), x + width + 8, y + height / 2);
}
