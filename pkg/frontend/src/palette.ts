// Color tables shared with the server engine; the multi palette cycle and the
// RGB values must match so both renderers paint identical frames.

export const MULTI_PALETTE = [
  "red",
  "orange",
  "yellow",
  "green",
  "cyan",
  "blue",
  "violet",
] as const;

export const COLOR_RGB: Record<string, [number, number, number]> = {
  white: [255, 255, 255],
  purple: [170, 80, 255],
  blue: [80, 130, 255],
  green: [80, 220, 120],
  orange: [255, 150, 50],
  yellow: [255, 220, 70],
  red: [255, 80, 80],
  cyan: [80, 220, 220],
  violet: [200, 120, 255],
};

export function cssColor(name: string, alpha: number): string {
  const [r, g, b] = COLOR_RGB[name] ?? [255, 255, 255];
  return `rgba(${r},${g},${b},${alpha.toFixed(3)})`;
}
