// Data-space mapping read from the axis metadata the renderer embeds as
// data-* attributes on each plot area.

export interface AxisMapping {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
  pxLeft: number;
  pxTop: number;
  pxWidth: number;
  pxHeight: number;
}

export function readAxisMapping(root: Element, axisIndex = 0): AxisMapping | null {
  const areas = root.querySelectorAll("g.plot-area");
  const area = areas[axisIndex];
  if (!area) return null;
  const num = (name: string) => Number(area.getAttribute(name));
  const mapping = {
    xMin: num("data-x-min"),
    xMax: num("data-x-max"),
    yMin: num("data-y-min"),
    yMax: num("data-y-max"),
    pxLeft: num("data-px-left"),
    pxTop: num("data-px-top"),
    pxWidth: num("data-px-width"),
    pxHeight: num("data-px-height"),
  };
  if (Object.values(mapping).some((v) => !Number.isFinite(v))) return null;
  return mapping;
}

/** SVG viewBox pixel position -> data coordinates. */
export function screenToData(
  m: AxisMapping,
  px: number,
  py: number,
): { x: number; y: number } {
  const x = m.xMin + ((px - m.pxLeft) / m.pxWidth) * (m.xMax - m.xMin);
  const y = m.yMax - ((py - m.pxTop) / m.pxHeight) * (m.yMax - m.yMin);
  return { x, y };
}

/** Data coordinates -> SVG viewBox pixel position. */
export function dataToScreen(
  m: AxisMapping,
  x: number,
  y: number,
): { px: number; py: number } {
  const px = m.pxLeft + ((x - m.xMin) / (m.xMax - m.xMin)) * m.pxWidth;
  const py = m.pxTop + ((m.yMax - y) / (m.yMax - m.yMin)) * m.pxHeight;
  return { px, py };
}
