// Plot panel: shows the server-rendered SVG and overlays pointer handling
// on the cross markers so constrained points can be dragged.

import { readAxisMapping, screenToData, dataToScreen } from "./mapping.js";
import type { AxisMapping } from "./mapping.js";

export interface PlotHandlers {
  /** Called with data coordinates while dragging (caller debounces). */
  onPointDrag(label: string, x: number, y: number): void;
  /** Called once with data coordinates when the drag is released. */
  onPointDrop(label: string, x: number, y: number): void;
}

export class PlotView {
  private mapping: AxisMapping | null = null;
  private dragging: { label: string; marker: SVGElement } | null = null;

  constructor(
    private host: HTMLElement,
    private handlers: PlotHandlers,
  ) {}

  /** Replace the plot with fresh SVG text and re-arm the drag overlay. */
  setSvg(svgText: string): void {
    this.host.innerHTML = svgText;
    const svg = this.host.querySelector("svg");
    if (!svg) return;
    this.mapping = readAxisMapping(svg);
    for (const marker of svg.querySelectorAll("path.point-marker")) {
      (marker as SVGElement).style.cursor = "grab";
      marker.addEventListener("pointerdown", (event) =>
        this.beginDrag(event as PointerEvent, marker as SVGElement),
      );
    }
    svg.addEventListener("pointermove", (event) =>
      this.moveDrag(event as PointerEvent),
    );
    svg.addEventListener("pointerup", (event) =>
      this.endDrag(event as PointerEvent),
    );
  }

  /** Move the cross glyph to a data position without a server round trip. */
  placeCross(label: string, x: number, y: number): void {
    if (!this.mapping) return;
    const svg = this.host.querySelector("svg");
    const marker = svg?.querySelector(
      `path.point-marker[data-symbol="${label}"]`,
    ) as SVGElement | null;
    if (!marker) return;
    const previousX = Number(marker.getAttribute("data-x"));
    const previousY = Number(marker.getAttribute("data-y"));
    const from = dataToScreen(this.mapping, previousX, previousY);
    const to = dataToScreen(this.mapping, x, y);
    marker.setAttribute(
      "transform",
      `translate(${to.px - from.px} ${to.py - from.py})`,
    );
  }

  /** Pointer event -> SVG viewBox coordinates -> data coordinates. */
  pointerToData(event: PointerEvent): { x: number; y: number } | null {
    if (!this.mapping) return null;
    const svg = this.host.querySelector("svg");
    if (!svg) return null;
    const rect = svg.getBoundingClientRect();
    if (rect.width === 0 || rect.height === 0) return null;
    const viewWidth = Number(svg.getAttribute("width")) || rect.width;
    const viewHeight = Number(svg.getAttribute("height")) || rect.height;
    const px = ((event.clientX - rect.left) / rect.width) * viewWidth;
    const py = ((event.clientY - rect.top) / rect.height) * viewHeight;
    return screenToData(this.mapping, px, py);
  }

  private beginDrag(event: PointerEvent, marker: SVGElement): void {
    const label = marker.getAttribute("data-symbol");
    if (!label) return;
    event.preventDefault();
    this.dragging = { label, marker };
    marker.style.cursor = "grabbing";
  }

  private moveDrag(event: PointerEvent): void {
    if (!this.dragging) return;
    const data = this.pointerToData(event);
    if (!data) return;
    this.placeCross(this.dragging.label, data.x, data.y);
    this.handlers.onPointDrag(this.dragging.label, data.x, data.y);
  }

  private endDrag(event: PointerEvent): void {
    if (!this.dragging) return;
    const label = this.dragging.label;
    this.dragging.marker.style.cursor = "grab";
    this.dragging = null;
    const data = this.pointerToData(event);
    if (data) this.handlers.onPointDrop(label, data.x, data.y);
  }
}
