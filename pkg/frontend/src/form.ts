// Build the parameter form from a UiForm model: one tab per page, one
// control row per widget, Notes and About pages from the document text.

import { formatMatrix, parseMatrixText } from "./state.js";
import type { ParamValue, UiForm, Widget } from "./types.js";
import { SUPPORTED_IR_VERSION } from "./types.js";

export interface FormHandlers {
  /** Continuous controls (sliders): caller debounces. */
  onSlide(values: Record<string, ParamValue>): void;
  /** Committed edits (entry on Enter/blur, preset menu picks). */
  onCommit(values: Record<string, ParamValue>): void;
}

export class FormView {
  private tabsBar!: HTMLElement;
  private pagesHost!: HTMLElement;
  private banner: HTMLElement | null = null;
  private inputs = new Map<string, HTMLInputElement>();
  private sliderLabels = new Map<string, HTMLElement>();
  private readonlys = new Map<string, HTMLElement>();
  private pointRows = new Map<string, HTMLElement>();
  private matrixInputs = new Map<string, HTMLInputElement>();

  constructor(
    private root: HTMLElement,
    private handlers: FormHandlers,
  ) {}

  render(ui: UiForm): void {
    this.root.textContent = "";
    this.inputs.clear();
    this.sliderLabels.clear();
    this.readonlys.clear();
    this.pointRows.clear();
    this.matrixInputs.clear();

    if (ui.irVersion !== SUPPORTED_IR_VERSION) {
      this.banner = el("div", "banner error");
      this.banner.textContent =
        `This client speaks interface version ${SUPPORTED_IR_VERSION} ` +
        `but the server sent version ${ui.irVersion}; controls may misbehave.`;
      this.root.appendChild(this.banner);
    }

    this.tabsBar = el("div", "tabs");
    this.pagesHost = el("div", "pages");
    this.root.appendChild(this.tabsBar);
    this.root.appendChild(this.pagesHost);

    ui.pages.forEach((page, index) => {
      const tab = el("button", "tab");
      tab.textContent = page.title;
      tab.addEventListener("click", () => this.selectTab(index));
      this.tabsBar.appendChild(tab);

      const host = el("div", "page");
      host.dataset.kind = page.kind;
      if (page.kind === "params") {
        for (const widget of page.widgets ?? []) {
          host.appendChild(this.widgetRow(widget));
        }
      } else if (page.kind === "notes") {
        for (const paragraph of page.paragraphs ?? []) {
          const p = el("p", "note");
          p.textContent = paragraph;
          host.appendChild(p);
        }
      } else if (page.kind === "about" && page.about) {
        const dl = el("dl", "about");
        const rows: [string, string][] = [
          ["Title", page.about.title],
          ["Author", page.about.author],
          ["Date", page.about.date],
          ["Keywords", page.about.keywords.join(", ")],
        ];
        for (const [term, detail] of rows) {
          const dt = el("dt");
          dt.textContent = term;
          const dd = el("dd");
          dd.textContent = detail;
          dl.appendChild(dt);
          dl.appendChild(dd);
        }
        host.appendChild(dl);
      }
      this.pagesHost.appendChild(host);
    });
    this.selectTab(0);
  }

  tabTitles(): string[] {
    return Array.from(this.tabsBar.querySelectorAll(".tab")).map(
      (tab) => tab.textContent ?? "",
    );
  }

  selectTab(index: number): void {
    const tabs = this.tabsBar.querySelectorAll(".tab");
    const pages = this.pagesHost.querySelectorAll(".page");
    tabs.forEach((tab, i) => tab.classList.toggle("active", i === index));
    pages.forEach((page, i) =>
      (page as HTMLElement).classList.toggle("active", i === index),
    );
  }

  private widgetRow(widget: Widget): HTMLElement {
    const row = el("div", `row widget-${widget.kind}`);
    row.dataset.symbol = widget.symbol;
    const label = el("label", "name");
    label.textContent = widget.name || widget.symbol;
    row.appendChild(label);

    switch (widget.kind) {
      case "slider": {
        const input = document.createElement("input");
        input.type = "range";
        input.min = String(widget.from ?? 0);
        input.max = String(widget.to ?? 1);
        input.step = String(widget.resolution ?? 1);
        input.value = String(widget.default ?? 0);
        const value = el("span", "value");
        value.textContent = input.value;
        input.addEventListener("input", () => {
          value.textContent = input.value;
          this.handlers.onSlide({ [widget.symbol]: Number(input.value) });
        });
        this.inputs.set(widget.symbol, input);
        this.sliderLabels.set(widget.symbol, value);
        row.appendChild(input);
        row.appendChild(value);
        break;
      }
      case "entry": {
        if (widget.matrix) {
          const input = document.createElement("input");
          input.type = "text";
          input.value = formatMatrix((widget.default as number[][]) ?? [[0]]);
          input.addEventListener("change", () => {
            const rows = parseMatrixText(input.value);
            if (rows) {
              this.handlers.onCommit({ [widget.symbol]: rows });
            } else {
              input.classList.add("invalid");
            }
          });
          input.addEventListener("input", () => input.classList.remove("invalid"));
          this.matrixInputs.set(widget.symbol, input);
          row.appendChild(input);
        } else {
          const input = document.createElement("input");
          input.type = "number";
          input.step = "any";
          input.value = String(widget.default ?? 0);
          input.addEventListener("change", () => {
            const value = Number(input.value);
            if (Number.isFinite(value)) {
              this.handlers.onCommit({ [widget.symbol]: value });
            }
          });
          this.inputs.set(widget.symbol, input);
          row.appendChild(input);
        }
        break;
      }
      case "readonly": {
        const value = el("span", "value");
        value.textContent = String(widget.default ?? "");
        this.readonlys.set(widget.symbol, value);
        row.appendChild(value);
        break;
      }
      case "preset_menu": {
        const select = document.createElement("select");
        for (const instance of widget.instances ?? []) {
          const option = document.createElement("option");
          option.value = instance.name;
          option.textContent = instance.name;
          select.appendChild(option);
        }
        select.addEventListener("change", () => {
          const instance = (widget.instances ?? []).find(
            (i) => i.name === select.value,
          );
          if (instance) this.handlers.onCommit({ ...instance.values });
        });
        row.appendChild(select);
        break;
      }
      case "point_handle": {
        const value = el("span", "value point-value");
        const [x, y] = (widget.default as number[]) ?? [0, 0];
        value.textContent = formatPoint(x, y);
        this.pointRows.set(widget.symbol, value);
        row.appendChild(value);
        const hint = el("span", "hint");
        hint.textContent = "drag the cross on the plot";
        row.appendChild(hint);
        break;
      }
    }

    if (widget.unit) {
      const unit = el("span", "unit");
      unit.textContent = widget.unit;
      row.appendChild(unit);
    }
    return row;
  }

  /** Sync a control to a server-acknowledged value (clamp, session load). */
  setValue(symbol: string, value: ParamValue): void {
    if (Array.isArray(value)) {
      const matrix = this.matrixInputs.get(symbol);
      if (matrix) matrix.value = formatMatrix(value as number[][]);
      return;
    }
    const input = this.inputs.get(symbol);
    if (input) {
      input.value = String(value);
      const label = this.sliderLabels.get(symbol);
      if (label) label.textContent = input.value;
      return;
    }
    const readonly = this.readonlys.get(symbol);
    if (readonly) readonly.textContent = String(value);
  }

  getValue(symbol: string): number | null {
    const input = this.inputs.get(symbol);
    return input ? Number(input.value) : null;
  }

  setPoint(label: string, x: number, y: number): void {
    const row = this.pointRows.get(label);
    if (row) row.textContent = formatPoint(x, y);
  }
}

function formatPoint(x: number, y: number): string {
  return `(${trim(x)}, ${trim(y)})`;
}

function trim(v: number): string {
  return Number(v.toFixed(6)).toString();
}

function el(tag: string, className?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  return node;
}
