// Application controller wiring the form, the plot and the API together.

import { ApiClient, ApiError } from "./api.js";
import { FormView } from "./form.js";
import { PlotView } from "./plot.js";
import {
  DEBOUNCE_MS,
  MutationQueue,
  SessionViewModel,
  debounce,
  parseSessionFile,
} from "./state.js";
import { Toaster, sessionExpiredDialog } from "./toasts.js";
import type { ParamValue, RunPayload, RunResult, UiForm } from "./types.js";

export class App {
  readonly vm = new SessionViewModel();
  readonly queue = new MutationQueue();
  form!: FormView;
  plot!: PlotView;
  toaster: Toaster;
  sessionId = "";
  docId = "";
  language: string | null = null;
  lastResult: RunResult | null = null;

  private formHost: HTMLElement;
  private plotHost: HTMLElement;
  private toolbarHost: HTMLElement;
  private slidePatch: (values: Record<string, ParamValue>) => void;
  private dragPoint: (label: string, x: number, y: number) => void;

  constructor(
    private root: HTMLElement,
    readonly api: ApiClient,
  ) {
    this.toolbarHost = child(root, "div", "toolbar");
    const layout = child(root, "div", "layout");
    this.formHost = child(layout, "div", "form-host");
    this.plotHost = child(layout, "div", "plot-host");
    this.toaster = new Toaster(root);

    this.slidePatch = debounce(DEBOUNCE_MS, (values) => this.patch(values));
    this.dragPoint = debounce(DEBOUNCE_MS, (label, x, y) =>
      this.sendPoint(label, x, y),
    );

    this.form = new FormView(this.formHost, {
      onSlide: (values) => {
        for (const [symbol, value] of Object.entries(values)) {
          this.vm.setValue(symbol, value);
        }
        this.slidePatch(values);
      },
      onCommit: (values) => {
        for (const [symbol, value] of Object.entries(values)) {
          this.vm.setValue(symbol, value);
        }
        this.patch(values);
      },
    });
    this.plot = new PlotView(this.plotHost, {
      onPointDrag: (label, x, y) => this.dragPoint(label, x, y),
      onPointDrop: (label, x, y) => this.sendPoint(label, x, y),
    });
  }

  async start(docId: string, language: string | null = null): Promise<void> {
    this.docId = docId;
    this.language = language;
    const created = await this.api.createSession(docId, language);
    this.sessionId = created.sessionId;
    this.vm.shownRunCounter = 0;
    this.renderUi(created.uiForm);
    await this.applyRun(created);
  }

  /** PATCH widget values (already stored in the view model). */
  patch(values: Record<string, ParamValue>): void {
    this.queue.submit(async () => {
      try {
        const payload = await this.api.patchParams(this.sessionId, values);
        await this.applyRun(payload);
        if (payload.warnings.length) await this.syncValuesFromServer();
      } catch (error) {
        this.handleApiError(error);
      }
    });
  }

  sendPoint(label: string, x: number, y: number): void {
    this.queue.submit(async () => {
      try {
        const payload = await this.api.movePoint(this.sessionId, label, x, y);
        this.form.setPoint(label, payload.point.x, payload.point.y);
        await this.applyRun(payload);
      } catch (error) {
        this.handleApiError(error);
      }
    });
  }

  async switchLanguage(language: string | null): Promise<void> {
    try {
      const payload = await this.api.switchLanguage(this.sessionId, language);
      this.language = language;
      this.renderUi(payload.uiForm);
      await this.syncValuesFromServer();
      await this.applyRun(payload);
    } catch (error) {
      this.handleApiError(error);
    }
  }

  async saveSession(): Promise<string> {
    const text = await this.api.sessionFile(this.sessionId);
    downloadText(`${this.docId}-session.txt`, text);
    return text;
  }

  loadSession(text: string): void {
    this.queue.submit(async () => {
      try {
        const payload = await this.api.loadSessionFile(this.sessionId, text);
        this.toaster.showAll(payload.warnings);
        await this.syncValuesFromServer();
        await this.applyRun(payload);
      } catch (error) {
        this.handleApiError(error);
      }
    });
  }

  /** Pull the authoritative valuation and mirror it into the controls. */
  async syncValuesFromServer(): Promise<void> {
    const text = await this.api.sessionFile(this.sessionId);
    for (const [symbol, value] of parseSessionFile(text)) {
      this.vm.setValue(symbol, value);
      this.form.setValue(symbol, value);
    }
  }

  /** Display a run payload unless something newer is already shown. */
  async applyRun(payload: RunPayload): Promise<void> {
    this.toaster.showAll(payload.warnings);
    if (!this.vm.accept(payload)) return;
    this.lastResult = payload.result;
    for (const [label, [x, y]] of Object.entries(payload.result.points)) {
      this.form.setPoint(label, x, y);
    }
    try {
      const svg = await this.api.plotSvg(this.sessionId, 0);
      this.plot.setSvg(svg);
    } catch {
      // documents without a display have no plot window
      this.plotHost.textContent = "";
    }
  }

  private renderUi(ui: UiForm): void {
    this.form.render(ui);
    this.renderToolbar(ui);
  }

  private renderToolbar(ui: UiForm): void {
    this.toolbarHost.textContent = "";
    const title = child(this.toolbarHost, "span", "doc-title");
    title.textContent = ui.title;

    const languages = child(this.toolbarHost, "select", "languages") as HTMLSelectElement;
    const base = document.createElement("option");
    base.value = "";
    base.textContent = "default";
    languages.appendChild(base);
    for (const tag of ui.languages) {
      const option = document.createElement("option");
      option.value = tag;
      option.textContent = tag;
      languages.appendChild(option);
    }
    languages.value = ui.language ?? "";
    languages.addEventListener("change", () => {
      void this.switchLanguage(languages.value || null);
    });

    button(this.toolbarHost, "Save a session", () => void this.saveSession());
    button(this.toolbarHost, "Load a session", () => this.pickSessionFile());
    const csv = child(this.toolbarHost, "a", "button") as HTMLAnchorElement;
    csv.textContent = "Export CSV";
    csv.href = this.api.exportCsvUrl(this.sessionId);
    csv.setAttribute("download", `${this.docId}.csv`);
  }

  private pickSessionFile(): void {
    const input = document.createElement("input");
    input.type = "file";
    input.accept = ".txt,text/plain";
    input.addEventListener("change", () => {
      const file = input.files?.[0];
      if (!file) return;
      void file.text().then((text) => this.loadSession(text));
    });
    input.click();
  }

  private handleApiError(error: unknown): void {
    if (error instanceof ApiError && error.status === 410) {
      sessionExpiredDialog(this.root, () => {
        void this.start(this.docId, this.language);
      });
      return;
    }
    if (error instanceof ApiError) {
      this.toaster.show(`${error.status}: ${error.message}`, "error");
      return;
    }
    this.toaster.show(String(error), "error");
  }
}

function child(parent: HTMLElement, tag: string, className: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  parent.appendChild(node);
  return node;
}

function button(parent: HTMLElement, label: string, onClick: () => void): void {
  const node = document.createElement("button");
  node.textContent = label;
  node.addEventListener("click", onClick);
  parent.appendChild(node);
}

function downloadText(filename: string, text: string): void {
  const blob = new Blob([text], { type: "text/plain" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}
