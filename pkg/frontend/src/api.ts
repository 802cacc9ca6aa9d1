// Thin typed client over the session service JSON API.

import type {
  CreateSessionPayload,
  LanguagePayload,
  ParamValue,
  PointPayload,
  RunPayload,
  SimulationInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function expectJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (typeof body?.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private base: string = "") {}

  listSimulations(): Promise<SimulationInfo[]> {
    return fetch(`${this.base}/api/simulations`).then((r) =>
      expectJson<SimulationInfo[]>(r),
    );
  }

  createSession(docId: string, language: string | null): Promise<CreateSessionPayload> {
    return fetch(`${this.base}/api/simulations/${encodeURIComponent(docId)}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(language ? { language } : {}),
    }).then((r) => expectJson<CreateSessionPayload>(r));
  }

  patchParams(sid: string, values: Record<string, ParamValue>): Promise<RunPayload> {
    return fetch(`${this.base}/api/sessions/${sid}/params`, {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(values),
    }).then((r) => expectJson<RunPayload>(r));
  }

  movePoint(sid: string, label: string, x: number, y: number): Promise<PointPayload> {
    return fetch(`${this.base}/api/sessions/${sid}/point/${encodeURIComponent(label)}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ x, y }),
    }).then((r) => expectJson<PointPayload>(r));
  }

  async plotSvg(sid: string, windowIndex: number): Promise<string> {
    const response = await fetch(`${this.base}/api/sessions/${sid}/plot/${windowIndex}.svg`);
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return response.text();
  }

  async sessionFile(sid: string): Promise<string> {
    const response = await fetch(`${this.base}/api/sessions/${sid}/session-file`);
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return response.text();
  }

  loadSessionFile(sid: string, text: string): Promise<RunPayload> {
    return fetch(`${this.base}/api/sessions/${sid}/session-file`, {
      method: "PUT",
      headers: { "content-type": "text/plain; charset=utf-8" },
      body: text,
    }).then((r) => expectJson<RunPayload>(r));
  }

  switchLanguage(sid: string, language: string | null): Promise<LanguagePayload> {
    return fetch(`${this.base}/api/sessions/${sid}/language`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ language }),
    }).then((r) => expectJson<LanguagePayload>(r));
  }

  exportCsvUrl(sid: string): string {
    return `${this.base}/api/sessions/${sid}/export.csv`;
  }
}
