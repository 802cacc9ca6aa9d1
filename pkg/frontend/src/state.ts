// Client-side session state: debounced, serialized mutations and a
// monotonic run-counter gate so stale responses never overwrite newer ones.

import type { ParamValue, RunPayload } from "./types.js";

export const DEBOUNCE_MS = 120;

export function debounce<A extends unknown[]>(
  ms: number,
  fn: (...args: A) => void,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, ms);
  };
}

/** At most one in-flight mutation; while busy only the LAST submission is
 * kept (last writer wins, matching the server's per-session semantics). */
export class MutationQueue {
  private inflight = false;
  private pending: (() => Promise<void>) | null = null;

  get busy(): boolean {
    return this.inflight;
  }

  submit(task: () => Promise<void>): void {
    if (this.inflight) {
      this.pending = task;
      return;
    }
    this.inflight = true;
    void this.drain(task);
  }

  private async drain(task: () => Promise<void>): Promise<void> {
    let current: (() => Promise<void>) | null = task;
    while (current) {
      try {
        await current();
      } catch {
        // the task is responsible for reporting its own errors
      }
      current = this.pending;
      this.pending = null;
    }
    this.inflight = false;
  }
}

/** Widget values as last acknowledged by the server, plus the run gate. */
export class SessionViewModel {
  values = new Map<string, ParamValue>();
  shownRunCounter = 0;

  /** True when the payload is newer than anything displayed so far. */
  accept(payload: RunPayload): boolean {
    if (payload.runCounter <= this.shownRunCounter) return false;
    this.shownRunCounter = payload.runCounter;
    return true;
  }

  setValue(symbol: string, value: ParamValue): void {
    this.values.set(symbol, value);
  }
}

/** Parse the text session-file format: `sym = value`, `m = [1 2; 3 4]`. */
export function parseSessionFile(text: string): Map<string, ParamValue> {
  const values = new Map<string, ParamValue>();
  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (!line || line.startsWith("#") || line.startsWith("!")) continue;
    const eq = line.indexOf("=");
    if (eq < 0) continue;
    const symbol = line.slice(0, eq).trim();
    const rhs = line.slice(eq + 1).trim();
    if (rhs.startsWith("[")) {
      const rows = rhs
        .replace(/^\[|\]$/g, "")
        .split(";")
        .map((row) => row.trim().split(/[\s,]+/).filter(Boolean).map(Number))
        .filter((row) => row.length > 0);
      values.set(symbol, rows);
    } else {
      const value = Number(rhs);
      if (Number.isFinite(value)) values.set(symbol, value);
    }
  }
  return values;
}

export function formatMatrix(rows: number[][]): string {
  return "[" + rows.map((row) => row.join(" ")).join("; ") + "]";
}

export function parseMatrixText(text: string): number[][] | null {
  const body = text.trim().replace(/^\[|\]$/g, "");
  if (!body.trim()) return null;
  const rows = body
    .split(";")
    .map((row) => row.trim().split(/[\s,]+/).filter(Boolean).map(Number));
  if (rows.some((row) => row.length === 0 || row.some((v) => !Number.isFinite(v)))) {
    return null;
  }
  if (rows.some((row) => row.length !== rows[0].length)) return null;
  return rows;
}
