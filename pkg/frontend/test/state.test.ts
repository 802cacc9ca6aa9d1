import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import {
  DEBOUNCE_MS,
  MutationQueue,
  SessionViewModel,
  debounce,
  formatMatrix,
  parseMatrixText,
  parseSessionFile,
} from "../src/state.js";
import type { RunPayload } from "../src/types.js";

function payload(runCounter: number): RunPayload {
  return {
    runCounter,
    warnings: [],
    result: {
      series: {},
      fields2d: {},
      points: {},
      traces: {},
      scalars: {},
      meta: {},
      diagnostics: { warnings: [] },
    },
  };
}

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("fires once for two rapid events within the window", () => {
    const calls: number[] = [];
    const fire = debounce(DEBOUNCE_MS, (v: number) => calls.push(v));
    fire(2);
    vi.advanceTimersByTime(50);
    fire(4);
    vi.advanceTimersByTime(DEBOUNCE_MS + 1);
    expect(calls).toEqual([4]); // single call, last value wins
  });

  it("fires separately for events further apart than the window", () => {
    const calls: number[] = [];
    const fire = debounce(DEBOUNCE_MS, (v: number) => calls.push(v));
    fire(1);
    vi.advanceTimersByTime(DEBOUNCE_MS + 1);
    fire(2);
    vi.advanceTimersByTime(DEBOUNCE_MS + 1);
    expect(calls).toEqual([1, 2]);
  });
});

describe("MutationQueue", () => {
  it("keeps at most one request in flight and the last pending one", async () => {
    const queue = new MutationQueue();
    const log: string[] = [];
    let release: () => void = () => undefined;
    const gate = new Promise<void>((resolve) => (release = resolve));

    queue.submit(async () => {
      log.push("first-start");
      await gate;
      log.push("first-end");
    });
    queue.submit(async () => {
      log.push("second");
    });
    queue.submit(async () => {
      log.push("third");
    });

    expect(queue.busy).toBe(true);
    release();
    await vi.waitFor(() => expect(queue.busy).toBe(false));
    // the second submission was superseded by the third before running
    expect(log).toEqual(["first-start", "first-end", "third"]);
  });
});

describe("SessionViewModel run gate", () => {
  it("never accepts a result older than one already shown", () => {
    const vm = new SessionViewModel();
    expect(vm.accept(payload(1))).toBe(true);
    expect(vm.accept(payload(3))).toBe(true);
    expect(vm.accept(payload(2))).toBe(false); // stale response
    expect(vm.shownRunCounter).toBe(3);
  });

  it("ignores duplicate counters", () => {
    const vm = new SessionViewModel();
    expect(vm.accept(payload(1))).toBe(true);
    expect(vm.accept(payload(1))).toBe(false);
  });
});

describe("session file parsing", () => {
  it("reads scalars and matrices, skipping header and comments", () => {
    const text = [
      "!session version=1 doc=pendulum",
      "# comment",
      "L = 1",
      "g0 = 9.81",
      "m = [1 2; 3 4]",
      "",
    ].join("\n");
    const values = parseSessionFile(text);
    expect(values.get("L")).toBe(1);
    expect(values.get("g0")).toBe(9.81);
    expect(values.get("m")).toEqual([
      [1, 2],
      [3, 4],
    ]);
  });
});

describe("matrix text", () => {
  it("round trips", () => {
    const rows = [
      [1, 2.5],
      [-3, 4],
    ];
    expect(parseMatrixText(formatMatrix(rows))).toEqual(rows);
  });

  it("rejects ragged and non-numeric input", () => {
    expect(parseMatrixText("[1 2; 3]")).toBeNull();
    expect(parseMatrixText("[a b]")).toBeNull();
    expect(parseMatrixText("")).toBeNull();
  });
});
