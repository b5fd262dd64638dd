/** Request gate and debounce primitives. */

import { describe, expect, it, vi } from "vitest";
import { LatestRequestGate, debounce } from "../src/api";

describe("LatestRequestGate", () => {
  it("applies the only request", async () => {
    const gate = new LatestRequestGate();
    const result = await gate.track(() => Promise.resolve(1));
    expect(result).toEqual({ kind: "applied", value: 1 });
  });

  it("marks superseded requests stale regardless of completion order", async () => {
    const gate = new LatestRequestGate();
    let releaseFirst!: (v: number) => void;
    const first = gate.track(() => new Promise<number>((res) => (releaseFirst = res)));
    const second = await gate.track(() => Promise.resolve(2));
    expect(second).toEqual({ kind: "applied", value: 2 });
    releaseFirst(1);
    expect(await first).toEqual({ kind: "stale" });
  });

  it("reports failures only for the current request", async () => {
    const gate = new LatestRequestGate();
    let rejectFirst!: (e: Error) => void;
    const first = gate.track(() => new Promise((_res, rej) => (rejectFirst = rej)));
    await gate.track(() => Promise.resolve("fresh"));
    rejectFirst(new Error("old failure"));
    expect(await first).toEqual({ kind: "stale" });
    const failing = await gate.track(() => Promise.reject(new Error("current failure")));
    expect(failing.kind).toBe("failed");
  });
});

describe("debounce", () => {
  it("fires once on the trailing edge with the last arguments", () => {
    vi.useFakeTimers();
    const calls: number[] = [];
    const fn = debounce((n: number) => calls.push(n), 100);
    fn(1);
    fn(2);
    fn(3);
    vi.advanceTimersByTime(99);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(calls).toEqual([3]);
    vi.useRealTimers();
  });
});
