/**
 * Controller behaviour over a mock transport: stale-response tokens drop
 * out-of-order answers, failures raise the banner without losing results.
 */

import { describe, expect, it } from "vitest";
import type { Transport } from "../src/api";
import { PlannerController } from "../src/controller";
import type { EstimateResponse } from "../src/types";
import recorded from "./fixtures/preset_b_response.json";

const template = recorded as EstimateResponse;

function responseWithEnergy(value: number): EstimateResponse {
  return { ...template, energy_kwh: { value, units: "kWh/yr" } };
}

interface Deferred {
  resolve(value: unknown): void;
  reject(error: unknown): void;
  promise: Promise<unknown>;
}

function deferred(): Deferred {
  let resolve!: (v: unknown) => void;
  let reject!: (e: unknown) => void;
  const promise = new Promise<unknown>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { resolve, reject, promise };
}

/** Mock transport that parks every POST /estimate behind a deferred. */
function mockTransport(): { transport: Transport; pending: Deferred[] } {
  const pending: Deferred[] = [];
  return {
    pending,
    transport: {
      get: () => Promise.resolve({ metric: "x", rows: [] }),
      post: () => {
        const d = deferred();
        pending.push(d);
        return d.promise;
      },
    },
  };
}

describe("stale-response handling", () => {
  it("drops an out-of-order answer: the later request wins", async () => {
    const { transport, pending } = mockTransport();
    const controller = new PlannerController(transport);
    controller.state.toggles.lighting = true;

    const first = controller.refresh();
    const second = controller.refresh();
    expect(pending).toHaveLength(2);

    // resolve in reverse order: the newer answer lands first
    pending[1]!.resolve(responseWithEnergy(664.4));
    await second;
    expect(controller.state.lastResponse?.energy_kwh.value).toBe(664.4);
    expect(controller.state.stale).toBe(false);

    pending[0]!.resolve(responseWithEnergy(12345.0));
    await first;
    // the stale answer must not overwrite the fresh one
    expect(controller.state.lastResponse?.energy_kwh.value).toBe(664.4);
  });

  it("ignores a failure from a superseded request", async () => {
    const { transport, pending } = mockTransport();
    const controller = new PlannerController(transport);
    controller.state.toggles.lighting = true;

    const first = controller.refresh();
    const second = controller.refresh();
    pending[1]!.resolve(responseWithEnergy(1.0));
    await second;
    pending[0]!.reject(new Error("network"));
    await first;
    expect(controller.state.serviceDown).toBe(false);
    expect(controller.state.lastResponse?.energy_kwh.value).toBe(1.0);
  });

  it("keeps the last results, marked stale, when the service is down", async () => {
    const { transport, pending } = mockTransport();
    const controller = new PlannerController(transport);
    controller.state.toggles.lighting = true;

    const ok = controller.refresh();
    pending[0]!.resolve(responseWithEnergy(500.0));
    await ok;
    expect(controller.state.stale).toBe(false);

    const failing = controller.refresh();
    pending[1]!.reject(new Error("connection refused"));
    await failing;
    expect(controller.state.serviceDown).toBe(true);
    expect(controller.state.stale).toBe(true);
    expect(controller.state.lastResponse?.energy_kwh.value).toBe(500.0);
  });

  it("recovers the banner once the service answers again", async () => {
    const { transport, pending } = mockTransport();
    const controller = new PlannerController(transport);
    controller.state.toggles.lighting = true;

    const failing = controller.refresh();
    pending[0]!.reject(new Error("down"));
    await failing;
    expect(controller.state.serviceDown).toBe(true);

    const ok = controller.refresh();
    pending[1]!.resolve(responseWithEnergy(2.0));
    await ok;
    expect(controller.state.serviceDown).toBe(false);
  });
});

describe("form validation through the controller", () => {
  it("reports field errors instead of calling the service", async () => {
    const { transport, pending } = mockTransport();
    const controller = new PlannerController(transport);
    controller.state.form.floorArea = "not a number";
    await controller.refresh();
    expect(pending).toHaveLength(0);
    expect(controller.errors.some((e) => e.field === "floorArea")).toBe(true);
  });
});

describe("presets", () => {
  it("preset B toggles loft, windows, and lighting on the bare house", async () => {
    const { transport, pending } = mockTransport();
    const controller = new PlannerController(transport);
    const selecting = controller.selectPreset("B");
    expect(controller.state.toggles).toEqual({
      loft: true,
      windows: true,
      lighting: true,
      heat_pump: false,
    });
    expect(controller.state.form.propertyType).toBe("House");
    expect(controller.state.form.glazedPercent).toBe("0");
    pending[0]!.resolve(template);
    await selecting;
    expect(controller.state.lastResponse).not.toBeNull();
  });
});

describe("pinning", () => {
  it("pins at most three immutable scenarios", async () => {
    const { transport, pending } = mockTransport();
    const controller = new PlannerController(transport);
    controller.state.toggles.lighting = true;
    const ok = controller.refresh();
    pending[0]!.resolve(responseWithEnergy(10.0));
    await ok;

    for (const label of ["one", "two", "three", "four"]) controller.pinCurrent(label);
    expect(controller.state.pinned.map((p) => p.label)).toEqual(["two", "three", "four"]);

    // mutating live state must not touch a pinned snapshot
    controller.state.lastResponse!.energy_kwh.value = -1;
    expect(controller.state.pinned[2]!.response.energy_kwh.value).toBe(10.0);
  });
});
