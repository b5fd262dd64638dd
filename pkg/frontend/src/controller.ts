/**
 * Planner controller: owns the state, talks to the service through a
 * request gate (one in-flight estimate; stale answers dropped), and hands
 * fresh state to a render callback. DOM-free, so fully testable with a
 * mock transport.
 */

import { ApiClient, LatestRequestGate, type Transport } from "./api.js";
import {
  buildRequest,
  initialState,
  pinScenario,
  type FieldError,
  type PlannerState,
} from "./state.js";
import { applyPreset, PRESET_LABELS, type PresetName } from "./presets.js";
import type { BoroughTable } from "./types.js";

export class PlannerController {
  state: PlannerState = initialState();
  errors: FieldError[] = [];
  private readonly client: ApiClient;
  private readonly estimateGate = new LatestRequestGate();
  private readonly boroughGate = new LatestRequestGate();

  constructor(
    transport: Transport,
    private readonly onChange: (state: PlannerState, errors: FieldError[]) => void = () => {},
  ) {
    this.client = new ApiClient(transport);
  }

  private emit(): void {
    this.onChange(this.state, this.errors);
  }

  /** Re-validate the form and, when valid, fetch a fresh estimate. */
  async refresh(): Promise<void> {
    const built = buildRequest(this.state);
    if ("errors" in built) {
      this.errors = built.errors;
      this.state = { ...this.state, stale: this.state.lastResponse !== null };
      this.emit();
      return;
    }
    this.errors = [];
    this.state = { ...this.state, stale: true };
    this.emit();
    const result = await this.estimateGate.track(() => this.client.estimate(built.request));
    if (result.kind === "stale") return; // a newer request owns the panel
    if (result.kind === "failed") {
      this.state = { ...this.state, serviceDown: true, stale: true };
    } else {
      this.state = {
        ...this.state,
        lastResponse: result.value,
        stale: false,
        serviceDown: false,
      };
    }
    this.emit();
  }

  async selectPreset(preset: PresetName): Promise<void> {
    this.state = applyPreset(this.state, preset);
    this.emit();
    await this.refresh();
  }

  pinCurrent(label?: string): void {
    this.state = pinScenario(this.state, label ?? `pin ${this.state.pinned.length + 1}`);
    this.emit();
  }

  pinPresetLabel(preset: PresetName): void {
    this.pinCurrent(PRESET_LABELS[preset]);
  }

  async loadBoroughs(metric: string): Promise<BoroughTable | null> {
    this.state = { ...this.state, boroughMetric: metric };
    const result = await this.boroughGate.track(() => this.client.boroughs(metric));
    if (result.kind === "applied") return result.value;
    if (result.kind === "failed") return null;
    return null;
  }
}
