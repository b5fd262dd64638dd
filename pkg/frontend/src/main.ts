/**
 * DOM glue: wires the controller to the page. This is the only module that
 * touches `document`.
 */

import { debounce, fetchTransport } from "./api.js";
import { PlannerController } from "./controller.js";
import {
  renderBoroughChart,
  renderProfileForm,
  renderResultCards,
  renderScenarioCompare,
  renderServiceBanner,
  renderWhatIfPanel,
} from "./render.js";
import type { FieldError, PlannerState } from "./state.js";
import type { PresetName } from "./presets.js";

const SERVICE_URL = (window as { RETROPLAN_API?: string }).RETROPLAN_API ?? "";

function mount(): void {
  const root = document.getElementById("app");
  if (root === null) throw new Error("missing #app container");

  const controller = new PlannerController(fetchTransport(SERVICE_URL), render);
  const scheduleRefresh = debounce(() => void controller.refresh(), 250);

  function render(state: PlannerState, errors: FieldError[]): void {
    root!.innerHTML = [
      renderServiceBanner(state),
      `<div class="columns"><div>`,
      renderProfileForm(state, errors),
      renderWhatIfPanel(state),
      `<div class="presets">
         ${(["A", "B", "C", "D"] as PresetName[])
           .map((p) => `<button data-preset="${p}">Preset ${p}</button>`)
           .join("")}
         <button id="pin">Pin scenario</button>
       </div>`,
      `</div><div>`,
      renderResultCards(state),
      renderScenarioCompare(state.pinned),
      `<div id="borough-slot"></div>`,
      `</div></div>`,
    ].join("\n");
    bind();
  }

  function bind(): void {
    root!.querySelectorAll<HTMLElement>("[data-field]").forEach((el) => {
      el.addEventListener("change", () => {
        const field = el.dataset.field as keyof PlannerState["form"];
        const value = (el as HTMLInputElement | HTMLSelectElement).value;
        controller.state = {
          ...controller.state,
          form: { ...controller.state.form, [field]: value },
        };
        scheduleRefresh();
      });
    });
    root!.querySelectorAll<HTMLInputElement>("[data-project]").forEach((el) => {
      el.addEventListener("change", () => {
        const project = el.dataset.project as keyof PlannerState["toggles"];
        controller.state = {
          ...controller.state,
          toggles: { ...controller.state.toggles, [project]: el.checked },
        };
        scheduleRefresh();
      });
    });
    root!.querySelectorAll<HTMLElement>("[data-target]").forEach((el) => {
      el.addEventListener("change", () => {
        const value = (el as HTMLInputElement | HTMLSelectElement).value;
        const targets = { ...controller.state.targets };
        if (el.dataset.target === "loftCm") targets.loftCm = Number(value);
        if (el.dataset.target === "glazingRoute") {
          targets.glazingRoute = value as PlannerState["targets"]["glazingRoute"];
        }
        controller.state = { ...controller.state, targets };
        scheduleRefresh();
      });
    });
    root!.querySelectorAll<HTMLButtonElement>("[data-preset]").forEach((el) => {
      el.addEventListener("click", () => void controller.selectPreset(el.dataset.preset as PresetName));
    });
    root!.querySelector("#pin")?.addEventListener("click", () => controller.pinCurrent());
  }

  render(controller.state, []);
  void controller.refresh();
  void controller.loadBoroughs(controller.state.boroughMetric).then((table) => {
    const slot = document.getElementById("borough-slot");
    if (slot !== null && table !== null) slot.innerHTML = renderBoroughChart(table);
  });
}

mount();
