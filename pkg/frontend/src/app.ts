// Browser entry point: wires the controller to the three console
// regions (findings entry, ranked processes, recommendations/what-if).

import { TriageApi } from "./api.js";
import { ConsoleController } from "./controller.js";
import { renderFindingForm } from "./render.js";
import type { ModelVariable } from "./types.js";

interface BootConfig {
  base: string;
  model: unknown;
  variables: ModelVariable[];
}

export async function boot(config: BootConfig): Promise<ConsoleController> {
  const api = new TriageApi(config.base);
  const modelId = await api.loadModel(config.model);
  const sessionId = await api.createSession({ model: modelId });
  const controller = new ConsoleController(api, sessionId);

  const assessmentPanel = document.getElementById("assessment")!;
  const formPanel = document.getElementById("finding-form")!;
  const delayPanel = document.getElementById("what-if")!;
  const planPanel = document.getElementById("plans")!;
  const slider = document.getElementById("delay-slider") as HTMLInputElement;
  const scenarioInput = document.getElementById("scenario-file") as HTMLInputElement;

  const paint = () => {
    assessmentPanel.innerHTML = controller.renderAssessmentPanel();
    delayPanel.innerHTML = controller.renderDelayPanel();
    planPanel.innerHTML = controller.renderPlanPanel();
    formPanel.innerHTML = renderFindingForm(
      config.variables,
      controller.buffer,
      controller.findingError,
    );
  };

  formPanel.addEventListener("change", (event) => {
    const select = event.target as HTMLSelectElement;
    if (select.tagName === "SELECT" && select.value) {
      controller.buffer = { variable: select.name, state: select.value };
    }
  });

  formPanel.addEventListener("submit", (event) => {
    event.preventDefault();
    const timestamp = controller.assessment?.now ?? 0;
    void controller.submitFinding(timestamp).then(paint);
  });

  slider?.addEventListener("input", () => {
    void controller.whatIfDelay(Number(slider.value)).then(paint);
  });

  scenarioInput?.addEventListener("change", async () => {
    const file = scenarioInput.files?.[0];
    if (!file) return;
    const doc = JSON.parse(await file.text());
    await controller.comparePlans(doc);
    paint();
  });

  await controller.refresh(0);
  paint();
  return controller;
}
