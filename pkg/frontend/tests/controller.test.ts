import { describe, expect, it } from "vitest";

import { TriageApi } from "../src/api.js";
import { ConsoleController } from "../src/controller.js";
import { assessmentFixture, mockFetch, planFixture } from "./payloads.js";

function controllerWith(routes: Parameters<typeof mockFetch>[0]) {
  const { fetchFn, calls } = mockFetch(routes);
  const api = new TriageApi("", fetchFn);
  const controller = new ConsoleController(api, "s2");
  return { controller, calls };
}

describe("submit_finding", () => {
  it("re-renders from the returned assessment and clears the buffer", async () => {
    const { controller } = controllerWith([
      ["/findings", () => ({ status: 200, body: assessmentFixture() })],
    ]);
    controller.buffer = { variable: "hypotension", state: "present" };
    await controller.submitFinding(0);
    expect(controller.findingError).toBeNull();
    expect(controller.buffer).toEqual({ variable: "", state: "" });
    expect(controller.renderAssessmentPanel()).toContain('data-state="hemorrhage"');
  });

  it("surfaces a 4xx message verbatim and preserves the buffer", async () => {
    const { controller } = controllerWith([
      [
        "/findings",
        () => ({
          status: 400,
          body: {
            code: "invalid_input",
            message: "unknown state 'sideways' for variable 'hypotension'",
            path: "state",
          },
        }),
      ],
    ]);
    controller.buffer = { variable: "hypotension", state: "sideways" };
    await controller.submitFinding(0);
    expect(controller.findingError).toBe(
      "unknown state 'sideways' for variable 'hypotension'",
    );
    expect(controller.buffer).toEqual({ variable: "hypotension", state: "sideways" });
  });

  it("serializes a rapid double-submit; no interleaved stale render", async () => {
    const order: string[] = [];
    let release!: () => void;
    const gate = new Promise<void>((resolve) => (release = resolve));
    let n = 0;
    const { controller } = controllerWith([
      [
        "/findings",
        () => {
          n += 1;
          return { status: 200, body: assessmentFixture() };
        },
      ],
    ]);
    // Wrap postFinding to observe start/finish interleaving; the first
    // call stalls until released.
    const original = controller.api.postFinding.bind(controller.api);
    controller.api.postFinding = async (session, finding) => {
      const id = finding.state;
      order.push(`start:${id}`);
      if (id === "present") await gate;
      const out = await original(session, finding);
      order.push(`end:${id}`);
      return out;
    };

    controller.buffer = { variable: "hypotension", state: "present" };
    const first = controller.submitFinding(1);
    controller.buffer = { variable: "distension", state: "absent" };
    const second = controller.submitFinding(2);

    // Give the queue a tick: the second must NOT have started yet.
    await new Promise((r) => setTimeout(r, 10));
    expect(order).toEqual(["start:present"]);

    release();
    await Promise.all([first, second]);
    expect(order).toEqual([
      "start:present",
      "end:present",
      "start:absent",
      "end:absent",
    ]);
    expect(n).toBe(2);
  });

  it("a failed submit does not block the next one", async () => {
    let attempt = 0;
    const { controller } = controllerWith([
      [
        "/findings",
        () => {
          attempt += 1;
          if (attempt === 1) {
            return {
              status: 400,
              body: { code: "invalid_input", message: "bad state", path: "state" },
            };
          }
          return { status: 200, body: assessmentFixture() };
        },
      ],
    ]);
    controller.buffer = { variable: "hypotension", state: "sideways" };
    await controller.submitFinding(0);
    expect(controller.findingError).toBe("bad state");
    controller.buffer = { variable: "hypotension", state: "present" };
    await controller.submitFinding(1);
    expect(controller.findingError).toBeNull();
    expect(controller.assessment).not.toBeNull();
  });
});

describe("what_if_delay", () => {
  it("reads 0 at slider position 0 without any fetch", async () => {
    const { controller, calls } = controllerWith([]);
    controller.assessment = assessmentFixture();
    await controller.whatIfDelay(0);
    expect(controller.delay.cost).toBe(0);
    expect(calls.length).toBe(0);
    expect(controller.renderDelayPanel()).toContain("<output>0.000</output>");
  });

  it("reads the cached grid value at 30 without any fetch", async () => {
    const { controller, calls } = controllerWith([]);
    controller.assessment = assessmentFixture();
    await controller.whatIfDelay(30);
    expect(controller.delay.cost).toBeCloseTo(37.9, 6);
    expect(calls.length).toBe(0);
  });

  it("fetches ad hoc beyond the grid and shows the value", async () => {
    const offGrid = assessmentFixture();
    offGrid.grid = [42];
    offGrid.hypotheses[0]!.ecda = [[42, 46.218]];
    const { controller, calls } = controllerWith([
      ["/assessment", () => ({ status: 200, body: offGrid })],
    ]);
    controller.assessment = assessmentFixture();
    await controller.whatIfDelay(42);
    expect(calls.length).toBe(1);
    expect(calls[0]!.url).toContain("grid=42");
    expect(controller.delay.cost).toBeCloseTo(46.218, 6);
    expect(controller.delay.stale).toBe(false);
  });

  it("greys out the last-known value when the ad hoc fetch fails", async () => {
    const { controller } = controllerWith([
      [
        "/assessment",
        () => ({
          status: 400,
          body: { code: "invalid_input", message: "grid rejected", path: "grid" },
        }),
      ],
    ]);
    controller.assessment = assessmentFixture();
    await controller.whatIfDelay(30); // cached, ok
    await controller.whatIfDelay(999); // fails
    expect(controller.delay.stale).toBe(true);
    expect(controller.delay.warning).toBe("grid rejected");
    expect(controller.delay.cost).toBeCloseTo(37.9, 6); // last-known retained
    expect(controller.renderDelayPanel()).toContain("stale");
  });
});

describe("compare_plans", () => {
  it("renders the service's plan order with the top row recommended", async () => {
    const { controller } = controllerWith([
      ["/scenarios/evaluate", () => ({ status: 200, body: { plans: planFixture() } })],
    ]);
    await controller.comparePlans({ patients: [] });
    const html = controller.renderPlanPanel();
    expect(html.indexOf("38.102")).toBeLessThan(html.indexOf("54.501"));
    expect(html).toContain("recommended");
  });

  it("shows an error panel, not a table, for an infeasible scenario", async () => {
    const { controller } = controllerWith([
      [
        "/scenarios/evaluate",
        () => ({
          status: 400,
          body: {
            code: "infeasible_scenario",
            message:
              "no feasible plan covers every patient under the declared " +
              "capacities and capability tags",
            path: "",
          },
        }),
      ],
    ]);
    await controller.comparePlans({ patients: [] });
    const html = controller.renderPlanPanel();
    expect(html).toContain("error-banner");
    expect(html).toContain("no feasible plan");
    expect(html).not.toContain("<table");
  });

  it("never goes blank before a scenario is loaded", () => {
    const { controller } = controllerWith([]);
    expect(controller.renderPlanPanel().length).toBeGreaterThan(0);
  });
});

describe("no local decision math", () => {
  it("every displayed number appears in a service payload field", async () => {
    const payload = assessmentFixture();
    const { controller } = controllerWith([
      ["/assessment", () => ({ status: 200, body: payload })],
    ]);
    await controller.refresh(0);
    const html = controller.renderAssessmentPanel();
    const shown = [...html.matchAll(/>(\d+\.\d{3,4})</g)].map((m) => Number(m[1]));
    const fields = new Set<number>();
    const walk = (x: unknown) => {
      if (typeof x === "number") fields.add(x);
      else if (Array.isArray(x)) x.forEach(walk);
      else if (typeof x === "object" && x !== null) {
        Object.values(x).forEach(walk);
      }
    };
    walk(payload);
    for (const value of shown) {
      const traceable = [...fields].some((f) => Math.abs(f - value) < 5e-4);
      expect(traceable, `${value} not traceable to a payload field`).toBe(true);
    }
  });
});
