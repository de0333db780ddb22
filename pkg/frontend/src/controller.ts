// Console state machine, kept DOM-free so contract tests can drive it
// directly.  The app layer owns the actual elements and event wiring.

import { ServiceError, TriageApi } from "./api.js";
import { MutationQueue } from "./queue.js";
import {
  renderAssessment,
  renderDelayReadout,
  renderErrorBanner,
  renderPlanTable,
  type DelayReadout,
} from "./render.js";
import type { AssessmentPayload, PlanPayload } from "./types.js";

export interface FindingBuffer {
  variable: string;
  state: string;
}

export class ConsoleController {
  readonly api: TriageApi;
  readonly session: string;
  private readonly mutations = new MutationQueue();

  assessment: AssessmentPayload | null = null;
  buffer: FindingBuffer = { variable: "", state: "" };
  findingError: string | null = null;

  delay: DelayReadout = {
    delay: 0,
    cost: null,
    action: null,
    pending: false,
    stale: false,
    warning: null,
  };

  plans: PlanPayload[] | null = null;
  planError: { message: string; path: string } | null = null;

  constructor(api: TriageApi, session: string) {
    this.api = api;
    this.session = session;
  }

  renderAssessmentPanel(): string {
    if (this.assessment === null) {
      return renderErrorBanner("no assessment yet; refresh or post a finding");
    }
    return renderAssessment(this.assessment);
  }

  renderDelayPanel(): string {
    return renderDelayReadout(this.delay);
  }

  renderPlanPanel(): string {
    if (this.planError !== null) {
      return renderErrorBanner(this.planError.message, this.planError.path);
    }
    if (this.plans === null) {
      return `<p class="plans-empty">no scenario loaded</p>`;
    }
    return renderPlanTable(this.plans);
  }

  async refresh(now: number, grid?: number[]): Promise<void> {
    this.assessment = await this.api.getAssessment(this.session, now, grid);
  }

  // Mutations are serialized: a second submit fired before the first
  // settles waits for it, and each render reflects its own response.
  submitFinding(timestamp: number): Promise<void> {
    const entry = { ...this.buffer, timestamp };
    return this.mutations.enqueue(async () => {
      try {
        const assessment = await this.api.postFinding(this.session, entry);
        this.assessment = assessment;
        this.buffer = { variable: "", state: "" };
        this.findingError = null;
      } catch (error) {
        if (error instanceof ServiceError) {
          // Surface the service message verbatim; keep the entry buffer.
          this.findingError = error.message;
          return;
        }
        throw error;
      }
    });
  }

  async whatIfDelay(delay: number): Promise<void> {
    const lead = this.assessment?.hypotheses[0];
    const cached = lead?.ecda.find(([d]) => d === delay);
    if (cached) {
      this.delay = {
        delay,
        cost: cached[1],
        action: lead?.best_action ?? null,
        pending: false,
        stale: false,
        warning: null,
      };
      return;
    }
    // Off the cached grid: ask the service rather than interpolate.
    this.delay = { ...this.delay, delay, pending: true };
    try {
      const now = this.assessment?.now ?? 0;
      const cost = await this.api.ecdaAt(this.session, now, delay);
      this.delay = {
        delay,
        cost,
        action: lead?.best_action ?? null,
        pending: false,
        stale: false,
        warning: null,
      };
    } catch (error) {
      const message =
        error instanceof ServiceError ? error.message : "service unreachable";
      this.delay = {
        ...this.delay,
        delay,
        pending: false,
        stale: true,
        warning: message,
      };
    }
  }

  async comparePlans(scenarioDoc: unknown): Promise<void> {
    try {
      const out = await this.api.evaluateScenario(scenarioDoc);
      this.plans = out.plans;
      this.planError = null;
    } catch (error) {
      if (error instanceof ServiceError) {
        this.plans = null;
        this.planError = { message: error.message, path: error.path };
        return;
      }
      throw error;
    }
  }
}
