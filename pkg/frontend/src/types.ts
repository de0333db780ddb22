// Wire types for the decision service's JSON payloads, plus shape
// validators.  The console displays service numbers verbatim; the only
// client-side logic is checking that a payload has the shape we render.

export interface PosteriorPayload {
  variable: string;
  states: string[];
  weights: number[];
  ranked: [string, number][];
}

export interface VoiOutcome {
  state: string;
  probability: number;
  best_action: string;
  expected_utility: number;
}

export interface VoiEntryPayload {
  variable: string;
  evi: number;
  observed: boolean;
  outcomes: VoiOutcome[];
}

export interface VoiPayload {
  time: number;
  entries: VoiEntryPayload[];
}

export interface HypothesisPayload {
  variable: string;
  posterior: PosteriorPayload;
  best_action: string;
  expected_utility: number;
  ecda: [number, number][];
  criticality: number;
  comprehensive_ecda: number;
  voi: VoiPayload;
}

export interface LoadAndGoPayload {
  ecda_load_and_go: number;
  ecda_with_treatment: number;
  recommendation: string;
}

export interface AssessmentPayload {
  session: string;
  now: number;
  grid: number[];
  evidence: [string, string, number][];
  log: [string, string, number][];
  hypotheses: HypothesisPayload[];
  load_and_go?: LoadAndGoPayload;
  transport?: Record<string, number>;
}

export interface PlanPayload {
  trips: Record<string, [string, string][]>;
  per_patient: Record<string, number>;
  arrivals: Record<string, { support: [number, number][] }>;
  total: number;
}

export interface ServiceErrorPayload {
  code: string;
  message: string;
  path: string;
}

// Model schema, for generating the finding form.
export interface ModelVariable {
  name: string;
  states: string[];
}

export type Validation<T> =
  | { ok: true; value: T }
  | { ok: false; path: string; message: string };

function fail<T>(path: string, message: string): Validation<T> {
  return { ok: false, path, message };
}

function isRecord(x: unknown): x is Record<string, unknown> {
  return typeof x === "object" && x !== null && !Array.isArray(x);
}

function checkNumber(x: unknown, path: string): Validation<number> {
  if (typeof x !== "number" || Number.isNaN(x)) {
    return fail(path, "expected a number");
  }
  return { ok: true, value: x };
}

function checkString(x: unknown, path: string): Validation<string> {
  if (typeof x !== "string") return fail(path, "expected a string");
  return { ok: true, value: x };
}

function checkPairs(x: unknown, path: string): Validation<[number, number][]> {
  if (!Array.isArray(x)) return fail(path, "expected an array of [t, v] pairs");
  for (let i = 0; i < x.length; i++) {
    const pair = x[i];
    if (!Array.isArray(pair) || pair.length !== 2 ||
        typeof pair[0] !== "number" || typeof pair[1] !== "number") {
      return fail(`${path}[${i}]`, "expected a [number, number] pair");
    }
  }
  return { ok: true, value: x as [number, number][] };
}

function checkPosterior(x: unknown, path: string): Validation<PosteriorPayload> {
  if (!isRecord(x)) return fail(path, "expected a posterior object");
  const variable = checkString(x.variable, `${path}.variable`);
  if (!variable.ok) return variable;
  if (!Array.isArray(x.states) || x.states.some((s) => typeof s !== "string")) {
    return fail(`${path}.states`, "expected an array of state names");
  }
  if (!Array.isArray(x.weights) || x.weights.some((w) => typeof w !== "number")) {
    return fail(`${path}.weights`, "expected an array of numbers");
  }
  if (x.weights.length !== x.states.length) {
    return fail(`${path}.weights`, "weights and states differ in length");
  }
  if (!Array.isArray(x.ranked)) {
    return fail(`${path}.ranked`, "expected ranked [state, weight] pairs");
  }
  return { ok: true, value: x as unknown as PosteriorPayload };
}

function checkVoi(x: unknown, path: string): Validation<VoiPayload> {
  if (!isRecord(x)) return fail(path, "expected a VOI object");
  const time = checkNumber(x.time, `${path}.time`);
  if (!time.ok) return time;
  if (!Array.isArray(x.entries)) {
    return fail(`${path}.entries`, "expected an array of VOI entries");
  }
  for (let i = 0; i < x.entries.length; i++) {
    const e = x.entries[i];
    if (!isRecord(e)) return fail(`${path}.entries[${i}]`, "expected an entry object");
    const variable = checkString(e.variable, `${path}.entries[${i}].variable`);
    if (!variable.ok) return variable;
    const evi = checkNumber(e.evi, `${path}.entries[${i}].evi`);
    if (!evi.ok) return evi;
  }
  return { ok: true, value: x as unknown as VoiPayload };
}

function checkHypothesis(x: unknown, path: string): Validation<HypothesisPayload> {
  if (!isRecord(x)) return fail(path, "expected a hypothesis block");
  const variable = checkString(x.variable, `${path}.variable`);
  if (!variable.ok) return variable;
  const posterior = checkPosterior(x.posterior, `${path}.posterior`);
  if (!posterior.ok) return posterior;
  const action = checkString(x.best_action, `${path}.best_action`);
  if (!action.ok) return action;
  const eu = checkNumber(x.expected_utility, `${path}.expected_utility`);
  if (!eu.ok) return eu;
  const curve = checkPairs(x.ecda, `${path}.ecda`);
  if (!curve.ok) return curve;
  const crit = checkNumber(x.criticality, `${path}.criticality`);
  if (!crit.ok) return crit;
  const voi = checkVoi(x.voi, `${path}.voi`);
  if (!voi.ok) return voi;
  return { ok: true, value: x as unknown as HypothesisPayload };
}

export function validateAssessment(x: unknown): Validation<AssessmentPayload> {
  if (!isRecord(x)) return fail("", "expected an assessment object");
  const session = checkString(x.session, "session");
  if (!session.ok) return session;
  const now = checkNumber(x.now, "now");
  if (!now.ok) return now;
  if (!Array.isArray(x.grid) || x.grid.some((g) => typeof g !== "number")) {
    return fail("grid", "expected an array of delay values");
  }
  if (!Array.isArray(x.hypotheses)) {
    return fail("hypotheses", "expected an array of hypothesis blocks");
  }
  for (let i = 0; i < x.hypotheses.length; i++) {
    const block = checkHypothesis(x.hypotheses[i], `hypotheses[${i}]`);
    if (!block.ok) return block;
  }
  return { ok: true, value: x as unknown as AssessmentPayload };
}

export function validatePlans(x: unknown): Validation<PlanPayload[]> {
  if (!isRecord(x) || !Array.isArray(x.plans)) {
    return fail("plans", "expected a plans array");
  }
  for (let i = 0; i < x.plans.length; i++) {
    const plan = x.plans[i];
    if (!isRecord(plan)) return fail(`plans[${i}]`, "expected a plan object");
    const total = checkNumber(plan.total, `plans[${i}].total`);
    if (!total.ok) return total;
    if (!isRecord(plan.trips)) return fail(`plans[${i}].trips`, "expected trips by asset");
    if (!isRecord(plan.per_patient)) {
      return fail(`plans[${i}].per_patient`, "expected per-patient costs");
    }
  }
  return { ok: true, value: x.plans as unknown as PlanPayload[] };
}

export function validateLoadAndGo(x: unknown): Validation<LoadAndGoPayload> {
  if (!isRecord(x)) return fail("", "expected a load-and-go object");
  const a = checkNumber(x.ecda_load_and_go, "ecda_load_and_go");
  if (!a.ok) return a;
  const b = checkNumber(x.ecda_with_treatment, "ecda_with_treatment");
  if (!b.ok) return b;
  const rec = checkString(x.recommendation, "recommendation");
  if (!rec.ok) return rec;
  return { ok: true, value: x as unknown as LoadAndGoPayload };
}
