// View state: the selected slice, the risk position and walk mode.
// Pure transition functions; the app owns the single current value.

import type { ModelResponse, RiskRef } from "./types.js";

export interface ViewState {
  revision: number;
  sigma: Record<string, number>;
  risk: RiskRef;
  walkAxis: string | null;
  walkStep: number | null;
}

export function contextAxes(model: ModelResponse): string[] {
  return model.document.axes
    .filter((axis) => axis.role === "context")
    .map((axis) => axis.id);
}

export function axisOrder(model: ModelResponse): string[] {
  return model.document.axes.map((axis) => axis.id);
}

export function initialViewState(model: ModelResponse): ViewState {
  const sigma: Record<string, number> = {};
  for (const axis of contextAxes(model)) {
    sigma[axis] = model.document.default_slice?.[axis] ?? 0;
  }
  return {
    revision: model.revision,
    sigma,
    risk: model.document.risk ?? { likelihood: 0, impact: 0 },
    walkAxis: null,
    walkStep: null,
  };
}

export function setContextLevel(
  state: ViewState,
  axis: string,
  level: number,
): ViewState {
  if (!(axis in state.sigma)) {
    throw new Error(`not a context axis: ${axis}`);
  }
  return { ...state, sigma: { ...state.sigma, [axis]: level } };
}

export function setRisk(
  state: ViewState,
  likelihood: number,
  impact: number,
): ViewState {
  return { ...state, risk: { likelihood, impact } };
}

export function startWalk(state: ViewState, axis: string): ViewState {
  return { ...state, walkAxis: axis, walkStep: 0 };
}

export function stopWalk(state: ViewState): ViewState {
  return { ...state, walkAxis: null, walkStep: null };
}

export function nextWalkStep(state: ViewState, stepCount: number): ViewState {
  if (state.walkAxis === null || state.walkStep === null) return state;
  return { ...state, walkStep: (state.walkStep + 1) % stepCount };
}

/** The full state vector (likelihood, impact, contexts in axis order). */
export function fullState(
  state: ViewState,
  order: string[],
): number[] {
  const [likelihoodAxis, impactAxis, ...context] = order;
  void likelihoodAxis;
  void impactAxis;
  return [
    state.risk.likelihood,
    state.risk.impact,
    ...context.map((axis) => state.sigma[axis]),
  ];
}

/** A response computed against another revision means the model changed. */
export function revisionMismatch(
  state: ViewState,
  responseRevision: number,
): boolean {
  return responseRevision !== state.revision;
}
