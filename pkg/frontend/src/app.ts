// Explorer wiring: fetches everything from the API, renders the matrix and
// polar views side by side, and routes control changes and polar clicks
// back through view-state transitions. Grades are never computed locally;
// a revision change observed in any response triggers a full reload.

import { ApiClient, LatestWins } from "./api.js";
import { buildControls, type ControlsHandle } from "./controls.js";
import { hitTest, viewToPolar } from "./hittest.js";
import { renderMatrix } from "./matrixView.js";
import {
  CENTER,
  DISK_RADIUS,
  eventToViewBox,
  renderPolar,
} from "./polarView.js";
import {
  axisOrder,
  fullState,
  initialViewState,
  nextWalkStep,
  revisionMismatch,
  setContextLevel,
  setRisk,
  startWalk,
  stopWalk,
  type ViewState,
} from "./state.js";
import type {
  LayoutResponse,
  ModelResponse,
  WalkResponse,
} from "./types.js";

export interface ExplorerOptions {
  walkIntervalMs?: number;
}

export interface Explorer {
  ready: Promise<void>;
  root: HTMLElement;
  getState(): ViewState;
  refresh(): Promise<void>;
  reload(): Promise<void>;
  clickPolar(clientX: number, clientY: number): Promise<void>;
  beginWalk(axis: string): Promise<void>;
  endWalk(): void;
}

export function createExplorer(
  root: HTMLElement,
  api: ApiClient,
  options: ExplorerOptions = {},
): Explorer {
  const doc = root.ownerDocument;
  const walkIntervalMs = options.walkIntervalMs ?? 800;
  const guard = new LatestWins();

  let model: ModelResponse;
  let layout: LayoutResponse;
  let state: ViewState;
  let controls: ControlsHandle;
  let walkData: WalkResponse | null = null;
  let walkTimer: ReturnType<typeof setInterval> | null = null;

  root.classList.add("explorer");
  root.innerHTML = `
    <header>
      <h1 class="model-name"></h1>
      <p class="status">
        risk grade: <span class="risk-grade-value">–</span>
        · threshold violations: <span class="violation-count">–</span>
        · revision: <span class="revision-value">–</span>
      </p>
    </header>
    <section class="controls"></section>
    <section class="views">
      <div class="matrix-view"></div>
      <svg class="polar-view" role="img"></svg>
    </section>
    <section class="walk-trajectory"></section>
  `;
  const controlsHost = root.querySelector<HTMLElement>(".controls")!;
  const matrixHost = root.querySelector<HTMLElement>(".matrix-view")!;
  const polarSvg = root.querySelector<SVGSVGElement>("svg.polar-view")!;
  const trajectoryHost = root.querySelector<HTMLElement>(".walk-trajectory")!;

  polarSvg.addEventListener("click", (event) => {
    const mouse = event as MouseEvent;
    void clickPolar(mouse.clientX, mouse.clientY);
  });

  async function reload(): Promise<void> {
    endWalk();
    [model, layout] = await Promise.all([api.getModel(), api.getLayout()]);
    state = initialViewState(model);
    root.querySelector(".model-name")!.textContent = model.document.name;
    controls = buildControls(controlsHost, model.document, {
      onContextChange(axis, level) {
        state = setContextLevel(state, axis, level);
        void refresh();
      },
      onWalkStart(axis) {
        void beginWalk(axis);
      },
      onWalkStop() {
        endWalk();
        void refresh();
      },
    });
    await refresh();
  }

  async function refresh(): Promise<void> {
    const order = axisOrder(model);
    const snapshot = state;
    const result = await guard.run("view", () =>
      Promise.all([
        api.getSlice(snapshot.sigma, order),
        api.getAggregate(snapshot.sigma, order, snapshot.risk),
        api.getViolations(fullState(snapshot, order)),
      ]),
    );
    if (result === null) return; // superseded by a newer refresh
    const [slice, aggregate, violationsBody] = result;
    if (
      revisionMismatch(snapshot, slice.revision) ||
      revisionMismatch(snapshot, aggregate.revision)
    ) {
      await reload();
      return;
    }

    const colors: Record<string, string> = {};
    for (const grade of model.document.grades) colors[grade.id] = grade.color;
    renderMatrix(matrixHost, {
      slice,
      risk: snapshot.risk,
      colors,
      contextLabels: model.document.axes
        .filter((axis) => axis.role === "context")
        .map((axis) => ({
          axis: axis.id,
          label: axis.labels[snapshot.sigma[axis.id]],
        })),
    });
    renderPolar(polarSvg, {
      layout,
      model: model.document,
      aggregate,
      sigma: snapshot.sigma,
      risk: snapshot.risk,
    });
    controls.update(snapshot);
    renderTrajectory();

    root.querySelector(".risk-grade-value")!.textContent = aggregate.risk_grade;
    root.querySelector(".violation-count")!.textContent = String(
      violationsBody.V,
    );
    root.querySelector(".revision-value")!.textContent = String(
      slice.revision,
    );
  }

  function renderTrajectory(): void {
    trajectoryHost.replaceChildren();
    if (walkData === null || state.walkAxis === null) return;
    const list = doc.createElement("ol");
    list.className = "walk-steps";
    walkData.steps.forEach((step, index) => {
      const item = doc.createElement("li");
      item.className = "walk-step";
      item.dataset.level = String(step.level);
      item.textContent =
        `${step.label}: ${step.risk_grade} (violations ${step.violations})`;
      if (index === state.walkStep) item.classList.add("current");
      list.appendChild(item);
    });
    trajectoryHost.appendChild(list);
  }

  async function clickPolar(clientX: number, clientY: number): Promise<void> {
    const { x, y } = eventToViewBox(polarSvg, clientX, clientY);
    const hit = hitTest(layout, viewToPolar(x, y, CENTER, CENTER, DISK_RADIUS));
    if (hit === null) return;
    const axis = model.document.axes[hit.axisIndex];
    if (axis.role === "context") {
      state = setContextLevel(state, axis.id, hit.level);
    } else if (axis.role === "likelihood") {
      state = setRisk(state, hit.level, state.risk.impact);
    } else {
      state = setRisk(state, state.risk.likelihood, hit.level);
    }
    await refresh();
  }

  async function beginWalk(axis: string): Promise<void> {
    endWalk();
    const order = axisOrder(model);
    const fixed: Record<string, number> = {};
    for (const [key, level] of Object.entries(state.sigma)) {
      if (key !== axis) fixed[key] = level;
    }
    walkData = await api.getWalk(axis, fixed, order, state.risk);
    if (revisionMismatch(state, walkData.revision)) {
      walkData = null;
      await reload();
      return;
    }
    state = startWalk(state, axis);
    state = setContextLevel(state, axis, walkData.steps[0].level);
    await refresh();
    walkTimer = setInterval(() => {
      const walkAxis = state.walkAxis;
      if (walkData === null || walkAxis === null) return;
      state = nextWalkStep(state, walkData.steps.length);
      const step = walkData.steps[state.walkStep ?? 0];
      state = setContextLevel(state, walkAxis, step.level);
      void refresh();
    }, walkIntervalMs);
  }

  function endWalk(): void {
    if (walkTimer !== null) {
      clearInterval(walkTimer);
      walkTimer = null;
    }
    walkData = null;
    if (state !== undefined) state = stopWalk(state);
  }

  const ready = reload();

  return {
    ready,
    root,
    getState: () => state,
    refresh,
    reload,
    clickPolar,
    beginWalk,
    endWalk,
  };
}
