// Context steering controls: one labelled drop-down per context axis plus
// walk-mode controls (pick one axis, play/pause). Selectors enumerate the
// axis labels, so an invalid selection cannot be expressed.

import type { ViewState } from "./state.js";
import type { ModelDocument } from "./types.js";

export interface ControlsCallbacks {
  onContextChange(axis: string, level: number): void;
  onWalkStart(axis: string): void;
  onWalkStop(): void;
}

export interface ControlsHandle {
  /** Sync control values to the state without firing callbacks. */
  update(state: ViewState): void;
}

export function buildControls(
  container: HTMLElement,
  model: ModelDocument,
  callbacks: ControlsCallbacks,
): ControlsHandle {
  const doc = container.ownerDocument;
  container.replaceChildren();

  const contextAxes = model.axes.filter((axis) => axis.role === "context");
  const selects = new Map<string, HTMLSelectElement>();

  const slice = doc.createElement("fieldset");
  slice.className = "context-controls";
  const legend = doc.createElement("legend");
  legend.textContent = "Context layer (slice)";
  slice.appendChild(legend);
  for (const axis of contextAxes) {
    const label = doc.createElement("label");
    label.textContent = `${axis.id}: `;
    const select = doc.createElement("select");
    select.className = "context-select";
    select.dataset.axis = axis.id;
    axis.labels.forEach((text, level) => {
      const option = doc.createElement("option");
      option.value = String(level);
      option.textContent = `${level}: ${text}`;
      select.appendChild(option);
    });
    select.addEventListener("change", () => {
      callbacks.onContextChange(axis.id, Number(select.value));
    });
    selects.set(axis.id, select);
    label.appendChild(select);
    slice.appendChild(label);
  }
  container.appendChild(slice);

  const walk = doc.createElement("fieldset");
  walk.className = "walk-controls";
  const walkLegend = doc.createElement("legend");
  walkLegend.textContent = "Context walk";
  walk.appendChild(walkLegend);
  const varySelect = doc.createElement("select");
  varySelect.className = "walk-axis-select";
  for (const axis of contextAxes) {
    const option = doc.createElement("option");
    option.value = axis.id;
    option.textContent = axis.id;
    varySelect.appendChild(option);
  }
  const playButton = doc.createElement("button");
  playButton.className = "walk-toggle";
  playButton.type = "button";
  playButton.textContent = "Play";
  playButton.addEventListener("click", () => {
    if (playButton.dataset.playing === "true") {
      callbacks.onWalkStop();
    } else {
      callbacks.onWalkStart(varySelect.value);
    }
  });
  walk.appendChild(varySelect);
  walk.appendChild(playButton);
  container.appendChild(walk);

  return {
    update(state: ViewState) {
      for (const [axisId, select] of selects) {
        select.value = String(state.sigma[axisId]);
      }
      const playing = state.walkAxis !== null;
      playButton.dataset.playing = String(playing);
      playButton.textContent = playing ? "Pause" : "Play";
      if (state.walkAxis !== null) varySelect.value = state.walkAxis;
      varySelect.disabled = playing;
    },
  };
}
