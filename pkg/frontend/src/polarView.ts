// Polar heatmap view built from server data: annular segments per axis
// level, threshold arcs, crosses on the primary axes and one dot per
// context axis. Primary-axis colors come from the aggregate response,
// context-axis colors from the model's per-level profiles.

import { locate, polarToView } from "./hittest.js";
import type {
  AggregateResponse,
  LayoutResponse,
  ModelDocument,
  RiskRef,
} from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const VIEW_SIZE = 640;
export const CENTER = VIEW_SIZE / 2;
export const DISK_RADIUS = 250;

export interface PolarViewData {
  layout: LayoutResponse;
  model: ModelDocument;
  aggregate: AggregateResponse;
  sigma: Record<string, number>;
  risk: RiskRef;
}

function gradeColors(model: ModelDocument): Record<string, string> {
  const colors: Record<string, string> = {};
  for (const grade of model.grades) colors[grade.id] = grade.color;
  return colors;
}

function segmentPath(
  inner: number,
  outer: number,
  start: number,
  end: number,
  largeArc: 0 | 1,
): string {
  const p0 = polarToView(outer, start, CENTER, CENTER, DISK_RADIUS);
  const p1 = polarToView(outer, end, CENTER, CENTER, DISK_RADIUS);
  const ro = DISK_RADIUS * outer;
  let d = `M ${p0.x} ${p0.y} A ${ro} ${ro} 0 ${largeArc} 0 ${p1.x} ${p1.y} `;
  if (inner > 0) {
    const p2 = polarToView(inner, end, CENTER, CENTER, DISK_RADIUS);
    const p3 = polarToView(inner, start, CENTER, CENTER, DISK_RADIUS);
    const ri = DISK_RADIUS * inner;
    d += `L ${p2.x} ${p2.y} A ${ri} ${ri} 0 ${largeArc} 1 ${p3.x} ${p3.y} `;
  } else {
    d += `L ${CENTER} ${CENTER} `;
  }
  return d + "Z";
}

export function renderPolar(svg: SVGSVGElement, data: PolarViewData): void {
  const { layout, model, aggregate, sigma, risk } = data;
  const doc = svg.ownerDocument;
  svg.setAttribute("viewBox", `0 0 ${VIEW_SIZE} ${VIEW_SIZE}`);
  svg.replaceChildren();

  const colors = gradeColors(model);
  const largeArc: 0 | 1 = layout.sector_width > Math.PI ? 1 : 0;

  const perAxisGrades: string[][] = model.axes.map((axis, index) => {
    if (index === 0) return aggregate.likelihood;
    if (index === 1) return aggregate.impact;
    return axis.profile ?? axis.labels.map(() => "");
  });

  const segments = doc.createElementNS(SVG_NS, "g");
  segments.setAttribute("class", "segments");
  layout.sectors.forEach((sector, axisIndex) => {
    layout.rings[axisIndex].forEach((ring, level) => {
      const path = doc.createElementNS(SVG_NS, "path");
      path.setAttribute("class", "segment");
      path.setAttribute("data-axis", sector.axis);
      path.setAttribute("data-level", String(level));
      path.setAttribute(
        "d",
        segmentPath(ring.inner, ring.outer, sector.start, sector.end, largeArc),
      );
      const grade = perAxisGrades[axisIndex][level];
      path.setAttribute("data-grade", grade);
      path.setAttribute("fill", colors[grade] ?? "#dddddd");
      path.setAttribute("stroke", "#555555");
      path.setAttribute("stroke-width", "0.5");
      segments.appendChild(path);
    });
  });
  svg.appendChild(segments);

  const arcs = doc.createElementNS(SVG_NS, "g");
  arcs.setAttribute("class", "threshold-arcs");
  for (const arc of layout.threshold_arcs) {
    const p0 = polarToView(arc.radius, arc.start, CENTER, CENTER, DISK_RADIUS);
    const p1 = polarToView(arc.radius, arc.end, CENTER, CENTER, DISK_RADIUS);
    const radius = DISK_RADIUS * arc.radius;
    const path = doc.createElementNS(SVG_NS, "path");
    path.setAttribute("class", "threshold-arc");
    path.setAttribute("data-axis", arc.axis);
    path.setAttribute(
      "d",
      `M ${p0.x} ${p0.y} A ${radius} ${radius} 0 ${largeArc} 0 ${p1.x} ${p1.y}`,
    );
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", "#000000");
    path.setAttribute("stroke-width", "2.5");
    arcs.appendChild(path);
  }
  svg.appendChild(arcs);

  const markers = doc.createElementNS(SVG_NS, "g");
  markers.setAttribute("class", "markers");
  const crossLevels: Array<[number, number]> = [
    [0, risk.likelihood],
    [1, risk.impact],
  ];
  for (const [axisIndex, level] of crossLevels) {
    const point = locate(layout, axisIndex, level);
    const { x, y } = polarToView(
      point.radius,
      point.angle,
      CENTER,
      CENTER,
      DISK_RADIUS,
    );
    const k = 7;
    const cross = doc.createElementNS(SVG_NS, "path");
    cross.setAttribute("class", "risk-cross");
    cross.setAttribute("data-axis", layout.sectors[axisIndex].axis);
    cross.setAttribute("data-level", String(level));
    cross.setAttribute(
      "d",
      `M ${x - k} ${y - k} L ${x + k} ${y + k} M ${x - k} ${y + k} L ${x + k} ${y - k}`,
    );
    cross.setAttribute("stroke", "#000000");
    cross.setAttribute("stroke-width", "2.5");
    markers.appendChild(cross);
  }
  model.axes.forEach((axis, axisIndex) => {
    if (axis.role !== "context") return;
    const level = sigma[axis.id];
    const point = locate(layout, axisIndex, level);
    const { x, y } = polarToView(
      point.radius,
      point.angle,
      CENTER,
      CENTER,
      DISK_RADIUS,
    );
    const dot = doc.createElementNS(SVG_NS, "circle");
    dot.setAttribute("class", "context-dot");
    dot.setAttribute("data-axis", axis.id);
    dot.setAttribute("data-level", String(level));
    dot.setAttribute("cx", String(x));
    dot.setAttribute("cy", String(y));
    dot.setAttribute("r", "5");
    dot.setAttribute("fill", "#000000");
    markers.appendChild(dot);
  });
  svg.appendChild(markers);

  const labels = doc.createElementNS(SVG_NS, "g");
  labels.setAttribute("class", "axis-labels");
  layout.sectors.forEach((sector) => {
    const { x, y } = polarToView(
      1.12,
      sector.center,
      CENTER,
      CENTER,
      DISK_RADIUS,
    );
    const text = doc.createElementNS(SVG_NS, "text");
    text.setAttribute("class", "axis-label");
    text.setAttribute("x", String(x));
    text.setAttribute("y", String(y));
    text.setAttribute("text-anchor", "middle");
    text.textContent = sector.axis;
    labels.appendChild(text);
  });
  svg.appendChild(labels);
}

/**
 * Map a pointer event to view-box coordinates. Outside a real layout
 * engine (zero-sized rects) client coordinates are taken as view-box
 * coordinates directly.
 */
export function eventToViewBox(
  svg: SVGSVGElement,
  clientX: number,
  clientY: number,
): { x: number; y: number } {
  const rect = svg.getBoundingClientRect();
  if (rect.width === 0 || rect.height === 0) {
    return { x: clientX, y: clientY };
  }
  return {
    x: ((clientX - rect.left) / rect.width) * VIEW_SIZE,
    y: ((clientY - rect.top) / rect.height) * VIEW_SIZE,
  };
}
