// 2D slice view: a colored likelihood-by-impact table with the current
// context selection as a header and a framed risk cell. Every grade shown
// here comes from the slice response; the client never grades states.

import type { RiskRef, SliceResponse } from "./types.js";

export interface MatrixViewData {
  slice: SliceResponse;
  risk: RiskRef;
  colors: Record<string, string>;
  contextLabels: { axis: string; label: string }[];
}

export function renderMatrix(container: HTMLElement, data: MatrixViewData): void {
  const { slice, risk, colors } = data;
  const doc = container.ownerDocument;
  container.replaceChildren();

  const header = doc.createElement("div");
  header.className = "context-header";
  for (const { axis, label } of data.contextLabels) {
    const item = doc.createElement("span");
    item.className = "context-item";
    item.dataset.axis = axis;
    item.textContent = `${axis}: ${label}`;
    header.appendChild(item);
  }
  container.appendChild(header);

  const table = doc.createElement("table");
  table.className = "matrix";
  const n1 = slice.likelihood.labels.length;
  const n2 = slice.impact.labels.length;

  for (let l2 = n2 - 1; l2 >= 0; l2--) {
    const row = doc.createElement("tr");
    const rowLabel = doc.createElement("th");
    rowLabel.scope = "row";
    rowLabel.textContent = slice.impact.labels[l2];
    row.appendChild(rowLabel);
    for (let l1 = 0; l1 < n1; l1++) {
      const cell = doc.createElement("td");
      const grade = slice.grid[l1][l2];
      cell.className = "cell";
      cell.dataset.l1 = String(l1);
      cell.dataset.l2 = String(l2);
      cell.dataset.grade = grade;
      cell.style.backgroundColor = colors[grade] ?? "#ffffff";
      cell.title = `${slice.likelihood.labels[l1]} / ${slice.impact.labels[l2]}: ${grade}`;
      if (l1 === risk.likelihood && l2 === risk.impact) {
        cell.classList.add("risk-cell");
      }
      row.appendChild(cell);
    }
    table.appendChild(row);
  }

  const footer = doc.createElement("tr");
  footer.appendChild(doc.createElement("th"));
  for (let l1 = 0; l1 < n1; l1++) {
    const colLabel = doc.createElement("th");
    colLabel.scope = "col";
    colLabel.textContent = slice.likelihood.labels[l1];
    footer.appendChild(colLabel);
  }
  table.appendChild(footer);
  container.appendChild(table);
}
