// Wire types of the model-server HTTP API.

export type AxisRole = "likelihood" | "impact" | "context";

export interface GradeDef {
  id: string;
  rank: number;
  color: string;
}

export interface AxisDef {
  id: string;
  role: AxisRole;
  labels: string[];
  threshold?: number;
  profile?: string[];
}

export interface RiskRef {
  likelihood: number;
  impact: number;
}

export interface ModelDocument {
  format: string;
  name: string;
  grades: GradeDef[];
  axes: AxisDef[];
  risk?: RiskRef;
  default_slice?: Record<string, number>;
}

export interface ModelResponse {
  revision: number;
  document: ModelDocument;
}

export interface AxisInfo {
  id: string;
  labels: string[];
}

export interface SliceResponse {
  revision: number;
  sigma: Record<string, number>;
  likelihood: AxisInfo;
  impact: AxisInfo;
  /** grid[l1][l2] is the grade id at likelihood level l1, impact level l2 */
  grid: string[][];
}

export interface AggregateResponse {
  revision: number;
  sigma: Record<string, number>;
  risk: RiskRef;
  likelihood: string[];
  impact: string[];
  risk_grade: string;
}

export interface WalkStepDef {
  level: number;
  label: string;
  risk_grade: string;
  likelihood: string[];
  impact: string[];
  violations: number;
  digest: string;
}

export interface WalkResponse {
  revision: number;
  axis: string;
  steps: WalkStepDef[];
}

export interface ViolationsResponse {
  revision: number;
  v: number[];
  V: number;
}

export interface SectorDef {
  axis: string;
  start: number;
  end: number;
  center: number;
}

export interface RingDef {
  inner: number;
  outer: number;
  center: number;
}

export interface ThresholdArcDef {
  axis: string;
  radius: number;
  start: number;
  end: number;
}

export interface LayoutResponse {
  revision: number;
  d: number;
  theta0: number;
  sector_width: number;
  sectors: SectorDef[];
  rings: RingDef[][];
  threshold_arcs: ThresholdArcDef[];
}
