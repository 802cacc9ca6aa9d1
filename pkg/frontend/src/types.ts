// JSON payload shapes of the session service (irVersion 1).

export const SUPPORTED_IR_VERSION = 1;

export interface Widget {
  kind: "entry" | "slider" | "readonly" | "preset_menu" | "point_handle";
  symbol: string;
  name?: string;
  unit?: string;
  default?: number | number[] | number[][];
  rerun?: boolean;
  // slider
  from?: number;
  to?: number;
  resolution?: number;
  // matrix entry
  matrix?: boolean;
  // preset menu
  members?: string[];
  instances?: { name: string; values: Record<string, number> }[];
  // point handle
  x1Symbol?: string;
  x2Symbol?: string;
  constraint?: string;
}

export interface Page {
  kind: "params" | "notes" | "about";
  title: string;
  widgets?: Widget[];
  paragraphs?: string[];
  about?: { title: string; author: string; date: string; keywords: string[] };
}

export interface UiForm {
  irVersion: number;
  docId: string;
  language: string | null;
  title: string;
  languages: string[];
  pages: Page[];
}

export interface Series {
  abscissa: string;
  x: (number | null)[];
  y: (number | null)[];
}

export interface RunResult {
  series: Record<string, Series>;
  fields2d: Record<string, unknown>;
  points: Record<string, [number, number]>;
  traces: Record<string, [number, number][][]>;
  scalars: Record<string, number>;
  meta: Record<string, { role: string; name: string; unit: string; abscissa: string }>;
  diagnostics: { warnings: string[]; [key: string]: unknown };
}

export interface RunPayload {
  runCounter: number;
  warnings: string[];
  result: RunResult;
}

export interface CreateSessionPayload extends RunPayload {
  sessionId: string;
  uiForm: UiForm;
}

export interface LanguagePayload extends RunPayload {
  uiForm: UiForm;
}

export interface PointPayload extends RunPayload {
  point: { x: number; y: number };
}

export interface SimulationInfo {
  docId: string;
  title: string;
  keywords: string[];
  languages: string[];
}

export type ParamValue = number | number[][];
