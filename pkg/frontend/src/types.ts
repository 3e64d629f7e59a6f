/** Payload shapes of the design-service HTTP API, mirrored verbatim. */

/** Infinite ratios arrive as the string "inf"; everything else is a number. */
export type Ratio = number | "inf";

export interface RuleMetricsEntry {
  rule_id: string;
  p: number[];
  H: number;
  h: Ratio;
  H_block: number;
  block_len: number;
  max_warp_float: number;
  max_weft_float: number;
  weaveable: boolean;
  reasons: string[];
}

export interface RuleRef {
  id: string;
  k: number;
  r: number;
  w: number;
  table?: number[];
}

export interface InitRef {
  mode: "random" | "single-center" | "explicit";
  seed?: number;
  density?: number;
  state?: number;
  rows?: number[][];
}

export interface ConfigRef {
  width: number;
  steps: number;
  boundary: string;
  init: InitRef;
}

export interface GridRef {
  width: number;
  rows: number;
  k: number;
  init_rows: number;
  rle: number[];
}

export interface ColorwayRef {
  palette: number[][];
  warp_colors: number[];
  weft_colors: number[];
}

export interface PatternDocument {
  format_version: number;
  rule: RuleRef | null;
  config: ConfigRef | null;
  grid: GridRef;
  metrics: RuleMetricsEntry | null;
  colorway: ColorwayRef | null;
}

export interface SessionPayload {
  id: string;
  revision: number;
  document: PatternDocument;
}

export interface FloatReportRef {
  max_warp_float: number;
  max_weft_float: number;
}

export interface RasterPayload extends SessionPayload {
  float_report: FloatReportRef;
  weaveable: boolean;
  reasons: string[];
  flipped: number[][];
}

export interface PatternRequest {
  rule: RuleRef;
  config: ConfigRef;
  colorway?: ColorwayRef;
}

export interface SweepQuery {
  width?: number;
  steps?: number;
  seed?: number;
  density?: number;
  boundary?: string;
  hmax?: number;
  hmin?: number;
  maxfloat?: number;
  blocklen?: number;
}

export interface RasterOptions {
  width: number;
  height: number;
  method?: string;
  threshold?: number;
  polarity?: string;
  repair?: boolean;
}
