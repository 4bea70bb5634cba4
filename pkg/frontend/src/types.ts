/** Payload types mirroring the server's response schemas. */

/** One entry of a distribution result */
export interface DistributionEntry {
  code: number | string;
  label: string;
  count: number;
}

export interface ScalarResult {
  shape: 'scalar';
  value: number | string;
  label: string;
  count: number | null;
  total: number | null;
}

export interface DistributionResult {
  shape: 'distribution';
  column: string;
  entries: DistributionEntry[];
  total: number;
}

export interface SeriesResult {
  shape: 'series';
  points: { year: number; count: number }[];
  direction: 'increasing' | 'decreasing' | 'stable';
  slope: number;
}

export interface CrosstabResult {
  shape: 'crosstab';
  row_column: string;
  col_column: string;
  row_codes: (number | string)[];
  col_codes: (number | string)[];
  counts: number[][];
  row_labels: string[];
  col_labels: string[];
}

export interface SummaryResult {
  shape: 'summary';
  column: string;
  min: number;
  max: number;
  mean: number;
  median: number;
  std: number;
}

export interface PreviewResult {
  shape: 'preview';
  table: string;
  columns: string[];
  rows: (number | string | null)[][];
}

export type ResultPayload =
  | ScalarResult
  | DistributionResult
  | SeriesResult
  | CrosstabResult
  | SummaryResult
  | PreviewResult;

export interface Resolution {
  command: string | null;
  bindings: Record<string, string | number>;
  missing: string[];
  confidence: number;
  alternatives: [string, number][];
  conditions: { column: string; op: string; value: unknown }[];
}

/** One assistant turn as returned by POST /messages */
export interface AssistantTurn {
  kind: 'answer' | 'clarification' | 'no_match' | 'error';
  text: string;
  result: ResultPayload | null;
  resolution: Resolution | null;
}

export interface SessionSummary {
  session: string;
  owner: string;
  started: string;
  query_count: number;
  comment_count: number;
  title: string;
}

/** One record of the append-only session log */
export interface SessionEvent {
  schema: number;
  session: string;
  seq: number;
  ts: string;
  actor: string;
  kind: 'user_query' | 'resolution' | 'execution' | 'assistant_turn' | 'comment';
  payload: Record<string, unknown>;
}

export interface DatasetInfo {
  name: string;
  row_count: number;
}
