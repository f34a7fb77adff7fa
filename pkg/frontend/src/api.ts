/** Typed client for the exploration engine's HTTP API (see docs/api.md). */

export interface RangeJson {
  start: string;
  end: string;
}

export interface NumericRecord {
  date: string;
  value: number;
}

export interface SleepRecordJson {
  date: string;
  bedtime: number;   // minutes relative to the wake day's midnight
  waketime: number;
}

export type ChartRecord = NumericRecord | SleepRecordJson;

export interface NumericStats {
  n: number;
  avg: number | null;
  min: number | null;
  max: number | null;
  sum?: number;
}

export interface MinuteTriple {
  avg: number;
  earliest: number;
  latest: number;
}

export interface SleepStats {
  n: number;
  bedtime: MinuteTriple | null;
  waketime: MinuteTriple | null;
}

export type Stats = NumericStats | SleepStats;

export interface ComparisonJson {
  source: string;
  range_a: RangeJson;
  range_b: RangeJson;
  stats_a: Stats;
  stats_b: Stats;
}

export interface CycleGroupJson {
  id: number;
  label: string;
  stats: Stats;
}

export interface CycleJson {
  source: string;
  cycle: string;
  range: RangeJson;
  groups: CycleGroupJson[];
}

export type OperandJson = { value: number; unit: string | null } | { clock: string } | null;

export interface QueryJson {
  aspect: string;
  source: string;
  comparator: string;
  operand: OperandJson;
  description: string;
  range: RangeJson;
  count: number;
  dates: string[];
}

export interface StateView {
  page: "home" | "detail" | "two_range" | "cyclical";
  range: RangeJson;
  source: string | null;
  reference_date: string;
  comparison: ComparisonJson | null;
  cycle: CycleJson | null;
  query: QueryJson | null;
  charts: Record<string, ChartRecord[]>;
  stats?: Stats;
}

export interface FeedbackJson {
  kind: "executed" | "invalid" | "unrecognized";
  message: string;
  undoable?: boolean;
  suggestion?: string | null;
  reason?: string | null;
}

export interface CommandResponse {
  feedback: FeedbackJson;
  state: StateView;
}

export type PressedKind =
  | "none"
  | "start_date_label"
  | "end_date_label"
  | "aggregation_plot"
  | "data_source_label";

export interface Pressed {
  kind: PressedKind;
  slot?: "a" | "b";
}

export type IntentPayload = { type: string } & Record<string, unknown>;

export function isSleepRecord(record: ChartRecord): record is SleepRecordJson {
  return (record as SleepRecordJson).waketime !== undefined;
}

export function isSleepStats(stats: Stats): stats is SleepStats {
  return (stats as SleepStats).waketime !== undefined;
}

async function expectOk(response: Response): Promise<Response> {
  if (!response.ok) {
    const body = await response.text();
    throw new Error(`HTTP ${response.status}: ${body}`);
  }
  return response;
}

export class SessionClient {
  sessionId: string | null = null;

  constructor(readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async create(): Promise<StateView> {
    const response = await expectOk(
      await fetch(this.url("/api/sessions"), { method: "POST" }),
    );
    const body = await response.json();
    this.sessionId = body.session_id;
    return body.state as StateView;
  }

  async state(): Promise<StateView> {
    const response = await expectOk(
      await fetch(this.url(`/api/sessions/${this.sessionId}/state`)),
    );
    return (await response.json()).state as StateView;
  }

  async command(utterance: string, pressed: Pressed = { kind: "none" }): Promise<CommandResponse> {
    const response = await expectOk(
      await fetch(this.url(`/api/sessions/${this.sessionId}/command`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ utterance, pressed }),
      }),
    );
    return (await response.json()) as CommandResponse;
  }

  async intent(payload: IntentPayload): Promise<CommandResponse> {
    const response = await expectOk(
      await fetch(this.url(`/api/sessions/${this.sessionId}/intent`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
      }),
    );
    return (await response.json()) as CommandResponse;
  }

  async meta(): Promise<{ sources: string[]; reference_date: string }> {
    const response = await expectOk(await fetch(this.url("/api/meta")));
    return await response.json();
  }
}
