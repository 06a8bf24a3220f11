// HTTP client for the sizing service. The UI computes nothing itself;
// every displayed number originates from one of these payloads.

export interface SizeRequest {
  vehicle: Record<string, number>;
  constraints: Record<string, number>;
}

export interface SizeProfile {
  t_s: number[];
  altitude_m: number[];
  climb_rate_mps: number[];
  acceleration_mps2: number[];
  thrust_n: number[];
  phase: string[];
}

export interface FeasiblePlan {
  feasible: true;
  meets_min_duration: boolean;
  t_switch1_s: number;
  t_switch2_s: number;
  t_stop_s: number;
  microgravity_duration_s: number;
  apogee_m: number;
  entry_altitude_m: number;
  entry_speed_mps: number;
  brake_altitude_m: number;
  brake_speed_mps: number;
  stop_altitude_m: number;
  max_climb_speed_mps: number;
  max_descent_speed_mps: number;
  ceiling_m: number;
  park_altitude_m: number;
  profile: SizeProfile;
}

export interface InfeasiblePlan {
  feasible: false;
  violated_constraint: string;
  message: string;
}

export type SizePayload = FeasiblePlan | InfeasiblePlan;

export interface PresetEntry {
  name: string;
  description: string;
  vehicle: Record<string, number>;
  constraints: Record<string, number>;
}

export type SizeOutcome =
  | { kind: "plan"; plan: FeasiblePlan }
  | { kind: "infeasible"; info: InfeasiblePlan }
  | { kind: "invalid"; errors: Record<string, string> }
  | { kind: "cancelled" }
  | { kind: "transport"; message: string };

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

const defaultFetch: FetchLike = (input, init) => fetch(input, init);

export class SizingClient {
  private inflight: AbortController | null = null;

  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = defaultFetch,
  ) {}

  /** POST the form to /api/size. A submission while another request is
   * in flight aborts the older one (cancel-prior). */
  async size(body: SizeRequest): Promise<SizeOutcome> {
    this.inflight?.abort();
    const ctl = new AbortController();
    this.inflight = ctl;
    let resp: Response;
    try {
      resp = await this.fetchFn(`${this.base}/api/size`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
        signal: ctl.signal,
      });
    } catch (err) {
      if (ctl.signal.aborted) return { kind: "cancelled" };
      return { kind: "transport", message: String(err) };
    } finally {
      if (this.inflight === ctl) this.inflight = null;
    }
    if (ctl.signal.aborted) return { kind: "cancelled" };
    if (resp.status === 400) {
      const data = (await resp.json()) as { errors?: Record<string, string> };
      return { kind: "invalid", errors: data.errors ?? {} };
    }
    if (!resp.ok) {
      return { kind: "transport", message: `HTTP ${resp.status}` };
    }
    let data: SizePayload;
    try {
      data = (await resp.json()) as SizePayload;
    } catch (err) {
      return { kind: "transport", message: `bad response body: ${String(err)}` };
    }
    return data.feasible
      ? { kind: "plan", plan: data }
      : { kind: "infeasible", info: data };
  }

  async presets(): Promise<PresetEntry[]> {
    const resp = await this.fetchFn(`${this.base}/api/presets`);
    if (!resp.ok) throw new Error(`presets: HTTP ${resp.status}`);
    const data = (await resp.json()) as { presets: PresetEntry[] };
    return data.presets;
  }

  async health(): Promise<boolean> {
    try {
      const resp = await this.fetchFn(`${this.base}/api/health`);
      return resp.ok;
    } catch {
      return false;
    }
  }
}
