import { ApiClient, StaleRevisionError } from "./api.js";
import { decodeCells } from "./grid.js";
import type {
  ColorwayRef,
  ConfigRef,
  PatternRequest,
  RuleMetricsEntry,
  SessionPayload,
  RasterPayload,
} from "./types.js";

export type ViewMode = "pattern" | "cloth-render" | "draft";

export interface EvolutionControls {
  width: number;
  steps: number;
  seed: number;
  boundary: string;
}

export interface StudioState {
  sessionId: string | null;
  revision: number;
  session: SessionPayload | null;
  ruleTable: RuleMetricsEntry[];
  selectedRule: string | null;
  controls: EvolutionControls;
  colorway: ColorwayRef | null;
  viewMode: ViewMode;
  /** Set when a PUT hit a stale revision and the session was refetched. */
  replayPrompt: boolean;
  /** Set when the service could not be reached; cleared on next success. */
  offline: boolean;
}

const DEFAULT_CONTROLS: EvolutionControls = {
  width: 64,
  steps: 48,
  seed: 1,
  boundary: "wrap",
};

/**
 * Single source of UI truth, always derived from the last acknowledged
 * server revision. At most one mutation is in flight per session; edits
 * made while one is pending coalesce into a single follow-up PUT.
 */
export class StudioStore {
  state: StudioState = {
    sessionId: null,
    revision: 0,
    session: null,
    ruleTable: [],
    selectedRule: null,
    controls: { ...DEFAULT_CONTROLS },
    colorway: null,
    viewMode: "pattern",
    replayPrompt: false,
    offline: false,
  };

  private listeners: Array<(state: StudioState) => void> = [];
  private inflight = false;
  private pending: PatternRequest | null = null;
  private fetchedMetrics: RuleMetricsEntry | null = null;

  constructor(private client: ApiClient) {}

  subscribe(listener: (state: StudioState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  async loadRuleSpace(): Promise<void> {
    try {
      this.state.ruleTable = await this.client.sweep();
      this.state.offline = false;
    } catch (error) {
      if (error instanceof TypeError) {
        this.state.offline = true;
      } else {
        throw error;
      }
    }
    this.notify();
  }

  /** Displayed metrics: verbatim from the service, never recomputed. */
  get metrics(): RuleMetricsEntry | null {
    return this.state.session?.document.metrics ?? this.fetchedMetrics;
  }

  get cells(): number[][] {
    const grid = this.state.session?.document.grid;
    return grid ? decodeCells(grid) : [];
  }

  private requestBody(rule: string, config: ConfigRef): PatternRequest {
    const body: PatternRequest = {
      rule: { id: rule, k: 2, r: 1, w: 1 },
      config,
    };
    if (this.state.colorway) body.colorway = this.state.colorway;
    return body;
  }

  private configFromControls(): ConfigRef {
    const { width, steps, seed, boundary } = this.state.controls;
    return {
      width,
      steps,
      boundary,
      init: { mode: "random", seed, density: 0.5 },
    };
  }

  private async adopt(session: SessionPayload): Promise<void> {
    this.state.session = session;
    this.state.sessionId = session.id;
    this.state.revision = session.revision;
    this.state.offline = false;
    const config = session.document.config;
    if (config) {
      this.state.controls = {
        width: config.width,
        steps: config.steps,
        seed: config.init.seed ?? this.state.controls.seed,
        boundary: config.boundary,
      };
    }
    this.fetchedMetrics = session.document.metrics
      ? null
      : await this.client.metrics(session.id);
    this.notify();
  }

  /** Scatter click: create a session for the rule and load its pattern. */
  async openRule(rule: string): Promise<void> {
    this.state.selectedRule = rule;
    const session = await this.client.createPattern(
      this.requestBody(rule, this.configFromControls()),
    );
    await this.adopt(session);
  }

  /** A raster upload produced a session; it joins the workbench as-is. */
  adoptRasterSession(payload: RasterPayload): void {
    this.state.selectedRule = payload.document.rule?.id ?? null;
    void this.adopt(payload);
  }

  setViewMode(mode: ViewMode): void {
    this.state.viewMode = mode;
    this.notify();
  }

  setColorway(colorway: ColorwayRef | null): void {
    this.state.colorway = colorway;
    void this.mutate();
  }

  updateControls(patch: Partial<EvolutionControls>): void {
    this.state.controls = { ...this.state.controls, ...patch };
    void this.mutate();
  }

  /** Toggle one cell of the editable seed row and re-evolve server-side. */
  toggleSeedCell(column: number): void {
    const session = this.state.session;
    if (!session || !session.document.config || !session.document.rule) return;
    const grid = session.document.grid;
    const rows = decodeCells(grid).slice(0, grid.init_rows);
    if (rows.length === 0) return;
    const last = rows[rows.length - 1];
    last[column] = last[column] === 0 ? 1 : 0;
    const config: ConfigRef = {
      ...session.document.config,
      init: { mode: "explicit", rows },
    };
    void this.mutate(this.requestBody(session.document.rule.id, config));
  }

  /** Queue a PUT; while one is in flight, later edits replace the queue. */
  private async mutate(body?: PatternRequest): Promise<void> {
    const session = this.state.session;
    if (!session || !session.document.rule) return;
    this.pending =
      body ??
      this.requestBody(session.document.rule.id, this.configFromControls());
    if (this.inflight) return;
    this.inflight = true;
    try {
      while (this.pending) {
        const next = this.pending;
        this.pending = null;
        try {
          const updated = await this.client.putPattern(
            this.state.sessionId as string,
            next,
            this.state.revision,
          );
          this.state.replayPrompt = false;
          await this.adopt(updated);
        } catch (error) {
          if (error instanceof StaleRevisionError) {
            const fresh = await this.client.getPattern(
              this.state.sessionId as string,
            );
            await this.adopt(fresh);
            this.state.replayPrompt = true;
            this.notify();
          } else {
            throw error;
          }
        }
      }
    } finally {
      this.inflight = false;
    }
  }

  /** Expose mutation completion for tests and callers that must sequence. */
  async flush(): Promise<void> {
    while (this.inflight || this.pending) {
      await new Promise((resolve) => setTimeout(resolve, 0));
    }
  }
}
