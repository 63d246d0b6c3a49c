// Client-side session state: a pure mirror of what the service reports.
// Panels render from this store and never mutate anything directly; every
// change flows through the HTTP API and lands here via refresh.

import type {
  ChatEntry,
  GenerateResult,
  ReportData,
  SessionSummary,
  StepRecord,
  StoryboardData,
} from "./api.js";

export type IrTab = "storyboard" | "dataModel" | "skeletons";

export interface UiSessionState {
  sessionId: string | null;
  phase: "empty" | "editing" | "generated";
  chat: ChatEntry[];
  storyboard: StoryboardData;
  unreachable: string[];
  activeTab: IrTab;
  stepEvents: StepRecord[];
  busy: boolean;
  queuedNotice: string | null;
  generated: GenerateResult | null;
  report: ReportData | null;
}

export function initialState(): UiSessionState {
  return {
    sessionId: null,
    phase: "empty",
    chat: [],
    storyboard: { description: "", nodes: [] },
    unreachable: [],
    activeTab: "storyboard",
    stepEvents: [],
    busy: false,
    queuedNotice: null,
    generated: null,
    report: null,
  };
}

export class Store {
  private state = initialState();
  private listeners = new Set<(state: UiSessionState) => void>();

  get(): UiSessionState {
    return this.state;
  }

  update(patch: Partial<UiSessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  subscribe(listener: (state: UiSessionState) => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  applySummary(summary: SessionSummary): void {
    this.update({
      sessionId: summary.id,
      phase: summary.phase,
      chat: summary.chat,
      unreachable: summary.unreachableNodes,
    });
  }
}
