// Typed client for the session service. All interaction with the backend
// goes through this module; nothing in the UI mutates state any other way.

export interface StoryboardNodeData {
  id: number;
  name: string;
  description: string;
  swiftUIViewName: string;
  outgoingEdges: number[];
}

export interface StoryboardData {
  schemaVersion?: number;
  description: string;
  entryNodeId?: number;
  nodes: StoryboardNodeData[];
}

export interface DiffSection {
  added: string[];
  removed: string[];
  modified: string[];
}

export interface ProjectDiff {
  nodes: DiffSection;
  entities: DiffSection;
  skeletons: DiffSection;
  scaffoldChanged: boolean;
}

export interface StepRecord {
  stage: string;
  target: string;
  startedAt: string;
  endedAt: string;
  providerCallId?: string | null;
}

export interface ChatEntry {
  role: "user" | "assistant";
  text: string;
  timestamp: string;
}

export interface SessionSummary {
  id: string;
  phase: "empty" | "editing" | "generated";
  createdAt: string;
  nodeCount: number;
  entityCount: number;
  skeletonCount: number;
  entryNodeId: number | null;
  unreachableNodes: string[];
  chat: ChatEntry[];
}

export interface MessageResponse {
  reply: string;
  diff: ProjectDiff;
  steps: StepRecord[];
  phase: string;
}

export interface Finding {
  severity: "error" | "warning";
  code: string;
  path: string;
  message: string;
}

export interface ErrorDetail {
  error?: string;
  message?: string;
  report?: { findings: Finding[] };
  [key: string]: unknown;
}

export interface GenerateResult {
  views: { id: number; name: string; swiftUIViewName: string; lines: number }[];
  utilities: string[];
  metrics: { viewCount: number; linesOfCode: number };
  phase: string;
}

export interface NavigationFindingData {
  category: string;
  sourceView: string;
  expectedDestination: string | null;
  line: number | null;
  evidence: string;
}

export interface ReportData {
  navigation: { counts: Record<string, number>; total: number; findings: NavigationFindingData[] };
  compilation: { counts: Record<string, number>; total: number };
  totals: { navigation: number; compilation: number; all: number };
}

export type IrKind = "storyboard" | "datamodel" | `skeletons/${string}`;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: ErrorDetail,
  ) {
    super(detail.message ?? detail.error ?? `request failed with status ${status}`);
  }

  get findings(): Finding[] {
    return this.detail.report?.findings ?? [];
  }
}

type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchFn = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail: ErrorDetail = {};
      try {
        const body = await resp.json();
        detail = (body?.detail ?? body) as ErrorDetail;
      } catch {
        // non-JSON error body; keep the bare status
      }
      throw new ApiError(resp.status, detail);
    }
    return resp;
  }

  async createSession(): Promise<SessionSummary> {
    return (await this.request("/sessions", { method: "POST" })).json();
  }

  async getSession(id: string): Promise<SessionSummary> {
    return (await this.request(`/sessions/${id}`)).json();
  }

  async postMessage(id: string, text: string): Promise<MessageResponse> {
    return (
      await this.request(`/sessions/${id}/messages`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ text }),
      })
    ).json();
  }

  /** Canonical IR JSON text, exactly as the service stores it. */
  async getIrText(id: string, kind: IrKind): Promise<string> {
    return (await this.request(`/sessions/${id}/ir/${kind}`)).text();
  }

  async getStoryboard(id: string): Promise<StoryboardData> {
    return JSON.parse(await this.getIrText(id, "storyboard")) as StoryboardData;
  }

  async putIr(id: string, kind: IrKind, bodyText: string): Promise<MessageResponse> {
    return (
      await this.request(`/sessions/${id}/ir/${kind}`, {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: bodyText,
      })
    ).json();
  }

  async generate(id: string): Promise<GenerateResult> {
    return (await this.request(`/sessions/${id}/generate`, { method: "POST" })).json();
  }

  async getReport(id: string): Promise<ReportData> {
    return (await this.request(`/sessions/${id}/report`)).json();
  }

  exportUrl(id: string): string {
    return `${this.baseUrl}/sessions/${id}/export`;
  }

  /** Server-sent step events; yields each ExecutedStep record as it lands. */
  async *events(id: string): AsyncGenerator<StepRecord> {
    const resp = await this.request(`/sessions/${id}/events`);
    if (!resp.body) {
      return;
    }
    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    while (true) {
      const { done, value } = await reader.read();
      if (done) {
        break;
      }
      buffer += decoder.decode(value, { stream: true });
      const blocks = buffer.split("\n\n");
      buffer = blocks.pop() ?? "";
      for (const block of blocks) {
        for (const line of block.split("\n")) {
          if (line.startsWith("data: ")) {
            try {
              yield JSON.parse(line.slice(6)) as StepRecord;
            } catch {
              // skip malformed event payloads
            }
          }
        }
      }
    }
  }
}

export function diffSummaryLines(diff: ProjectDiff): string[] {
  const lines: string[] = [];
  const section = (label: string, d: DiffSection) => {
    if (d.added.length) lines.push(`${label} added: ${d.added.join(", ")}`);
    if (d.removed.length) lines.push(`${label} removed: ${d.removed.join(", ")}`);
    if (d.modified.length) lines.push(`${label} modified: ${d.modified.join(", ")}`);
  };
  section("screens", diff.nodes);
  section("entities", diff.entities);
  section("skeletons", diff.skeletons);
  if (diff.scaffoldChanged) lines.push("design scaffold updated");
  if (!lines.length) lines.push("no changes");
  return lines;
}
