// Generation panel: trigger code generation, list the produced views with
// their sizes, link the export archive, and badge the navigation report.

import { ApiClient, ApiError } from "./api.js";
import type { Store } from "./state.js";

export class GeneratePanel {
  readonly root: HTMLElement;
  readonly generateButton: HTMLButtonElement;
  private readonly viewList: HTMLElement;
  private readonly metricsBox: HTMLElement;
  private readonly exportLink: HTMLAnchorElement;
  private readonly reportBadge: HTMLElement;
  private readonly reportBox: HTMLElement;

  constructor(
    container: HTMLElement,
    private readonly api: ApiClient,
    private readonly store: Store,
  ) {
    this.root = document.createElement("section");
    this.root.className = "generate-panel";
    this.root.innerHTML = `
      <div class="generate-controls">
        <button type="button" class="generate-run" disabled>Generate code</button>
        <a class="export-link" hidden download>Download export</a>
        <span class="report-badge" hidden></span>
      </div>
      <div class="generate-metrics"></div>
      <ul class="generate-views"></ul>
      <div class="generate-report"></div>`;
    container.appendChild(this.root);
    this.generateButton = this.root.querySelector(".generate-run") as HTMLButtonElement;
    this.viewList = this.root.querySelector(".generate-views") as HTMLElement;
    this.metricsBox = this.root.querySelector(".generate-metrics") as HTMLElement;
    this.exportLink = this.root.querySelector(".export-link") as HTMLAnchorElement;
    this.reportBadge = this.root.querySelector(".report-badge") as HTMLElement;
    this.reportBox = this.root.querySelector(".generate-report") as HTMLElement;

    this.generateButton.addEventListener("click", () => void this.generate());
    store.subscribe(() => this.render());
    this.render();
  }

  render(): void {
    const state = this.store.get();
    // Nothing to generate until a storyboard exists.
    this.generateButton.disabled = state.phase === "empty" || state.busy || !state.sessionId;

    this.viewList.textContent = "";
    this.metricsBox.textContent = "";
    if (state.generated) {
      for (const view of state.generated.views) {
        const item = document.createElement("li");
        item.className = "generated-view";
        item.dataset.view = view.swiftUIViewName;
        item.textContent = `${view.swiftUIViewName} (${view.lines} lines)`;
        this.viewList.appendChild(item);
      }
      const m = state.generated.metrics;
      this.metricsBox.textContent = `${m.viewCount} views, ${m.linesOfCode} lines of code`;
      if (state.sessionId) {
        this.exportLink.href = this.api.exportUrl(state.sessionId);
        this.exportLink.hidden = false;
      }
    } else {
      this.exportLink.hidden = true;
    }

    this.reportBadge.hidden = state.report === null;
    this.reportBox.textContent = "";
    if (state.report) {
      const total = state.report.totals.navigation;
      this.reportBadge.textContent = String(total);
      this.reportBadge.className = `report-badge ${total ? "report-bad" : "report-clean"}`;
      for (const finding of state.report.navigation.findings) {
        const row = document.createElement("div");
        row.className = "report-finding";
        row.textContent = `${finding.sourceView}: ${finding.category}${
          finding.expectedDestination ? ` (expected ${finding.expectedDestination})` : ""
        }`;
        this.reportBox.appendChild(row);
      }
    }
  }

  async generate(): Promise<void> {
    const sessionId = this.store.get().sessionId;
    if (!sessionId) return;
    this.store.update({ busy: true });
    try {
      const generated = await this.api.generate(sessionId);
      const report = await this.api.getReport(sessionId);
      this.store.update({ generated, report, phase: "generated" });
    } catch (error) {
      if (error instanceof ApiError) {
        this.store.update({ queuedNotice: `Generation failed: ${error.message}` });
        return;
      }
      throw error;
    } finally {
      this.store.update({ busy: false });
    }
  }
}
