// IR editor: shows the canonical JSON of the selected representation in a
// textarea; applying an edit PUTs it back and renders either the change
// summary or the 422 findings inline, each anchored to its reported path.

import { ApiClient, ApiError, type Finding, type IrKind, type MessageResponse } from "./api.js";
import type { Store } from "./state.js";

export class EditorPanel {
  readonly root: HTMLElement;
  readonly textarea: HTMLTextAreaElement;
  readonly applyButton: HTMLButtonElement;
  private readonly findingsList: HTMLElement;
  private readonly status: HTMLElement;
  private kind: IrKind = "storyboard";

  constructor(
    container: HTMLElement,
    private readonly api: ApiClient,
    private readonly store: Store,
    private readonly onApplied: (response: MessageResponse) => Promise<void> | void,
  ) {
    this.root = document.createElement("section");
    this.root.className = "editor-panel";
    this.root.innerHTML = `
      <div class="editor-status"></div>
      <ul class="editor-findings"></ul>
      <textarea class="editor-text" rows="24" spellcheck="false"></textarea>
      <button type="button" class="editor-apply">Apply edit</button>`;
    container.appendChild(this.root);
    this.textarea = this.root.querySelector(".editor-text") as HTMLTextAreaElement;
    this.applyButton = this.root.querySelector(".editor-apply") as HTMLButtonElement;
    this.findingsList = this.root.querySelector(".editor-findings") as HTMLElement;
    this.status = this.root.querySelector(".editor-status") as HTMLElement;
    this.applyButton.addEventListener("click", () => void this.apply());
  }

  async load(kind: IrKind): Promise<void> {
    const sessionId = this.store.get().sessionId;
    if (!sessionId) return;
    this.kind = kind;
    this.textarea.value = await this.api.getIrText(sessionId, kind);
    this.renderFindings([]);
    this.status.textContent = `Editing ${kind}`;
  }

  renderFindings(findings: Finding[]): void {
    this.findingsList.textContent = "";
    for (const finding of findings) {
      const item = document.createElement("li");
      item.className = `finding finding-${finding.severity}`;
      item.dataset.path = finding.path;
      item.dataset.code = finding.code;
      item.textContent = `${finding.code} at ${finding.path}: ${finding.message}`;
      this.findingsList.appendChild(item);
    }
  }

  async apply(): Promise<void> {
    const sessionId = this.store.get().sessionId;
    if (!sessionId) return;
    try {
      const response = await this.api.putIr(sessionId, this.kind, this.textarea.value);
      await this.onApplied(response);
      await this.load(this.kind);
      this.status.textContent = response.reply;
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        this.renderFindings(error.findings);
        this.status.textContent = "Edit rejected - fix the findings below.";
        return;
      }
      if (error instanceof ApiError && error.status === 409) {
        this.status.textContent = "The session is busy - try again shortly.";
        return;
      }
      throw error;
    }
  }
}
