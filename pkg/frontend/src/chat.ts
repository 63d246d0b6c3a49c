// Chat panel: transcript, input, live step progress, and a change summary
// rendered from the returned diff. A request hitting a busy session (409)
// leaves the typed text in place and shows a queued-input notice.

import { ApiClient, ApiError, diffSummaryLines, type MessageResponse } from "./api.js";
import type { Store } from "./state.js";

export class ChatPanel {
  readonly root: HTMLElement;
  private readonly transcript: HTMLElement;
  private readonly stepFeed: HTMLElement;
  private readonly notice: HTMLElement;
  readonly input: HTMLTextAreaElement;
  readonly sendButton: HTMLButtonElement;
  private lastDiffLines: string[] = [];

  constructor(
    container: HTMLElement,
    private readonly api: ApiClient,
    private readonly store: Store,
    private readonly onApplied: (response: MessageResponse) => Promise<void> | void,
  ) {
    this.root = document.createElement("section");
    this.root.className = "chat-panel";
    this.root.innerHTML = `
      <div class="chat-transcript"></div>
      <div class="chat-steps" aria-live="polite"></div>
      <div class="chat-notice" hidden></div>
      <form class="chat-form">
        <textarea class="chat-input" rows="3"
          placeholder="Describe your app or ask for a change..."></textarea>
        <button type="submit" class="chat-send" disabled>Send</button>
      </form>`;
    container.appendChild(this.root);

    this.transcript = this.root.querySelector(".chat-transcript") as HTMLElement;
    this.stepFeed = this.root.querySelector(".chat-steps") as HTMLElement;
    this.notice = this.root.querySelector(".chat-notice") as HTMLElement;
    this.input = this.root.querySelector(".chat-input") as HTMLTextAreaElement;
    this.sendButton = this.root.querySelector(".chat-send") as HTMLButtonElement;

    this.input.addEventListener("input", () => this.syncSendEnabled());
    (this.root.querySelector(".chat-form") as HTMLFormElement).addEventListener("submit", (event) => {
      event.preventDefault();
      void this.send();
    });
    store.subscribe(() => this.render());
    this.render();
  }

  private syncSendEnabled(): void {
    this.sendButton.disabled = !this.input.value.trim() || this.store.get().busy;
  }

  render(): void {
    const state = this.store.get();
    this.transcript.textContent = "";
    for (const entry of state.chat) {
      const row = document.createElement("div");
      row.className = `chat-message chat-${entry.role}`;
      row.textContent = entry.text;
      this.transcript.appendChild(row);
    }
    if (this.lastDiffLines.length) {
      const summary = document.createElement("div");
      summary.className = "chat-message chat-diff";
      const list = document.createElement("ul");
      list.className = "diff-summary";
      for (const line of this.lastDiffLines) {
        const item = document.createElement("li");
        item.textContent = line;
        list.appendChild(item);
      }
      summary.appendChild(list);
      this.transcript.appendChild(summary);
    }
    this.stepFeed.textContent = "";
    for (const step of state.stepEvents) {
      const row = document.createElement("div");
      row.className = "step-event";
      row.dataset.stage = step.stage;
      row.textContent = step.target === "-" ? step.stage : `${step.stage}: ${step.target}`;
      this.stepFeed.appendChild(row);
    }
    this.notice.hidden = !state.queuedNotice;
    this.notice.textContent = state.queuedNotice ?? "";
    this.syncSendEnabled();
  }

  /** Record the diff of the last applied request; rendered as a summary
   * bubble at the end of the transcript. */
  showDiff(response: MessageResponse): void {
    this.lastDiffLines = diffSummaryLines(response.diff);
    this.render();
  }

  async send(text?: string): Promise<void> {
    const state = this.store.get();
    const message = (text ?? this.input.value).trim();
    if (!message || !state.sessionId) {
      return;
    }
    if (state.busy) {
      this.store.update({
        queuedNotice: "A change is already running - your text is kept, send again when it finishes.",
      });
      return;
    }
    this.store.update({ busy: true, queuedNotice: null, stepEvents: [] });
    const eventsDone = this.consumeEvents(state.sessionId);
    try {
      const response = await this.api.postMessage(state.sessionId, message);
      this.input.value = "";
      await eventsDone;
      await this.onApplied(response);
      this.showDiff(response);
    } catch (error) {
      await eventsDone.catch(() => undefined);
      if (error instanceof ApiError && error.status === 409) {
        // Another operation got there first; keep the input.
        this.store.update({
          queuedNotice: "The session is busy with another change - your text is kept, try again shortly.",
        });
      } else if (error instanceof ApiError) {
        this.store.update({ queuedNotice: `Request failed: ${error.message}` });
      } else {
        throw error;
      }
    } finally {
      this.store.update({ busy: false });
    }
  }

  private async consumeEvents(sessionId: string): Promise<void> {
    try {
      for await (const step of this.api.events(sessionId)) {
        this.store.update({ stepEvents: [...this.store.get().stepEvents, step] });
      }
    } catch {
      // The events channel is best-effort progress reporting.
    }
  }
}
