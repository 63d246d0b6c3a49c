// Wires the panels to the session service. The UI is a pure view of the
// service state: every mutation is an HTTP call followed by a refetch of
// the summary and the storyboard, never a client-side shortcut.

import { ApiClient, type MessageResponse } from "./api.js";
import { ChatPanel } from "./chat.js";
import { EditorPanel } from "./editor.js";
import { GeneratePanel } from "./generate.js";
import { graphCounts, renderStoryboard } from "./graph.js";
import { Store, type IrTab } from "./state.js";

export interface App {
  store: Store;
  chat: ChatPanel;
  editor: EditorPanel;
  generatePanel: GeneratePanel;
  refresh: () => Promise<void>;
  selectTab: (tab: IrTab, view?: string) => Promise<void>;
  graphContainer: HTMLElement;
}

export function connectMessage(fromView: string, toView: string): string {
  return `Add a navigation connection from ${fromView} to ${toView}.`;
}

export async function createApp(root: HTMLElement, api: ApiClient, sessionId?: string): Promise<App> {
  root.innerHTML = `
    <div class="layout">
      <aside class="left"><div class="chat-host"></div></aside>
      <main class="right">
        <nav class="tabs">
          <button data-tab="storyboard" class="tab active">Storyboard</button>
          <button data-tab="dataModel" class="tab">Data Model</button>
          <button data-tab="skeletons" class="tab">UI Skeletons</button>
        </nav>
        <div class="graph-host"></div>
        <div class="skeleton-picker" hidden></div>
        <div class="editor-host" hidden></div>
        <div class="generate-host"></div>
      </main>
    </div>`;

  const store = new Store();
  const graphContainer = root.querySelector(".graph-host") as HTMLElement;
  const editorHost = root.querySelector(".editor-host") as HTMLElement;
  const picker = root.querySelector(".skeleton-picker") as HTMLElement;

  const summary = sessionId ? await api.getSession(sessionId) : await api.createSession();
  store.applySummary(summary);

  async function refresh(): Promise<void> {
    const state = store.get();
    if (!state.sessionId) return;
    const fresh = await api.getSession(state.sessionId);
    store.applySummary(fresh);
    const storyboard =
      fresh.nodeCount > 0
        ? await api.getStoryboard(state.sessionId)
        : { description: "", nodes: [] };
    store.update({ storyboard });
    renderGraph();
  }

  function renderGraph(): void {
    const state = store.get();
    renderStoryboard(graphContainer, state.storyboard, {
      unreachable: state.unreachable,
      onConnect: (fromView, toView) => {
        void chat.send(connectMessage(fromView, toView));
      },
    });
    const counts = graphCounts(graphContainer);
    const expectedEdges = state.storyboard.nodes.reduce((n, node) => n + node.outgoingEdges.length, 0);
    if (counts.nodes !== state.storyboard.nodes.length || counts.edges !== expectedEdges) {
      throw new Error(
        `graph out of sync: rendered ${counts.nodes}/${counts.edges}, ` +
          `IR has ${state.storyboard.nodes.length}/${expectedEdges}`,
      );
    }
  }

  const onApplied = async (_response: MessageResponse) => {
    await refresh();
  };

  const chat = new ChatPanel(root.querySelector(".chat-host") as HTMLElement, api, store, onApplied);
  const editor = new EditorPanel(editorHost, api, store, onApplied);
  const generatePanel = new GeneratePanel(root.querySelector(".generate-host") as HTMLElement, api, store);

  async function selectTab(tab: IrTab, view?: string): Promise<void> {
    store.update({ activeTab: tab });
    for (const button of root.querySelectorAll<HTMLButtonElement>(".tab")) {
      button.classList.toggle("active", button.dataset.tab === tab);
    }
    graphContainer.hidden = tab !== "storyboard";
    picker.hidden = tab !== "skeletons";
    editorHost.hidden = tab === "storyboard" && !view;
    if (tab === "storyboard") {
      editorHost.hidden = false;
      await editor.load("storyboard");
    } else if (tab === "dataModel") {
      await editor.load("datamodel");
    } else {
      picker.textContent = "";
      for (const node of store.get().storyboard.nodes) {
        const button = document.createElement("button");
        button.className = "skeleton-choice";
        button.textContent = node.swiftUIViewName;
        button.addEventListener("click", () => void editor.load(`skeletons/${node.swiftUIViewName}`));
        picker.appendChild(button);
      }
      const first = view ?? store.get().storyboard.nodes[0]?.swiftUIViewName;
      if (first) {
        await editor.load(`skeletons/${first}`);
      }
    }
  }

  for (const button of root.querySelectorAll<HTMLButtonElement>(".tab")) {
    button.addEventListener("click", () => void selectTab(button.dataset.tab as IrTab));
  }

  await refresh();
  if (store.get().storyboard.nodes.length) {
    await selectTab("storyboard");
  }

  return { store, chat, editor, generatePanel, refresh, selectTab, graphContainer };
}
