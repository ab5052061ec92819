/**
 * DOM shell: wires the WebSocket client to the pure view modules. All state
 * transitions go through state.ts; this file only renders and forwards
 * events. Configuration is a single base-URL setting.
 */

import { barView } from "./bars.js";
import { bubbleViews, questionFor } from "./chat.js";
import { codeRows } from "./codepane.js";
import {
  encodeClientMessage,
  parseServerMessage,
  type ClientMessage,
} from "./protocol.js";
import {
  applyServer,
  canSend,
  connectionChanged,
  initialState,
  questionSent,
  revealMore,
  type ViewState,
} from "./state.js";

const DEFAULT_BASE_URL = "ws://127.0.0.1:8765";

let state: ViewState = initialState();
let socket: WebSocket | null = null;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

function setState(next: ViewState): void {
  state = next;
  render();
}

function send(message: ClientMessage): void {
  if (socket && socket.readyState === WebSocket.OPEN) {
    socket.send(encodeClientMessage(message));
  }
}

function connect(): void {
  const base = (el<HTMLInputElement>("base-url").value || DEFAULT_BASE_URL).replace(/\/$/, "");
  socket?.close();
  socket = new WebSocket(`${base}/ws`);
  setState(connectionChanged(state, "connecting"));
  socket.onopen = () => {
    setState(connectionChanged(state, "connected"));
    const input = el<HTMLInputElement>("array-input")
      .value.split(",")
      .map((part) => parseInt(part.trim(), 10))
      .filter((n) => !Number.isNaN(n));
    send({ type: "start", algo: el<HTMLInputElement>("algo-input").value || "quicksort", input });
  };
  socket.onclose = () => setState(connectionChanged(state, "disconnected"));
  socket.onmessage = (event) => {
    setState(applyServer(state, parseServerMessage(String(event.data))));
  };
}

function askCurrent(): void {
  const box = el<HTMLInputElement>("question-input");
  const text = box.value;
  if (!canSend(state, text)) {
    return;
  }
  setState(questionSent(state, text));
  send({ type: "ask", text });
  box.value = "";
  syncSendButton();
}

function askConcept(term: string): void {
  const text = questionFor(term);
  if (!canSend(state, text)) {
    return;
  }
  setState(questionSent(state, text));
  send({ type: "ask", text });
}

function syncSendButton(): void {
  el<HTMLButtonElement>("send-btn").disabled = !canSend(
    state,
    el<HTMLInputElement>("question-input").value,
  );
}

// ---------------------------------------------------------------------------
// rendering

function render(): void {
  el("status").textContent = state.connection;
  renderBars();
  renderCode();
  renderChat();
  renderStepLabel();
  syncSendButton();
}

function renderBars(): void {
  const view = barView(state.snapshot, state.summary);
  const host = el("bars");
  host.innerHTML = "";
  if (view.notice) {
    const notice = document.createElement("div");
    notice.className = "notice";
    notice.textContent = view.notice;
    host.appendChild(notice);
    return;
  }
  for (const bar of view.bars) {
    const column = document.createElement("div");
    column.className = "bar-col";
    const label = document.createElement("div");
    label.className = "bar-labels";
    label.textContent = bar.labels.join(" ");
    const block = document.createElement("div");
    block.className = "bar";
    block.style.height = `${Math.max(bar.heightPct, 4)}%`;
    const value = document.createElement("div");
    value.className = "bar-value";
    value.textContent = String(bar.value);
    column.append(label, block, value);
    host.appendChild(column);
  }
  if (view.sortedBadge) {
    const badge = document.createElement("div");
    badge.className = "badge";
    badge.textContent = "sorted";
    host.appendChild(badge);
  }
}

function renderCode(): void {
  const host = el("code");
  host.innerHTML = "";
  for (const row of codeRows(state.summary, state.highlighted)) {
    const line = document.createElement("pre");
    line.textContent = row.text;
    line.className = row.highlighted ? "code-line highlight" : "code-line";
    host.appendChild(line);
  }
}

function renderChat(): void {
  const host = el("chat");
  host.innerHTML = "";
  const concepts = state.summary ? state.summary.concepts : [];
  for (const bubble of bubbleViews(state.transcript, concepts)) {
    const div = document.createElement("div");
    div.className = `bubble ${bubble.role}`;
    for (const line of bubble.lines) {
      const p = document.createElement("p");
      for (const seg of line.segments) {
        if (seg.concept) {
          const tap = document.createElement("a");
          tap.href = "#";
          tap.className = "concept";
          tap.textContent = seg.text;
          const term = seg.concept;
          tap.onclick = (event) => {
            event.preventDefault();
            askConcept(term);
          };
          p.appendChild(tap);
        } else {
          p.appendChild(document.createTextNode(seg.text));
        }
      }
      div.appendChild(p);
    }
    if (bubble.hiddenUnits > 0) {
      const more = document.createElement("button");
      more.className = "more";
      more.textContent = `show more (${bubble.hiddenUnits})`;
      const index = bubble.transcriptIndex;
      more.onclick = () => setState(revealMore(state, index));
      div.appendChild(more);
    }
    host.appendChild(div);
  }
  host.scrollTop = host.scrollHeight;
}

function renderStepLabel(): void {
  const label = el("step-label");
  if (!state.summary) {
    label.textContent = "not connected";
  } else if (!state.snapshot) {
    label.textContent = `${state.summary.algo}: no steps`;
  } else {
    label.textContent = `step ${state.snapshot.step + 1} / ${state.summary.steps}`;
  }
}

// ---------------------------------------------------------------------------
// wiring

export function start(): void {
  el("connect-btn").onclick = connect;
  el("step-fwd").onclick = () => send({ type: "step", direction: "forward", count: 1 });
  el("step-back").onclick = () => send({ type: "step", direction: "back", count: 1 });
  el("goto-start").onclick = () => send({ type: "goto", step: 0 });
  el("goto-end").onclick = () => send({ type: "goto", step: "last" });
  el("send-btn").onclick = askCurrent;
  const question = el<HTMLInputElement>("question-input");
  question.oninput = syncSendButton;
  question.onkeydown = (event) => {
    if (event.key === "Enter") {
      askCurrent();
    }
  };
  render();
}

if (typeof document !== "undefined" && document.getElementById("connect-btn")) {
  start();
}
