/**
 * View state and the reducer that applies server messages to it.
 *
 * Invariants kept here:
 * - the chat transcript order matches server reply order;
 * - exactly one statement is highlighted at a time;
 * - at most one question is in flight (the pending flag);
 * - every rendered string originates from a wire payload.
 */

import type {
  AnswerPayload,
  ServerMessage,
  SnapshotPayload,
  StartedSummary,
} from "./protocol.js";

export type ConnectionStatus = "disconnected" | "connecting" | "connected";

export interface QuestionEntry {
  kind: "question";
  text: string;
}

export interface AnswerEntry {
  kind: "answer";
  answer: AnswerPayload;
  /** how many units are currently shown; starts at 1 (progressive reveal) */
  revealed: number;
}

export interface ErrorEntry {
  kind: "error";
  code: string;
  message: string;
}

export type TranscriptEntry = QuestionEntry | AnswerEntry | ErrorEntry;

export interface ViewState {
  connection: ConnectionStatus;
  summary: StartedSummary | null;
  snapshot: SnapshotPayload | null;
  highlighted: string | null;
  transcript: TranscriptEntry[];
  pending: boolean;
  lastError: string | null;
}

export function initialState(): ViewState {
  return {
    connection: "disconnected",
    summary: null,
    snapshot: null,
    highlighted: null,
    transcript: [],
    pending: false,
    lastError: null,
  };
}

export function connectionChanged(state: ViewState, status: ConnectionStatus): ViewState {
  return { ...state, connection: status, pending: false };
}

/** A question is sendable when connected, non-empty, and nothing is in flight. */
export function canSend(state: ViewState, text: string): boolean {
  return state.connection === "connected" && !state.pending && text.trim().length > 0;
}

/** Record an outgoing question; the caller sends the ask message itself. */
export function questionSent(state: ViewState, text: string): ViewState {
  return {
    ...state,
    pending: true,
    transcript: [...state.transcript, { kind: "question", text }],
  };
}

/** Apply one server message; returns the next state. */
export function applyServer(state: ViewState, message: ServerMessage): ViewState {
  switch (message.type) {
    case "started":
      return {
        ...state,
        summary: message.summary,
        snapshot: null,
        highlighted: null,
        transcript: [],
        pending: false,
        lastError: null,
      };
    case "snapshot":
      return {
        ...state,
        snapshot: message.snapshot,
        highlighted: message.snapshot === null ? null : message.highlight,
      };
    case "answer":
      return {
        ...state,
        pending: false,
        transcript: [
          ...state.transcript,
          { kind: "answer", answer: message.answer, revealed: 1 },
        ],
      };
    case "error":
      return {
        ...state,
        pending: false,
        lastError: message.code,
        transcript: [
          ...state.transcript,
          { kind: "error", code: message.code, message: message.message },
        ],
      };
  }
}

/** Reveal one more unit of the answer bubble at the given transcript index. */
export function revealMore(state: ViewState, index: number): ViewState {
  const entry = state.transcript[index];
  if (!entry || entry.kind !== "answer") {
    return state;
  }
  if (entry.revealed >= entry.answer.units.length) {
    return state;
  }
  const transcript = state.transcript.slice();
  transcript[index] = { ...entry, revealed: entry.revealed + 1 };
  return { ...state, transcript };
}
