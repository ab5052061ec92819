/**
 * Wire protocol types mirroring the session service schema, plus strict
 * parsing so the UI never renders text it did not receive.
 */

export interface StartMessage {
  type: "start";
  algo: string;
  input: number[];
}

export interface AskMessage {
  type: "ask";
  text: string;
}

export interface StepMessage {
  type: "step";
  direction: "forward" | "back";
  count: number;
}

export interface GotoMessage {
  type: "goto";
  step: number | "last";
}

export interface StateMessage {
  type: "state";
}

export type ClientMessage =
  | StartMessage
  | AskMessage
  | StepMessage
  | GotoMessage
  | StateMessage;

export interface ListingRow {
  statement: string;
  indent: number;
  source: string;
}

export interface StartedSummary {
  algo: string;
  goal: string;
  input: number[];
  steps: number;
  finalData: number[];
  listing: ListingRow[];
  concepts: string[];
}

export interface ActionPayload {
  action: string;
  objects: [string, number][];
  values: Record<string, number>;
  op?: string;
  outcome?: boolean;
}

export interface SnapshotPayload {
  step: number;
  node: string;
  statement: string;
  callPath: { statement: string; args: Record<string, number> }[];
  bindings: Record<string, number>;
  data: number[];
  action: ActionPayload;
}

export interface AnswerUnit {
  kind: string;
  renderedText: string;
  sourceNodeId: string | null;
  conceptTerm: string | null;
}

export interface AnswerPayload {
  text: string;
  types: string[];
  answerNodeIds: string[];
  stepUsed: number | null;
  units: AnswerUnit[];
  clamped: boolean;
}

export interface StartedMessage {
  type: "started";
  summary: StartedSummary;
}

export interface SnapshotMessage {
  type: "snapshot";
  snapshot: SnapshotPayload | null;
  highlight: string | null;
}

export interface AnswerMessage {
  type: "answer";
  answer: AnswerPayload;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  message: string;
}

export type ServerMessage =
  | StartedMessage
  | SnapshotMessage
  | AnswerMessage
  | ErrorMessage;

export function encodeClientMessage(message: ClientMessage): string {
  return JSON.stringify(message);
}

/** Parse one server frame; throws on anything that is not a known message. */
export function parseServerMessage(raw: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    throw new Error(`server sent invalid JSON: ${raw.slice(0, 80)}`);
  }
  if (typeof data !== "object" || data === null) {
    throw new Error("server message is not an object");
  }
  const message = data as Record<string, unknown>;
  switch (message.type) {
    case "started":
      if (typeof message.summary !== "object" || message.summary === null) {
        throw new Error("started message missing summary");
      }
      return message as unknown as StartedMessage;
    case "snapshot":
      if (!("snapshot" in message)) {
        throw new Error("snapshot message missing snapshot field");
      }
      return message as unknown as SnapshotMessage;
    case "answer":
      if (typeof message.answer !== "object" || message.answer === null) {
        throw new Error("answer message missing answer");
      }
      return message as unknown as AnswerMessage;
    case "error":
      if (typeof message.code !== "string" || typeof message.message !== "string") {
        throw new Error("error message missing code/message");
      }
      return message as unknown as ErrorMessage;
    default:
      throw new Error(`unknown server message type: ${String(message.type)}`);
  }
}
