/**
 * Chat transcript view models. Answer bubbles reveal units progressively
 * (first sentence visible, the rest one tap away) and concept terms inside
 * answer text become tappable tokens that ask "What is <term>?".
 */

import type { TranscriptEntry } from "./state.js";

export interface TextSegment {
  text: string;
  /** set when the segment is a tappable concept term */
  concept: string | null;
}

export interface BubbleLine {
  segments: TextSegment[];
}

export interface BubbleView {
  role: "user" | "engine" | "notice";
  lines: BubbleLine[];
  /** number of units not yet revealed; 0 means fully expanded */
  hiddenUnits: number;
  transcriptIndex: number;
}

export function questionFor(term: string): string {
  return `What is ${term}?`;
}

export function bubbleViews(
  transcript: TranscriptEntry[],
  concepts: string[],
): BubbleView[] {
  return transcript.map((entry, index) => {
    if (entry.kind === "question") {
      return {
        role: "user" as const,
        lines: [{ segments: [{ text: entry.text, concept: null }] }],
        hiddenUnits: 0,
        transcriptIndex: index,
      };
    }
    if (entry.kind === "error") {
      return {
        role: "notice" as const,
        lines: [
          {
            segments: [
              { text: entry.message, concept: null },
              { text: " Try rephrasing the question.", concept: null },
            ],
          },
        ],
        hiddenUnits: 0,
        transcriptIndex: index,
      };
    }
    const shown = entry.answer.units.slice(0, entry.revealed);
    return {
      role: "engine" as const,
      lines: shown.map((unit) => ({ segments: segment(unit.renderedText, concepts) })),
      hiddenUnits: entry.answer.units.length - entry.revealed,
      transcriptIndex: index,
    };
  });
}

/** Split text so each occurrence of a concept term becomes its own segment. */
export function segment(text: string, concepts: string[]): TextSegment[] {
  if (concepts.length === 0) {
    return [{ text, concept: null }];
  }
  const terms = concepts
    .slice()
    .sort((a, b) => b.length - a.length)
    .map((t) => t.toLowerCase());
  const segments: TextSegment[] = [];
  const words = text.split(/(\b)/); // keep separators
  let plain = "";
  for (const word of words) {
    const lowered = word.toLowerCase();
    if (terms.includes(lowered)) {
      if (plain) {
        segments.push({ text: plain, concept: null });
        plain = "";
      }
      segments.push({ text: word, concept: lowered });
    } else {
      plain += word;
    }
  }
  if (plain) {
    segments.push({ text: plain, concept: null });
  }
  return segments;
}
