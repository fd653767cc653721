import type { Span } from "./types";

// Match spans are byte offsets into the UTF-8 encoding of the comment
// text (always on character boundaries), so slicing happens on bytes.

const encoder = new TextEncoder();
const decoder = new TextDecoder();

export function sliceByBytes(text: string, start: number, end: number): string {
  const bytes = encoder.encode(text);
  return decoder.decode(bytes.subarray(start, end));
}

/** Merge overlapping spans and sort them so rendering walks left to right. */
export function normalizeSpans(spans: Span[]): Span[] {
  const sorted = [...spans].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  const merged: Span[] = [];
  for (const [start, end] of sorted) {
    const last = merged[merged.length - 1];
    if (last && start <= last[1]) {
      last[1] = Math.max(last[1], end);
    } else {
      merged.push([start, end]);
    }
  }
  return merged;
}

/** Render text with <mark class="hit"> wrapped around the given byte spans. */
export function renderHighlighted(text: string, spans: Span[]): DocumentFragment {
  const fragment = document.createDocumentFragment();
  const bytes = encoder.encode(text);
  let cursor = 0;
  for (const [start, end] of normalizeSpans(spans)) {
    if (start > cursor) {
      fragment.append(decoder.decode(bytes.subarray(cursor, start)));
    }
    const mark = document.createElement("mark");
    mark.className = "hit";
    mark.textContent = decoder.decode(bytes.subarray(start, end));
    fragment.append(mark);
    cursor = Math.max(cursor, end);
  }
  if (cursor < bytes.length) {
    fragment.append(decoder.decode(bytes.subarray(cursor)));
  }
  return fragment;
}
