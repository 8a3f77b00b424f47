import type { TokenSpan, WirePredicate } from "./api";

export type SpanAction = "remove" | "retain" | "affix";

// A contiguous run of token lines, both ends inclusive. Line k holds the
// k-th letter of the candidate; the "input" header line is not selectable.
export type Span = { start: number; end: number };

export type SpanSelection = {
  startTokenIndex: number;
  endTokenIndex: number;
  chosenAction: SpanAction;
};

export const spanValid = (span: Span, programLength: number): boolean =>
  Number.isInteger(span.start) &&
  Number.isInteger(span.end) &&
  span.start >= 0 &&
  span.start <= span.end &&
  span.end < programLength;

// Affix pins a program prefix, so it is only offered for spans that start
// at the first token.
export const availableActions = (span: Span, programLength: number): SpanAction[] => {
  if (!spanValid(span, programLength)) return [];
  return span.start === 0 ? ["remove", "retain", "affix"] : ["remove", "retain"];
};

// Click-to-select with a shift anchor, in the usual list-selection style:
// a plain click starts a fresh single-line span, shift+click stretches the
// span between the anchor and the clicked line.
export class SelectionModel {
  private anchor: number | null = null;
  span: Span | null = null;

  click(index: number, extend: boolean, programLength: number): void {
    if (!Number.isInteger(index) || index < 0 || index >= programLength) return;
    if (extend && this.anchor !== null) {
      this.span = {
        start: Math.min(this.anchor, index),
        end: Math.max(this.anchor, index),
      };
      return;
    }
    this.anchor = index;
    this.span = { start: index, end: index };
  }

  clear(): void {
    this.anchor = null;
    this.span = null;
  }
}

// The predicate carries exactly the token_ids of the highlighted lines,
// in display order. Nothing is inferred from the rendered text.
export function selectionToPredicate(sel: SpanSelection, tokens: TokenSpan[]): WirePredicate {
  const span = { start: sel.startTokenIndex, end: sel.endTokenIndex };
  if (!spanValid(span, tokens.length)) {
    throw new RangeError(
      `span ${span.start}..${span.end} is out of bounds for a ${tokens.length}-token program`,
    );
  }
  if (sel.chosenAction === "affix" && span.start !== 0) {
    throw new RangeError("affix spans must start at the first token");
  }
  const ids = tokens.slice(span.start, span.end + 1).map((t) => t.token_id);
  return { kind: sel.chosenAction, tokens: ids };
}
