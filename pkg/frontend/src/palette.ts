/** Operator palette: the precious non-alphabetic symbols, one tap away. */

export const OPERATOR_PALETTE = [
  "^",
  "/",
  "*",
  "+",
  "-",
  "=",
  "..",
  "(",
  ")",
] as const;

export type PaletteSymbol = (typeof OPERATOR_PALETTE)[number];

export interface CaretEdit {
  text: string;
  caret: number;
}

/** Insert at the caret, replacing any selection; caret lands after the symbol. */
export function insertAtCaret(
  text: string,
  selectionStart: number,
  selectionEnd: number,
  symbol: string,
): CaretEdit {
  const start = Math.max(0, Math.min(selectionStart, text.length));
  const end = Math.max(start, Math.min(selectionEnd, text.length));
  return {
    text: text.slice(0, start) + symbol + text.slice(end),
    caret: start + symbol.length,
  };
}
