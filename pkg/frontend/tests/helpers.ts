import type { SentenceData, TokenData } from "../src/types";

export function token(id: number, form: string, extra: Partial<TokenData> = {}): TokenData {
  return {
    id, form, lemma: null, upos: null, xpos: null, feats: {},
    head: null, deprel: null, deps: [], misc: [],
    ...extra,
  };
}

/** The running example: 7 tokens, MWT 4-5 "yoktu", unannotated. */
export function figSentence(): SentenceData {
  const text = "Sel sularında neler yoktu ki...";
  return {
    sent_id: "fig1",
    text,
    comments: ["# sent_id = fig1", `# text = ${text}`],
    tokens: [
      token(1, "Sel"),
      token(2, "sularında"),
      token(3, "neler"),
      token(4, "yok"),
      token(5, "tu"),
      token(6, "ki"),
      token(7, "..."),
    ],
    mwts: [{ first_id: 4, last_id: 5, form: "yoktu", misc: [] }],
  };
}

/** Fully annotated variant, validation-clean. */
export function figAnnotated(): SentenceData {
  const sent = figSentence();
  const ann: Record<number, [string, string, number, string]> = {
    1: ["sel", "NOUN", 2, "nmod"],
    2: ["su", "NOUN", 4, "obl"],
    3: ["ne", "PRON", 4, "nsubj"],
    4: ["yok", "ADJ", 0, "root"],
    5: ["i", "AUX", 4, "cop"],
    6: ["ki", "PART", 4, "discourse"],
    7: ["...", "PUNCT", 4, "punct"],
  };
  for (const tok of sent.tokens) {
    const [lemma, upos, head, deprel] = ann[tok.id];
    Object.assign(tok, { lemma, upos, head, deprel });
  }
  return sent;
}

export function press(
  target: Element | Document,
  key: string,
  opts: { ctrl?: boolean; shift?: boolean; alt?: boolean } = {},
): void {
  const el = target instanceof Document ? target.activeElement ?? target.body : target;
  (el as Element).dispatchEvent(
    new KeyboardEvent("keydown", {
      key,
      ctrlKey: opts.ctrl ?? false,
      shiftKey: opts.shift ?? false,
      altKey: opts.alt ?? false,
      bubbles: true,
      cancelable: true,
    }),
  );
}

/** Type into the currently active input: set the value, fire input events. */
export function typeInto(input: HTMLInputElement | HTMLTextAreaElement, text: string): void {
  input.value = text;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

const POINTER_EVENTS = [
  "mousedown", "mouseup", "click", "dblclick", "contextmenu",
  "pointerdown", "pointerup", "mousemove", "wheel",
];

/** Counts any pointer activity during a test; the keyboard-completeness
 * criterion demands the count stays zero. */
export function installPointerGuard(): () => number {
  let count = 0;
  const bump = () => {
    count += 1;
  };
  for (const name of POINTER_EVENTS) {
    document.addEventListener(name, bump, true);
  }
  return () => count;
}
