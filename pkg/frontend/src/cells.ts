// Conversion between grid cell text and token fields. The grid shows "_"
// for unset values, like the CoNLL-U file does.

import type { TokenData } from "./types";

export function featsToText(feats: Record<string, string>): string {
  const attrs = Object.keys(feats).sort((a, b) =>
    (a.toLowerCase() + a).localeCompare(b.toLowerCase() + b),
  );
  if (attrs.length === 0) return "_";
  return attrs.map((a) => `${a}=${feats[a]}`).join("|");
}

export function depsToText(deps: [number, string][]): string {
  if (deps.length === 0) return "_";
  return deps.map(([h, r]) => `${h}:${r}`).join("|");
}

export function miscToText(misc: [string, string | null][]): string {
  if (misc.length === 0) return "_";
  return misc.map(([k, v]) => (v === null ? k : `${k}=${v}`)).join("|");
}

export function cellText(token: TokenData, column: string): string {
  if (column.startsWith("feat:")) {
    return token.feats[column.slice(5)] ?? "";
  }
  switch (column) {
    case "id":
      return String(token.id);
    case "form":
      return token.form;
    case "lemma":
      return token.lemma ?? "_";
    case "upos":
      return token.upos ?? "_";
    case "xpos":
      return token.xpos ?? "_";
    case "feats":
      return featsToText(token.feats);
    case "head":
      return token.head === null ? "_" : String(token.head);
    case "deprel":
      return token.deprel ?? "_";
    case "deps":
      return depsToText(token.deps);
    case "misc":
      return miscToText(token.misc);
    default:
      return "";
  }
}

/** Apply an edited cell text to a copy of the token; null when the text
 * cannot be parsed for that column. */
export function applyCellText(
  token: TokenData,
  column: string,
  text: string,
): TokenData | null {
  const out: TokenData = JSON.parse(JSON.stringify(token));
  const unset = text.trim() === "" || text.trim() === "_";
  const value = text.trim();
  if (column.startsWith("feat:")) {
    const attr = column.slice(5);
    if (unset) delete out.feats[attr];
    else out.feats[attr] = value;
    return out;
  }
  switch (column) {
    case "form":
      if (unset && value !== "_") return null; // FORM must stay non-empty
      out.form = value || token.form;
      return out;
    case "lemma":
      out.lemma = unset ? null : value;
      return out;
    case "upos":
      out.upos = unset ? null : value;
      return out;
    case "xpos":
      out.xpos = unset ? null : value;
      return out;
    case "deprel":
      out.deprel = unset ? null : value;
      return out;
    case "head": {
      if (unset) {
        out.head = null;
        return out;
      }
      if (!/^[0-9]+$/.test(value)) return null;
      out.head = parseInt(value, 10);
      return out;
    }
    case "feats": {
      if (unset) {
        out.feats = {};
        return out;
      }
      const feats: Record<string, string> = {};
      for (const item of value.split("|")) {
        const eq = item.indexOf("=");
        if (eq <= 0) return null;
        const attr = item.slice(0, eq);
        if (attr in feats) return null;
        feats[attr] = item.slice(eq + 1);
      }
      out.feats = feats;
      return out;
    }
    case "deps": {
      if (unset) {
        out.deps = [];
        return out;
      }
      const deps: [number, string][] = [];
      for (const item of value.split("|")) {
        const colon = item.indexOf(":");
        if (colon <= 0 || colon === item.length - 1) return null;
        const head = item.slice(0, colon);
        if (!/^[0-9]+$/.test(head)) return null;
        deps.push([parseInt(head, 10), item.slice(colon + 1)]);
      }
      out.deps = deps;
      return out;
    }
    case "misc": {
      if (unset) {
        out.misc = [];
        return out;
      }
      out.misc = value.split("|").map((item) => {
        const eq = item.indexOf("=");
        return eq === -1
          ? ([item, null] as [string, null])
          : ([item.slice(0, eq), item.slice(eq + 1)] as [string, string]);
      });
      return out;
    }
    default:
      return null;
  }
}
