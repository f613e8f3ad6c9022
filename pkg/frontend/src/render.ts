// DOM builders, kept free of fetch/app state so they are easy to
// contract-test against recorded service responses. Numbers are rendered
// with String(...) -- no rounding, no reformatting.

import type { DisambiguateResponse, SenseEntry, TokenInfo } from "./types.js";

export type TokenClickHandler = (token: TokenInfo, element: HTMLElement) => void;

export function renderTokenStrip(
  container: HTMLElement,
  response: DisambiguateResponse,
  onClick: TokenClickHandler
): void {
  container.replaceChildren();
  for (const token of response.tokens) {
    const el = document.createElement("span");
    el.className = token.ambiguous ? "token ambiguous" : "token";
    el.textContent = token.surface;
    el.dataset.start = String(token.start);
    el.dataset.end = String(token.end);
    el.addEventListener("click", () => onClick(token, el));
    container.appendChild(el);
  }
}

export function renderTokenPopup(
  container: HTMLElement,
  token: TokenInfo,
  onBrowse: (word: string) => void
): void {
  container.replaceChildren();
  container.classList.add("open");

  const title = document.createElement("div");
  title.className = "popup-word";
  title.textContent = token.surface;
  container.appendChild(title);

  if (!token.sense) {
    const note = document.createElement("div");
    note.className = "popup-note";
    note.textContent =
      token.n_senses === 1 ? "single sense" : "no sense information";
    container.appendChild(note);
  } else {
    const rows: Array<[string, string]> = [
      ["keyword", token.sense.keyword],
      ["score", String(token.sense.score)],
      ["margin", String(token.sense.margin)],
    ];
    for (const [label, value] of rows) {
      const row = document.createElement("div");
      row.className = `popup-row popup-${label}`;
      const k = document.createElement("span");
      k.className = "popup-label";
      k.textContent = label;
      const v = document.createElement("span");
      v.className = "popup-value";
      v.textContent = value;
      row.append(k, v);
      container.appendChild(row);
    }
  }

  if (token.n_senses > 0) {
    const link = document.createElement("a");
    link.className = "popup-browse";
    link.href = "#";
    link.textContent = `all ${token.n_senses} sense${token.n_senses === 1 ? "" : "s"}`;
    link.addEventListener("click", (ev) => {
      ev.preventDefault();
      onBrowse(token.surface);
    });
    container.appendChild(link);
  }
}

export function closeTokenPopup(container: HTMLElement): void {
  container.replaceChildren();
  container.classList.remove("open");
}

export function renderSenses(
  container: HTMLElement,
  word: string,
  entries: SenseEntry[] | null,
  onMemberClick: (word: string) => void
): void {
  container.replaceChildren();

  const heading = document.createElement("h2");
  heading.textContent = `senses of “${word}”`;
  container.appendChild(heading);

  if (entries === null) {
    const none = document.createElement("div");
    none.className = "no-senses";
    none.textContent = "no senses for this word";
    container.appendChild(none);
    return;
  }

  for (const entry of entries) {
    const card = document.createElement("div");
    card.className = "sense-card";

    const header = document.createElement("div");
    header.className = "sense-header";
    header.textContent = `#${entry.sense_id} ${entry.keyword}`;
    card.appendChild(header);

    const chips = document.createElement("div");
    chips.className = "sense-members";
    for (const member of entry.members) {
      const chip = document.createElement("button");
      chip.className = "member-chip";
      chip.textContent = `${member.word} ${String(member.weight)}`;
      chip.addEventListener("click", () => onMemberClick(member.word));
      chips.appendChild(chip);
    }
    card.appendChild(chips);
    container.appendChild(card);
  }
}

export function showError(banner: HTMLElement, message: string): void {
  banner.textContent = message;
  banner.classList.add("visible");
}

export function clearError(banner: HTMLElement): void {
  banner.textContent = "";
  banner.classList.remove("visible");
}
