import { ApiClient } from "./api.js";
import {
  clearError,
  closeTokenPopup,
  renderSenses,
  renderTokenPopup,
  renderTokenStrip,
  showError,
} from "./render.js";
import type { TokenInfo } from "./types.js";

export interface AppElements {
  languageSelect: HTMLSelectElement;
  form: HTMLFormElement;
  input: HTMLInputElement | HTMLTextAreaElement;
  strip: HTMLElement;
  popup: HTMLElement;
  browser: HTMLElement;
  banner: HTMLElement;
}

export class App {
  // monotonically growing request id; responses that come back for an
  // older id than the latest are stale and dropped
  private seq = 0;

  constructor(private api: ApiClient, private el: AppElements) {}

  async start(): Promise<void> {
    this.el.form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.submit();
    });
    try {
      const languages = await this.api.languages();
      this.el.languageSelect.replaceChildren();
      for (const info of languages) {
        const option = document.createElement("option");
        option.value = info.lang;
        option.textContent = `${info.lang} (${info.n_words} words, N=${info.params.N})`;
        this.el.languageSelect.appendChild(option);
      }
      if (languages.length === 0) {
        showError(this.el.banner, "service has no languages loaded");
      }
    } catch (err) {
      showError(this.el.banner, String(err instanceof Error ? err.message : err));
    }
  }

  async submit(): Promise<void> {
    const text = this.el.input.value;
    clearError(this.el.banner);
    closeTokenPopup(this.el.popup);
    if (text.trim() === "") {
      this.el.strip.replaceChildren();
      return; // empty input: clear the strip, send nothing
    }
    const lang = this.el.languageSelect.value;
    const mySeq = ++this.seq;
    try {
      const response = await this.api.disambiguate(text, lang);
      if (mySeq !== this.seq) return; // a newer request superseded this one
      renderTokenStrip(this.el.strip, response, (token, element) =>
        this.inspect(token, element)
      );
    } catch (err) {
      if (mySeq !== this.seq) return;
      showError(this.el.banner, String(err instanceof Error ? err.message : err));
    }
  }

  inspect(token: TokenInfo, element: HTMLElement): void {
    for (const node of this.el.strip.querySelectorAll(".token.selected")) {
      node.classList.remove("selected");
    }
    element.classList.add("selected");
    renderTokenPopup(this.el.popup, token, (word) => void this.browse(word));
  }

  async browse(word: string): Promise<void> {
    const lang = this.el.languageSelect.value;
    try {
      const entries = await this.api.senses(lang, word);
      renderSenses(this.el.browser, word, entries, (member) => void this.browse(member));
    } catch (err) {
      showError(this.el.banner, String(err instanceof Error ? err.message : err));
    }
  }
}

export function boot(): void {
  const byId = (id: string) => {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node;
  };
  const api = new ApiClient(
    (window as unknown as { EGVI_API_URL?: string }).EGVI_API_URL ?? ""
  );
  const app = new App(api, {
    languageSelect: byId("language") as HTMLSelectElement,
    form: byId("sentence-form") as HTMLFormElement,
    input: byId("sentence") as HTMLInputElement,
    strip: byId("token-strip"),
    popup: byId("token-popup"),
    browser: byId("sense-browser"),
    banner: byId("error-banner"),
  });
  void app.start();
}

if (typeof document !== "undefined" && document.getElementById("sentence-form")) {
  boot();
}
