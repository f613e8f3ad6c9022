// Wiring-level behavior: empty submits send nothing, service errors show
// in the banner, and out-of-order responses are discarded by sequence id.

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api";
import { App, type AppElements } from "../src/app";
import type { DisambiguateResponse } from "../src/types";

const FIXTURES = join(__dirname, "fixtures");
const disambiguate: DisambiguateResponse = JSON.parse(
  readFileSync(join(FIXTURES, "disambiguate.json"), "utf-8")
);
const languages = JSON.parse(
  readFileSync(join(FIXTURES, "languages.json"), "utf-8")
);

function makeDom(): AppElements {
  document.body.innerHTML = `
    <div id="error-banner"></div>
    <form id="sentence-form">
      <select id="language"></select>
      <input id="sentence" type="text">
      <button type="submit">go</button>
    </form>
    <div id="token-strip"></div>
    <div id="token-popup"></div>
    <section id="sense-browser"></section>
  `;
  return {
    languageSelect: document.getElementById("language") as HTMLSelectElement,
    form: document.getElementById("sentence-form") as HTMLFormElement,
    input: document.getElementById("sentence") as HTMLInputElement,
    strip: document.getElementById("token-strip")!,
    popup: document.getElementById("token-popup")!,
    browser: document.getElementById("sense-browser")!,
    banner: document.getElementById("error-banner")!,
  };
}

function stubApi(over: Partial<ApiClient>): ApiClient {
  return {
    languages: async () => languages,
    disambiguate: async () => disambiguate,
    senses: async () => null,
    ...over,
  } as ApiClient;
}

let el: AppElements;

beforeEach(() => {
  el = makeDom();
});

describe("App", () => {
  it("fills the language dropdown from /languages", async () => {
    const app = new App(stubApi({}), el);
    await app.start();
    const options = [...el.languageSelect.options].map((o) => o.value);
    expect(options).toEqual(languages.map((l: { lang: string }) => l.lang));
  });

  it("empty input clears the strip and sends no request", async () => {
    const spy = vi.fn(async () => disambiguate);
    const app = new App(stubApi({ disambiguate: spy }), el);
    await app.start();
    el.strip.innerHTML = "<span>stale</span>";
    el.input.value = "   ";
    await app.submit();
    expect(spy).not.toHaveBeenCalled();
    expect(el.strip.childNodes.length).toBe(0);
  });

  it("renders the strip and inspects tokens end to end", async () => {
    const app = new App(stubApi({}), el);
    await app.start();
    el.input.value = "s1m00 s1m01 hub s1m02 s1m03";
    await app.submit();
    const tokens = [...el.strip.querySelectorAll(".token")];
    expect(tokens.map((t) => t.textContent)).toEqual(
      disambiguate.tokens.map((t) => t.surface)
    );
    (tokens[2] as HTMLElement).click();
    expect(el.popup.classList.contains("open")).toBe(true);
    expect(el.popup.querySelector(".popup-word")!.textContent).toBe("hub");
    expect(tokens[2].classList.contains("selected")).toBe(true);
    (tokens[0] as HTMLElement).click();
    expect(tokens[2].classList.contains("selected")).toBe(false);
    expect(tokens[0].classList.contains("selected")).toBe(true);
  });

  it("shows service errors in the banner", async () => {
    const app = new App(
      stubApi({
        disambiguate: async () => {
          throw new Error("language 'zz' is not loaded");
        },
      }),
      el
    );
    await app.start();
    el.input.value = "anything";
    await app.submit();
    expect(el.banner.classList.contains("visible")).toBe(true);
    expect(el.banner.textContent).toContain("not loaded");
  });

  it("discards stale responses by sequence number", async () => {
    const empty: DisambiguateResponse = { lang: "fx", tokens: [] };
    let resolveFirst!: (r: DisambiguateResponse) => void;
    const first = new Promise<DisambiguateResponse>((res) => (resolveFirst = res));
    const responses = [first, Promise.resolve(disambiguate)];
    const app = new App(
      stubApi({ disambiguate: vi.fn(() => responses.shift()!) }),
      el
    );
    await app.start();

    el.input.value = "slow request";
    const inFlight = app.submit();
    el.input.value = "fast request";
    await app.submit(); // second request wins
    resolveFirst(empty); // first finally resolves, must be ignored
    await inFlight;

    const tokens = [...el.strip.querySelectorAll(".token")];
    expect(tokens.map((t) => t.textContent)).toEqual(
      disambiguate.tokens.map((t) => t.surface)
    );
  });
});
