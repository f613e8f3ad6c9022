import type { DisambiguateResponse, LanguageInfo, SenseEntry } from "./types.js";

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

async function readError(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // non-JSON error body; fall through
  }
  return `request failed with status ${response.status}`;
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  async languages(): Promise<LanguageInfo[]> {
    const r = await fetch(`${this.baseUrl}/languages`);
    if (!r.ok) throw new ApiError(r.status, await readError(r));
    return r.json();
  }

  async disambiguate(text: string, lang: string): Promise<DisambiguateResponse> {
    const r = await fetch(`${this.baseUrl}/disambiguate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, lang }),
    });
    if (!r.ok) throw new ApiError(r.status, await readError(r));
    return r.json();
  }

  /** Sense list for a word, or null when the service has none (404). */
  async senses(lang: string, word: string): Promise<SenseEntry[] | null> {
    const r = await fetch(
      `${this.baseUrl}/senses/${encodeURIComponent(lang)}/${encodeURIComponent(word)}`
    );
    if (r.status === 404) return null;
    if (!r.ok) throw new ApiError(r.status, await readError(r));
    return r.json();
  }
}
