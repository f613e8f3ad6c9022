// Mirrors of the service JSON schemas. The UI never computes senses or
// scores itself; everything displayed comes verbatim from these payloads.

export interface SenseChoice {
  id: number;
  keyword: string;
  score: number;
  margin: number;
}

export interface TokenInfo {
  surface: string;
  start: number;
  end: number;
  ambiguous: boolean;
  n_senses: number;
  sense?: SenseChoice;
}

export interface DisambiguateResponse {
  lang: string;
  tokens: TokenInfo[];
}

export interface LanguageInfo {
  lang: string;
  n_words: number;
  params: {
    N: number;
    K: number;
    lambda: number;
    vocab: number;
    seed: number;
    source: string;
  };
}

export interface SenseMember {
  word: string;
  weight: number;
}

export interface SenseEntry {
  sense_id: number;
  keyword: string;
  members: SenseMember[];
}
