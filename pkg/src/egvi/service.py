"""HTTP front: disambiguation, sense browsing, and neighbor queries.

One process serves any number of (language -> embeddings + inventory)
bundles, all loaded once at startup and immutable afterwards. Responses are
pure functions of (bundles, request). Every error body is {"error": msg}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .disambig import disambiguate_text
from .inventory import SenseInventory, load_inventory
from .vectorstore import EmbeddingMatrix, OutOfVocabulary, load_embeddings, top_k

DEFAULT_MAX_TEXT = 10_000


@dataclass
class LanguageBundle:
    lang: str
    matrix: EmbeddingMatrix
    inventory: SenseInventory


@dataclass
class ServiceConfig:
    languages: list[dict]
    port: int = 8158
    max_text_length: int = DEFAULT_MAX_TEXT
    cors_origins: list[str] | None = None

    @classmethod
    def from_file(cls, path) -> "ServiceConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls(
            languages=raw["languages"],
            port=int(raw.get("port", 8158)),
            max_text_length=int(raw.get("max_text_length", DEFAULT_MAX_TEXT)),
            cors_origins=raw.get("cors_origins"),
        )


def load_bundles(config: ServiceConfig) -> dict[str, LanguageBundle]:
    bundles = {}
    for spec in config.languages:
        inventory = load_inventory(spec["inventory_path"])
        matrix = load_embeddings(spec["embeddings_path"], limit=inventory.params.vocab)
        bundles[spec["lang"]] = LanguageBundle(
            lang=spec["lang"], matrix=matrix, inventory=inventory
        )
    return bundles


def create_app(
    bundles: dict[str, LanguageBundle] | None = None,
    max_text_length: int = DEFAULT_MAX_TEXT,
    cors_origins: list[str] | None = None,
) -> FastAPI:
    """App factory; pass bundles=None to model the not-yet-loaded state."""
    app = FastAPI(title="egvi word sense disambiguation")
    app.state.bundles = bundles
    app.state.max_text_length = max_text_length

    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException):
        return JSONResponse(status_code=exc.status_code, content={"error": str(exc.detail)})

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors())})

    def bundle_or_404(lang: str) -> LanguageBundle:
        bundles = app.state.bundles or {}
        bundle = bundles.get(lang)
        if bundle is None:
            raise StarletteHTTPException(404, f"language {lang!r} is not loaded")
        return bundle

    @app.get("/health")
    async def health():
        if app.state.bundles is None:
            return JSONResponse(status_code=503, content={"error": "bundles not loaded"})
        return {"status": "ok"}

    @app.get("/languages")
    async def languages():
        out = []
        for lang, bundle in (app.state.bundles or {}).items():
            p = bundle.inventory.params
            out.append(
                {
                    "lang": lang,
                    "n_words": len(bundle.inventory.entries),
                    "params": {
                        "N": p.n,
                        "K": p.k,
                        "lambda": p.lam,
                        "vocab": p.vocab,
                        "seed": p.seed,
                        "source": bundle.inventory.provenance,
                    },
                }
            )
        return out

    @app.post("/disambiguate")
    async def disambiguate_endpoint(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            raise StarletteHTTPException(400, "request body must be JSON")
        if not isinstance(body, dict) or "text" not in body or "lang" not in body:
            raise StarletteHTTPException(400, "fields 'text' and 'lang' are required")
        text, lang = body["text"], body["lang"]
        if not isinstance(text, str) or not isinstance(lang, str):
            raise StarletteHTTPException(400, "'text' and 'lang' must be strings")
        bundle = bundle_or_404(lang)
        if len(text) > app.state.max_text_length:
            raise StarletteHTTPException(
                413, f"text exceeds {app.state.max_text_length} characters"
            )
        annotated = disambiguate_text(bundle.matrix, bundle.inventory, text)
        tokens = []
        for item in annotated:
            tok = {
                "surface": item.token.surface,
                "start": item.token.char_start,
                "end": item.token.char_end,
                "ambiguous": item.ambiguous,
                "n_senses": item.n_senses,
            }
            if item.result is not None:
                tok["sense"] = {
                    "id": item.result.sense_id,
                    "keyword": item.result.keyword,
                    "score": item.result.score,
                    "margin": item.result.margin,
                }
            tokens.append(tok)
        return {"lang": lang, "tokens": tokens}

    @app.get("/senses/{lang}/{word}")
    async def senses(lang: str, word: str):
        bundle = bundle_or_404(lang)
        entry = bundle.inventory.lookup(word)
        if entry is None:
            raise StarletteHTTPException(404, f"no senses for {word!r}")
        return [
            {
                "sense_id": c.sense_id,
                "keyword": c.keyword,
                "members": [{"word": m, "weight": w} for m, w in c.members],
            }
            for c in entry
        ]

    @app.get("/neighbors/{lang}/{word}")
    async def neighbors(lang: str, word: str, k: int = 50):
        bundle = bundle_or_404(lang)
        if k < 1:
            raise StarletteHTTPException(400, "k must be >= 1")
        try:
            wid = bundle.matrix.word_id(word)
        except OutOfVocabulary:
            raise StarletteHTTPException(404, f"word {word!r} not in vocabulary")
        hits = top_k(bundle.matrix, bundle.matrix.vectors[wid], k, exclude={wid})
        return [{"word": bundle.matrix.words[h.word_id], "score": h.score} for h in hits]

    return app
