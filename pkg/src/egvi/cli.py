"""Command line front end for every pipeline stage.

Diagnostics go to stderr; machine-readable output (--json) goes to stdout
and mirrors the HTTP service schemas.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import evalbench, inventory as inv_mod, service as service_mod
from .disambig import disambiguate_text
from .vectorstore import load_embeddings


def _err(msg: str) -> None:
    print(f"egvi: {msg}", file=sys.stderr)


def cmd_induce(args) -> int:
    t0 = time.monotonic()
    matrix = load_embeddings(args.embeddings, limit=args.limit)
    if args.words == "all":
        words = "all"
    else:
        with open(args.words, "r", encoding="utf-8") as fh:
            words = [line.strip() for line in fh if line.strip()]

    done_mark = {"at": 0}

    def progress(done, total):
        if done - done_mark["at"] >= args.progress_every or done == total:
            done_mark["at"] = done
            print(f"egvi: {done}/{total} words", file=sys.stderr)

    inventory, errors = inv_mod.build_inventory(
        matrix,
        words,
        n=args.n,
        k=args.k,
        lam=getattr(args, "lambda"),
        seed=args.seed,
        min_size=args.min_size,
        language=args.lang,
        provenance=args.source or args.embeddings,
        jobs=args.jobs,
        checkpoint_path=args.checkpoint,
        progress=progress if not args.quiet else None,
    )
    inv_mod.save_inventory(inventory, args.out)
    for word, why in errors.items():
        _err(f"skipped {word!r}: {why}")
    if inventory.entries:
        stats = evalbench.inventory_stats(inventory)
        mean = stats["mean_senses"]
    else:
        mean = float("nan")
    wall = time.monotonic() - t0
    print(
        f"egvi: induced senses for {len(inventory.entries)} words "
        f"({len(errors)} skipped), mean {mean:.2f} senses/word, {wall:.1f}s",
        file=sys.stderr,
    )
    return 0


def cmd_senses(args) -> int:
    inventory = inv_mod.load_inventory(args.inventory)
    entry = inventory.lookup(args.word)
    if entry is None:
        _err(f"no senses for {args.word!r}")
        return 1
    if args.json:
        body = [
            {
                "sense_id": c.sense_id,
                "keyword": c.keyword,
                "members": [{"word": m, "weight": w} for m, w in c.members],
            }
            for c in entry
        ]
        print(json.dumps(body, ensure_ascii=False))
        return 0
    for c in entry:
        members = ", ".join(f"{m} ({w:.3f})" for m, w in c.members)
        print(f"{c.sense_id}\t{c.keyword}\t{members}")
    return 0


def cmd_disambiguate(args) -> int:
    inventory = inv_mod.load_inventory(args.inventory)
    matrix = load_embeddings(args.embeddings, limit=inventory.params.vocab)
    window = "sentence" if args.window is None else args.window
    annotated = disambiguate_text(matrix, inventory, args.text, window)
    if args.json:
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
        print(json.dumps({"lang": inventory.language, "tokens": tokens}, ensure_ascii=False))
        return 0
    for item in annotated:
        if item.result is not None:
            r = item.result
            flag = " (low confidence)" if r.low_confidence else ""
            print(
                f"{item.token.surface}\tsense={r.sense_id}\tkeyword={r.keyword}"
                f"\tscore={r.score:.4f}\tmargin={r.margin:.4f}{flag}"
            )
    return 0


def cmd_eval(args) -> int:
    benchmark = evalbench.load_benchmark(args.benchmark, name=args.benchmark)
    if args.baseline:
        matrix = load_embeddings(args.embeddings, limit=args.limit)
        inventory = None
    else:
        inventory = inv_mod.load_inventory(args.inventory)
        matrix = load_embeddings(args.embeddings, limit=inventory.params.vocab)
    report = evalbench.evaluate_similarity(matrix, inventory, benchmark)
    if args.json:
        print(json.dumps(report.to_dict()))
    else:
        print(f"benchmark   {report.benchmark}")
        print(f"pearson     {report.pearson:.4f}")
        print(f"spearman    {report.spearman:.4f}")
        print(f"pairs used  {report.n_pairs_used}")
        print(f"coverage    {report.coverage:.3f}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    config = service_mod.ServiceConfig.from_file(args.config)
    print("egvi: loading bundles...", file=sys.stderr)
    bundles = service_mod.load_bundles(config)
    app = service_mod.create_app(
        bundles,
        max_text_length=config.max_text_length,
        cors_origins=config.cors_origins,
    )
    print(f"egvi: serving {sorted(bundles)} on port {config.port}", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=config.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egvi",
        description="Word sense induction and disambiguation over word embeddings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("induce", help="build a sense inventory")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=200, help="ego neighborhood size")
    p.add_argument("--k", type=int, default=200, help="edge neighbor-list size")
    p.add_argument("--lambda", type=float, default=0.5, dest="lambda")
    p.add_argument("--limit", type=int, default=100_000, help="vocabulary cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--words", default="all", help="word list file, or 'all'")
    p.add_argument("--lang", default="xx")
    p.add_argument("--source", default=None, help="provenance id for the header")
    p.add_argument("--jobs", type=int, default=0)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--progress-every", type=int, default=500)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("senses", help="show a word's senses")
    p.add_argument("--inventory", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_senses)

    p = sub.add_parser("disambiguate", help="disambiguate a text")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--inventory", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--window", type=int, default=None, help="context half-width")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_disambiguate)

    p = sub.add_parser("eval", help="word similarity evaluation")
    p.add_argument("--embeddings", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--inventory")
    group.add_argument("--baseline", action="store_true")
    p.add_argument("--benchmark", required=True)
    p.add_argument("--limit", type=int, default=100_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        _err(str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
