#!/usr/bin/env python3
"""Record service responses for the frontend contract tests.

Spins up the planted-fixture bundle in-process and dumps the exact bytes of
/languages, /disambiguate and /senses responses under
frontend/tests/fixtures/. Rerun after changing the service schema or the
fixture, then re-run the frontend tests.
"""

import pathlib

from fastapi.testclient import TestClient

from egvi.evalbench import planted_fixture
from egvi.inventory import build_inventory
from egvi.service import LanguageBundle, create_app

OUT = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def main():
    fixture = planted_fixture()
    inventory, errors = build_inventory(
        fixture.matrix, "all", n=30, k=30, lam=0.5, seed=7,
        language="fx", provenance="planted-fixture",
    )
    assert not errors
    bundles = {"fx": LanguageBundle("fx", fixture.matrix, inventory)}
    app = create_app(bundles)

    cluster1 = sorted(w for w, lab in fixture.labels.items() if lab == 1)[:4]
    sentence = " ".join(cluster1[:2] + [fixture.ego_word] + cluster1[2:])

    OUT.mkdir(parents=True, exist_ok=True)
    with TestClient(app) as client:
        (OUT / "languages.json").write_bytes(client.get("/languages").content)
        r = client.post("/disambiguate", json={"text": sentence, "lang": "fx"})
        (OUT / "disambiguate.json").write_bytes(r.content)
        (OUT / "senses_hub.json").write_bytes(client.get("/senses/fx/hub").content)
    (OUT / "sentence.txt").write_text(sentence + "\n")
    print(f"recorded fixtures for sentence: {sentence!r} -> {OUT}")


if __name__ == "__main__":
    main()
