import numpy as np
import pytest

from egvi import _kernels
from egvi.evalbench import planted_fixture
from egvi.inventory import build_inventory
from egvi.vectorstore import EmbeddingMatrix


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # take the one-time JIT compile out of every timed assertion
    _kernels.warmup()


@pytest.fixture(scope="session")
def fixture():
    return planted_fixture()


@pytest.fixture(scope="session")
def fixture_inventory(fixture):
    inv, errors = build_inventory(
        fixture.matrix,
        "all",
        n=30,
        k=30,
        lam=0.5,
        seed=7,
        min_size=1,
        language="fx",
        provenance="planted-fixture",
    )
    assert not errors
    return inv


@pytest.fixture
def basis3():
    # three orthonormal rows: e1, e2, e3
    return EmbeddingMatrix.from_arrays(["e1", "e2", "e3"], np.eye(3))


def random_unit_rows(rng, n, dim):
    rows = rng.standard_normal((n, dim))
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)
