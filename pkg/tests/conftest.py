import math
from pathlib import Path

import pytest

from qlprob import builders, hilbert

DATA = Path(__file__).resolve().parent.parent / "src" / "qlprob" / "data"


@pytest.fixture(scope="session")
def l12():
    return builders.firefly_l12()


@pytest.fixture(scope="session")
def mo2():
    return builders.mo(2)


@pytest.fixture(scope="session")
def p3():
    return builders.powerset(3)


@pytest.fixture(scope="session")
def o6():
    return builders.o6()


def d2_seed_subspaces():
    r = 1 / math.sqrt(2)
    return [
        hilbert.subspace_from_vectors(2, [[1, 0]]),
        hilbert.subspace_from_vectors(2, [[r, r]]),
    ]


def d3_seed_subspaces():
    r = 1 / math.sqrt(2)
    axes = [hilbert.subspace_from_vectors(3, [v]) for v in
            ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
    return axes + [hilbert.subspace_from_vectors(3, [[r, r, 0]])]


@pytest.fixture(scope="session")
def d2_lattice():
    return hilbert.generate_sublattice(d2_seed_subspaces())


@pytest.fixture(scope="session")
def d3_lattice():
    return hilbert.generate_sublattice(d3_seed_subspaces())
