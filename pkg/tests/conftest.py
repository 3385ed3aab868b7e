"""Configuration for the pytest test suite."""

import random
from collections.abc import Callable, Iterator
from fractions import Fraction
from pathlib import Path

import pytest

from liebi.bialgebra import (
    LieBialgebra,
    RMatrix,
    change_basis,
    coboundary_bialgebra,
    swap,
    trivial_dual,
)
from liebi.catalog import abelian_2d, affine_2d_coboundary, hong_liu_3d, su_n
from liebi.lie import LieAlgebra
from liebi.ratmath import Matrix, matmul, matrix_from_entries
from liebi.runtime_environment import reset_runtime_environment

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def fresh_runtime_environment(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Give each test a runtime environment built from default settings."""
    for name in ("LIEBI_DEBUG_MODE", "LIEBI_MAX_N", "LIEBI_CROSS_CHECKS"):
        monkeypatch.delenv(name, raising=False)
    reset_runtime_environment()
    yield
    reset_runtime_environment()


@pytest.fixture()
def fixtures_dir() -> Path:
    """Directory holding the YAML input documents used in tests."""
    return FIXTURES


def heisenberg_plus_line() -> LieAlgebra:
    """The 4-dim algebra `[x1, x2] = x3` with a central `x4`."""
    return LieAlgebra.from_brackets(("x1", "x2", "x3", "x4"), {(0, 1): {2: 1}})


def random_change(rng: random.Random, dim: int) -> Matrix:
    """A random integer basis change with determinant 1."""
    lower = matrix_from_entries(
        {(i, j): rng.randint(-2, 2) for i in range(dim) for j in range(i)}
        | {(i, i): 1 for i in range(dim)},
        (dim, dim),
    )
    upper = matrix_from_entries(
        {(i, j): rng.randint(-2, 2) for i in range(dim) for j in range(i + 1, dim)}
        | {(i, i): 1 for i in range(dim)},
        (dim, dim),
    )
    return matmul(lower, upper)


def random_r_matrix(rng: random.Random, dim: int) -> RMatrix:
    """A random element of `g ∧ g` with small rational coefficients."""
    terms: dict[tuple[int, int], Fraction] = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            value = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            terms[i, j] = value
            terms[j, i] = -value
    return RMatrix.from_terms(dim, terms)


def _seed_bialgebras() -> list[LieBialgebra]:
    return [
        hong_liu_3d().bialgebra,
        affine_2d_coboundary().bialgebra,
        abelian_2d().bialgebra,
        trivial_dual(heisenberg_plus_line()),
    ]


def _random_bialgebra(rng: random.Random, seeds: list[LieBialgebra]) -> LieBialgebra:
    # Unimodular algebras of dim <= 3 accept every r in g ∧ g.
    coboundary_bases = [hong_liu_3d().bialgebra.g, su_n(2)]
    while True:
        match rng.randrange(3):
            case 0:
                seed = rng.choice(seeds)
                return change_basis(seed, random_change(rng, seed.dim))
            case 1:
                seed = rng.choice(seeds)
                return swap(change_basis(seed, random_change(rng, seed.dim)))
            case _:
                g = rng.choice(coboundary_bases)
                validation = coboundary_bialgebra(g, random_r_matrix(rng, g.dim))
                if validation.ok:
                    return validation.bialgebra  # type: ignore


@pytest.fixture(scope="session")
def random_bialgebras() -> Callable[[int, int], list[LieBialgebra]]:
    """Deterministic random valid bialgebras of dimension at most 4."""
    seeds = _seed_bialgebras()

    def generate(count: int, seed: int = 0) -> list[LieBialgebra]:
        rng = random.Random(seed)
        return [_random_bialgebra(rng, seeds) for _ in range(count)]

    return generate
