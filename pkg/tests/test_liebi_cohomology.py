"""Tests for Chevalley-Eilenberg cochains."""

import random
from fractions import Fraction

import pytest

from liebi.atiyah import connection_module
from liebi.bialgebra import bracket_module
from liebi.catalog import hong_liu_3d, sb_n, su_n
from liebi.cohomology import (
    NotACocycleError,
    UnsupportedDegreeError,
    coboundary,
    coboundary_matrix,
    cochain_from_flat,
    cochain_from_vectors,
    find_primitive,
    h1_dim,
    h1_summary,
    is_cocycle,
    num_slots,
    solve_primitive,
    zero_cochain,
)
from liebi.lie import (
    LieAlgebra,
    adjoint,
    coadjoint,
    end_rep,
    representation,
    trivial_rep,
)
from liebi.ratmath import DimensionMismatchError, inverse, is_zero, matmul

from .conftest import heisenberg_plus_line, random_change


def _algebras() -> list[LieAlgebra]:
    return [
        LieAlgebra.from_brackets(("t", "e"), {(0, 1): {1: 1}}),
        LieAlgebra.from_brackets(("x1", "x2", "x3"), {(0, 1): {2: 1}}),
        heisenberg_plus_line(),
        su_n(2),
        sb_n(2),
    ]


def _modules(algebra: LieAlgebra) -> list:
    return [
        adjoint(algebra),
        coadjoint(algebra),
        trivial_rep(algebra, 2),
        bracket_module(algebra),
        end_rep(coadjoint(algebra)),
    ]


def test_coboundary_squares_to_zero_as_matrices() -> None:
    """`δ^1 δ^0 = 0` for every algebra and module."""
    for algebra in _algebras():
        for module in _modules(algebra):
            assert is_zero(
                matmul(coboundary_matrix(module, 1), coboundary_matrix(module, 0)),
            ), module.name


def test_coboundary_squares_to_zero_on_random_cochains() -> None:
    """`δδf = 0` on random degree-0 cochains, checked by evaluation."""
    rng = random.Random(7)
    triples = [
        (algebra, module) for algebra in _algebras() for module in _modules(algebra)
    ]
    for _ in range(200):
        algebra, module = rng.choice(triples)
        flat = [
            Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            for _ in range(module.space_dim)
        ]
        f = cochain_from_flat(module, 0, flat)
        assert is_cocycle(coboundary(f))


def test_coboundary_of_degree_zero_is_action() -> None:
    """`(δv)(x_i) = ρ(x_i) v`."""
    algebra = LieAlgebra.from_brackets(("t", "e"), {(0, 1): {1: 1}})
    module = adjoint(algebra)
    v = cochain_from_flat(module, 0, [0, 1])
    assert coboundary(v).value(0) == (0, 1)
    assert coboundary(v).value(1) == (0, 0)


def test_degree_two_values_are_antisymmetric() -> None:
    """Values on reversed pairs are negated and diagonal values vanish."""
    algebra = su_n(2)
    module = adjoint(algebra)
    f = cochain_from_vectors(module, 1, [(1, 0, 0), (0, 2, 0), (0, 0, 3)])
    image = coboundary(f)
    for i in range(3):
        assert image.value(i, i) == (0, 0, 0)
        for j in range(3):
            assert image.value(i, j) == tuple(-value for value in image.value(j, i))


def test_h1_rank_nullity() -> None:
    """`h1 = (dim C^1 - rank δ^1) - rank δ^0` and is never negative."""
    for algebra in _algebras():
        for module in _modules(algebra):
            summary = h1_summary(module)
            assert summary.cocycle_dim == summary.cochain_dim - summary.rank_d1
            assert summary.h1 == summary.cocycle_dim - summary.rank_d0
            assert summary.h1 >= 0


@pytest.mark.parametrize(
    ("algebra", "expected"),
    [
        (LieAlgebra.abelian(2), 4),
        (LieAlgebra.from_brackets(("t", "e"), {(0, 1): {1: 1}}), 0),
        (su_n(2), 0),
    ],
)
def test_h1_adjoint(algebra: LieAlgebra, expected: int) -> None:
    """Outer derivations: all of gl(2) for abelian, none for affine or su(2)."""
    assert h1_summary(adjoint(algebra)).h1 == expected


def test_h1_is_invariant_under_module_basis_change() -> None:
    """Conjugating every action matrix leaves `dim H^1` alone."""
    rng = random.Random(17)
    for algebra in _algebras():
        for module in _modules(algebra):
            change = random_change(rng, module.space_dim)
            back = inverse(change)
            conjugated = representation(
                algebra,
                [matmul(matmul(change, rho), back) for rho in module.rho],
            )
            assert h1_dim(conjugated) == h1_dim(module)


def test_h1_of_connection_module_is_nonzero() -> None:
    """`g (x) End(g*)` of the 3-dim Heisenberg bialgebra has `H^1 != 0`."""
    module = connection_module(hong_liu_3d().bialgebra.g)
    summary = h1_summary(module)
    assert summary.cochain_dim == 81
    assert (summary.rank_d0, summary.rank_d1) == (20, 39)
    assert h1_dim(module) == 22


def test_solve_primitive_of_coboundary() -> None:
    """Coboundaries have primitives reproducing them."""
    module = adjoint(su_n(2))
    f = coboundary(cochain_from_flat(module, 0, [1, Fraction(1, 2), -3]))
    solution = solve_primitive(f)
    assert solution.is_consistent
    primitive = cochain_from_flat(module, 0, solution.particular)  # type: ignore
    assert coboundary(primitive).equals(f)
    assert find_primitive(f) is not None


def test_non_coboundary_cocycle() -> None:
    """On the abelian 2-dim algebra every 1-cochain is a cocycle but not exact."""
    module = adjoint(LieAlgebra.abelian(2))
    f = cochain_from_vectors(module, 1, [(1, 0), (0, 0)])
    assert is_cocycle(f)
    solution = solve_primitive(f)
    assert solution.augmented_rank > solution.rank
    assert find_primitive(f) is None


def test_find_primitive_needs_cocycle() -> None:
    """Non-closed cochains are refused."""
    module = adjoint(LieAlgebra.from_brackets(("t", "e"), {(0, 1): {1: 1}}))
    f = cochain_from_vectors(module, 1, [(1, 0), (0, 0)])
    assert not is_cocycle(f)
    with pytest.raises(NotACocycleError):
        find_primitive(f)


def test_unsupported_degrees() -> None:
    """Only degrees 0 to 2 exist, and only δ^0 and δ^1."""
    module = adjoint(su_n(2))
    with pytest.raises(UnsupportedDegreeError):
        num_slots(3, 3)
    with pytest.raises(UnsupportedDegreeError):
        coboundary_matrix(module, 2)
    with pytest.raises(UnsupportedDegreeError):
        solve_primitive(zero_cochain(module, 0))


def test_cochain_arithmetic() -> None:
    """Cochains add, subtract, negate and scale componentwise."""
    module = adjoint(su_n(2))
    f = cochain_from_vectors(module, 1, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    g = cochain_from_vectors(module, 1, [(1, 1, 0), (0, 1, 0), (0, 0, 0)])
    assert (f + g).value(0) == (2, 1, 0)
    assert (f - g).value(2) == (0, 0, 1)
    assert (-f).value(1) == (0, -1, 0)
    assert f.scaled(Fraction(1, 2)).value(2) == (0, 0, Fraction(1, 2))
    assert (f - f).is_zero
    with pytest.raises(DimensionMismatchError):
        _ = f + zero_cochain(module, 0)


def test_cochain_shape_checks() -> None:
    """Cochains need one value per slot."""
    module = adjoint(su_n(2))
    with pytest.raises(DimensionMismatchError):
        cochain_from_vectors(module, 1, [(1, 0, 0)])
    with pytest.raises(DimensionMismatchError):
        cochain_from_flat(module, 1, [1, 2])
