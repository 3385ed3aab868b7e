"""Tests for Lie bialgebras and the Drinfeld double."""

from fractions import Fraction

import pytest

from liebi.bialgebra import (
    InvalidBialgebraError,
    LieBialgebra,
    NotAMatchedPairError,
    RMatrix,
    build_double,
    change_basis,
    check_duality,
    coboundary_bialgebra,
    cobracket_cochain,
    contraction,
    make_bialgebra,
    restriction_matches,
    swap,
    trivial_dual,
    validate_bialgebra,
)
from liebi.catalog import hong_liu_3d, su_n
from liebi.lie import LieAlgebra
from liebi.ratmath import DimensionMismatchError, identity, inverse, matrix

from .conftest import heisenberg_plus_line


def heisenberg() -> LieAlgebra:
    """`[x1, x2] = x3`."""
    return LieAlgebra.from_brackets(("x1", "x2", "x3"), {(0, 1): {2: 1}})


def heisenberg_dual(extra: dict | None = None) -> LieAlgebra:
    """`[xi1, xi2] = xi2`, `[xi1, xi3] = xi3`, plus `extra` in `[xi1, xi2]`."""
    brackets = {(0, 1): {1: 1}, (0, 2): {2: 1}}
    if extra:
        brackets[0, 1] = {**brackets[0, 1], **extra}
    return LieAlgebra.from_brackets(("xi1", "xi2", "xi3"), brackets)


def test_heisenberg_bialgebra_is_valid() -> None:
    """The Heisenberg pair is a Lie bialgebra with the expected cobracket."""
    validation = validate_bialgebra(heisenberg(), heisenberg_dual())
    assert validation.ok
    b = validation.bialgebra
    assert b is not None
    # γ(x2) = x1 (x) x2 - x2 (x) x1
    expected = [Fraction(0)] * 9
    expected[0 * 3 + 1] = Fraction(1)
    expected[1 * 3 + 0] = Fraction(-1)
    assert b.cobracket(1) == tuple(expected)


def test_cocycle_violation_detected() -> None:
    """Adding `xi3` to `[xi1, xi2]` keeps dual Jacobi but breaks the cocycle."""
    validation = validate_bialgebra(heisenberg(), heisenberg_dual({2: 1}))
    assert not validation.ok
    kinds = {violation.kind for violation in validation.violations}
    assert kinds == {"cocycle"}
    assert (0, 1) in {violation.indices for violation in validation.violations}


def test_dual_jacobi_violation_detected() -> None:
    """A dual bracket failing Jacobi is reported with the `dual-` prefix."""
    g_dual = LieAlgebra.from_brackets(
        ("xi1", "xi2", "xi3"),
        {(0, 1): {2: 1}, (1, 2): {1: 1}},
    )
    validation = validate_bialgebra(LieAlgebra.abelian(3), g_dual)
    assert "dual-jacobi" in {violation.kind for violation in validation.violations}


def test_make_bialgebra_raises() -> None:
    """`make_bialgebra` raises with the violations attached."""
    with pytest.raises(InvalidBialgebraError) as excinfo:
        make_bialgebra(heisenberg(), heisenberg_dual({2: 1}))
    assert excinfo.value.violations


def test_double_rejects_broken_cocycle() -> None:
    """A bialgebra built around validation has no Drinfeld double."""
    g, g_dual = heisenberg(), heisenberg_dual({2: 1})
    b = LieBialgebra(g=g, g_dual=g_dual, gamma=cobracket_cochain(g, g_dual))
    with pytest.raises(NotAMatchedPairError) as excinfo:
        build_double(b)
    kinds = {violation.kind for violation in excinfo.value.violations}
    assert "double-jacobi" in kinds


def test_dimension_mismatch() -> None:
    """`g` and `g*` need the same dimension."""
    with pytest.raises(DimensionMismatchError):
        validate_bialgebra(heisenberg(), LieAlgebra.abelian(2))


def test_double_of_heisenberg() -> None:
    """The double restricts to both factors and has a split pairing."""
    b = hong_liu_3d().bialgebra
    double = build_double(b)
    assert double.algebra.dim == 6
    assert restriction_matches(b, double)
    # <x_1, xi^1> = 1, <x_1, x_2> = 0
    assert double.pair((1, 0, 0, 0, 0, 0), (0, 0, 0, 1, 0, 0)) == 1
    assert double.pair((1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)) == 0


def test_double_mixed_bracket() -> None:
    """`[x, xi] = -ad*_x xi + ad*_xi x` in the double."""
    b = hong_liu_3d().bialgebra
    double = build_double(b)
    x3 = (0, 0, 1, 0, 0, 0)
    xi3 = (0, 0, 0, 0, 0, 1)
    # ad*_{xi3} x3 = -x1 and x3 is central so ad*_{x3} = 0.
    assert double.algebra.bracket(x3, xi3) == (-1, 0, 0, 0, 0, 0)


def test_check_duality() -> None:
    """Contracting `γ` with `xi^a` is the dual action of `xi^a`."""
    b = hong_liu_3d().bialgebra
    assert check_duality(b) == []
    assert contraction(b, (1, 0, 0), 1) == (0, 1, 0)


def test_trivial_dual() -> None:
    """Abelian duals give zero cobrackets."""
    b = trivial_dual(heisenberg_plus_line())
    assert b.gamma.is_zero
    assert build_double(b).algebra.dim == 8


def test_coboundary_affine() -> None:
    """`r = t (x) e - e (x) t` on `[t, e] = e` gives `[xi1, xi2] = xi1`."""
    g = LieAlgebra.from_brackets(("t", "e"), {(0, 1): {1: 1}})
    r = RMatrix.from_terms(2, {(0, 1): 1, (1, 0): -1})
    validation = coboundary_bialgebra(g, r)
    assert validation.ok
    b = validation.bialgebra
    assert b is not None
    assert b.r_matrix is r
    assert b.g_dual.constants[0, 1, 0] == 1
    assert b.g_dual.constants[1, 0, 0] == -1
    assert validate_bialgebra(b.g, b.g_dual).ok


def test_coboundary_shape_check() -> None:
    """The r-matrix must be `dim g x dim g`."""
    g = LieAlgebra.from_brackets(("t", "e"), {(0, 1): {1: 1}})
    with pytest.raises(DimensionMismatchError):
        coboundary_bialgebra(g, RMatrix(r=identity(3)))


def test_swap_is_an_involution() -> None:
    """Swapping twice gives back the original bialgebra."""
    b = hong_liu_3d().bialgebra
    swapped = swap(b)
    assert swapped.g.same_structure(b.g_dual)
    assert swap(swapped).same_structure(b)


def test_change_basis_round_trip() -> None:
    """Changing basis and back is the identity, and r-matrices follow along."""
    g = su_n(2)
    r = RMatrix.from_terms(3, {(0, 1): 1, (1, 0): -1})
    b = coboundary_bialgebra(g, r).bialgebra
    assert b is not None
    change = matrix([[1, 1, 0], [0, 1, 0], [0, 0, 2]])
    moved = change_basis(b, change)
    assert moved.r_matrix is not None
    recomputed = coboundary_bialgebra(moved.g, moved.r_matrix).bialgebra
    assert recomputed is not None
    assert recomputed.same_structure(moved)
    back = change_basis(moved, inverse(change))
    assert back.same_structure(b)


def test_random_bialgebras_have_doubles(random_bialgebras) -> None:
    """Every generated bialgebra has a valid double."""
    for b in random_bialgebras(30, seed=3):
        double = build_double(b)
        assert restriction_matches(b, double)
        assert check_duality(b) == []
