"""Tests for Lie algebras and their representations."""

from fractions import Fraction

import numpy as np
import pytest

from liebi.catalog import su_n
from liebi.lie import (
    InvalidLieAlgebraError,
    InvalidRepresentationError,
    LieAlgebra,
    ModuleMap,
    adjoint,
    center,
    check_homomorphism,
    coadjoint,
    dual_rep,
    end_rep,
    in_center,
    is_module_morphism,
    make_lie_algebra,
    representation,
    tensor_rep,
    trivial_rep,
    validate_lie,
)
from liebi.ratmath import DimensionMismatchError, identity, matrix, zeros

from .conftest import heisenberg_plus_line


def heisenberg() -> LieAlgebra:
    """`[x1, x2] = x3`."""
    return LieAlgebra.from_brackets(("x1", "x2", "x3"), {(0, 1): {2: 1}})


def affine() -> LieAlgebra:
    """`[t, e] = e`."""
    return LieAlgebra.from_brackets(("t", "e"), {(0, 1): {1: 1}})


def test_from_brackets_fills_antisymmetric_partner() -> None:
    """Unlisted mirrored pairs get the negated bracket."""
    algebra = heisenberg()
    assert algebra.constants[0, 1, 2] == 1
    assert algebra.constants[1, 0, 2] == -1
    assert algebra.bracket((0, 1, 0), (1, 0, 0)) == (0, 0, -1)


def test_validate_heisenberg() -> None:
    """The Heisenberg algebra passes validation."""
    report = validate_lie(heisenberg())
    assert report.is_valid
    assert report.violations() == []


def test_validate_reports_jacobi_quadruple() -> None:
    """`[x1, x2] = x3, [x2, x3] = x2` fails Jacobi in component `x3`."""
    algebra = LieAlgebra.from_brackets(
        ("x1", "x2", "x3"),
        {(0, 1): {2: 1}, (1, 2): {1: 1}},
    )
    report = validate_lie(algebra)
    assert report.jacobi == ((0, 1, 2, 2),)
    assert report.antisymmetry == ()
    [violation] = report.violations(prefix="g-")
    assert violation.kind == "g-jacobi"


def test_validate_reports_antisymmetry() -> None:
    """Listing both orders inconsistently is an antisymmetry violation."""
    algebra = LieAlgebra.from_brackets(("a", "b"), {(0, 1): {0: 1}, (1, 0): {0: 1}})
    report = validate_lie(algebra)
    assert report.antisymmetry == ((0, 1, 0),)


def test_validate_non_cube() -> None:
    """Structure constants must be a cube."""
    with pytest.raises(DimensionMismatchError):
        validate_lie(np.zeros((2, 2, 3), dtype=object))


def test_make_lie_algebra_raises() -> None:
    """`make_lie_algebra` refuses invalid constants."""
    constants = np.full((2, 2, 2), Fraction(0), dtype=object)
    constants[0, 0, 1] = Fraction(1)
    with pytest.raises(InvalidLieAlgebraError):
        make_lie_algebra(("a", "b"), constants)


def test_center() -> None:
    """The Heisenberg center is spanned by `x3`; `su(2)` is centerless."""
    assert center(heisenberg()) == ((0, 0, 1),)
    assert in_center(heisenberg(), (0, 0, Fraction(5, 2)))
    assert not in_center(heisenberg(), (1, 0, 0))
    assert center(su_n(2)) == ()
    assert len(center(heisenberg_plus_line())) == 2


@pytest.mark.parametrize("algebra", [heisenberg(), affine(), su_n(2)])
def test_standard_modules_are_homomorphisms(algebra: LieAlgebra) -> None:
    """Adjoint, coadjoint, dual, tensor and End modules are representations."""
    ad = adjoint(algebra)
    coad = coadjoint(algebra)
    for module in (
        ad,
        coad,
        dual_rep(ad),
        tensor_rep(ad, ad),
        end_rep(coad),
        tensor_rep(ad, end_rep(coad)),
        trivial_rep(algebra, 2),
    ):
        assert check_homomorphism(module) == [], module.name


def test_coadjoint_is_dual_of_adjoint() -> None:
    """`coad` coincides with the dual of `ad`."""
    algebra = affine()
    for first, second in zip(coadjoint(algebra).rho, dual_rep(adjoint(algebra)).rho):
        assert first.to_dok() == second.to_dok()


def test_broken_representation_detected() -> None:
    """Matrices which don't respect the bracket are reported."""
    algebra = affine()
    module = representation(algebra, [identity(1), identity(1)])
    assert check_homomorphism(module) == [(0, 1)]


def test_representation_shape_checks() -> None:
    """One square matrix per basis vector is required."""
    with pytest.raises(InvalidRepresentationError):
        representation(affine(), [identity(2)])
    with pytest.raises(InvalidRepresentationError):
        representation(affine(), [identity(2), zeros((2, 3))])


def test_tensor_rep_needs_same_algebra() -> None:
    """Tensor products of modules over different algebras are refused."""
    with pytest.raises(InvalidRepresentationError):
        tensor_rep(adjoint(affine()), adjoint(heisenberg()))


def test_module_morphism() -> None:
    """The identity is a morphism; a projection onto `x1` is not."""
    algebra = heisenberg()
    ad = adjoint(algebra)
    assert is_module_morphism(ModuleMap(ad, ad, identity(3))) == (True, None)
    projection = matrix([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    ok, index = is_module_morphism(ModuleMap(ad, ad, projection))
    assert not ok
    assert index is not None


def test_transformed_stays_valid() -> None:
    """A change of basis keeps a Lie algebra a Lie algebra."""
    change = matrix([[1, 1, 0], [0, 1, 2], [0, 0, 1]])
    transformed = su_n(2).transformed(change)
    assert validate_lie(transformed).is_valid
    assert not transformed.same_structure(su_n(2))
    assert transformed.transformed(
        matrix([[1, -1, 2], [0, 1, -2], [0, 0, 1]]),
    ).same_structure(su_n(2))
