"""Lie algebras given by rational structure constants, and their modules.

Conventions (used everywhere in liebi):

- `[x_i, x_j] = sum_k c[i, j, k] x_k`.
- The dual basis satisfies `<x_i, xi^j> = delta_ij`.
- `ad_{x_i}` is the matrix with `ad[i][k, j] = c[i, j, k]`, i.e. it sends `x_j` to
  `[x_i, x_j]`.
- The *raw* dual map `ad*_x` is the transpose of `ad_x` acting on `g*`. The
  coadjoint representation is `-ad*_x`.
- `End(V)` is flattened column-major: entry `(r, c)` lives at index `c * dim V + r`.
- `V (x) W` is flattened row-major: `v_a (x) w_b` lives at index `a * dim W + b`.
"""

from collections import defaultdict
from collections.abc import Mapping, Sequence
from fractions import Fraction
from functools import cached_property

import msgspec
import numpy as np
from loguru import logger

from .ratmath import (
    DimensionMismatchError,
    Matrix,
    Scalar,
    Vector,
    add,
    dense,
    equal,
    identity,
    inverse,
    kernel,
    kron,
    linear_combination,
    matmul,
    matrix_from_entries,
    matvec,
    neg,
    sub,
    transpose,
    unit_vector,
    vstack,
    zeros,
)


class InvalidRepresentationError(ValueError):
    """Raised when a representation is malformed or mixes algebras."""


class Violation(msgspec.Struct, frozen=True):
    """A single violated condition, located by basis indices."""

    kind: str
    indices: tuple[int, ...]
    detail: str = ""


def fraction_array(data, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Convert nested data into an object array of `Fraction`s."""
    array = np.array(data, dtype=object)
    if shape is not None:
        array = array.reshape(shape)
    flat = [Fraction(value) for value in array.ravel()]
    return np.array(flat, dtype=object).reshape(array.shape)


class LieAlgebra(msgspec.Struct, frozen=True, eq=False, dict=True):
    """A finite-dimensional Lie algebra presented by structure constants.

    `constants[i, j, k]` is the coefficient of `x_k` in `[x_i, x_j]`, stored as an
    object array of `Fraction`s. Construction doesn't validate; see
    `validate_lie`.
    """

    basis_names: tuple[str, ...]
    constants: np.ndarray

    @classmethod
    def from_constants(
        cls,
        basis_names: Sequence[str],
        constants,
    ) -> "LieAlgebra":
        """Build a `LieAlgebra` from any nested rational data.

        Raises
        ------
        DimensionMismatchError
            If `constants` isn't `dim x dim x dim` for `dim = len(basis_names)`.
        """
        dim = len(basis_names)
        array = fraction_array(constants)
        if array.shape != (dim, dim, dim):
            raise DimensionMismatchError(
                f"Expected {(dim, dim, dim)} structure constants, got {array.shape}",
            )
        return cls(basis_names=tuple(basis_names), constants=array)

    @classmethod
    def from_brackets(
        cls,
        basis_names: Sequence[str],
        brackets: Mapping[tuple[int, int], Mapping[int, Scalar]],
    ) -> "LieAlgebra":
        """Build a `LieAlgebra` from sparse brackets.

        `brackets[i, j]` maps `k` to the coefficient of `x_k` in `[x_i, x_j]`. A
        pair `(j, i)` which is not listed is filled in as `-[x_i, x_j]`; pairs which
        are listed are taken verbatim (so inconsistent input stays detectable).
        """
        dim = len(basis_names)
        constants = np.full((dim, dim, dim), Fraction(0), dtype=object)
        for (i, j), terms in brackets.items():
            for k, value in terms.items():
                constants[i, j, k] = Fraction(value)
                if (j, i) not in brackets:
                    constants[j, i, k] = -Fraction(value)
        return cls(basis_names=tuple(basis_names), constants=constants)

    @classmethod
    def abelian(
        cls,
        dim: int,
        basis_names: Sequence[str] | None = None,
    ) -> "LieAlgebra":
        if basis_names is None:
            basis_names = [f"x{i + 1}" for i in range(dim)]
        return cls.from_constants(
            basis_names,
            np.full((dim, dim, dim), Fraction(0), dtype=object),
        )

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    @cached_property
    def terms(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        """Nonzero structure constants as `{(i, j): {k: c[i, j, k]}}`."""
        result: dict[tuple[int, int], dict[int, Fraction]] = defaultdict(dict)
        for i, j, k in np.argwhere(self.constants.astype(bool)):
            result[int(i), int(j)][int(k)] = self.constants[i, j, k]
        return dict(result)

    @cached_property
    def ad(self) -> tuple[Matrix, ...]:
        """Matrices of `ad_{x_i}` in the basis `x_j`."""
        per_basis: list[dict[tuple[int, int], Fraction]] = [{} for _ in range(self.dim)]
        for (i, j), row in self.terms.items():
            for k, value in row.items():
                per_basis[i][k, j] = value
        return tuple(
            matrix_from_entries(entries, (self.dim, self.dim)) for entries in per_basis
        )

    def bracket(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
        """Bracket of two vectors given by coordinates."""
        if len(u) != self.dim or len(v) != self.dim:
            raise DimensionMismatchError(
                f"Bracket of vectors of lengths {len(u)}, {len(v)} in dim {self.dim}",
            )
        result = [Fraction(0)] * self.dim
        for (i, j), row in self.terms.items():
            coefficient = Fraction(u[i]) * Fraction(v[j])
            if coefficient:
                for k, value in row.items():
                    result[k] += coefficient * value
        return tuple(result)

    def same_structure(self, other: "LieAlgebra") -> bool:
        """Whether both algebras have identical structure constants."""
        return self.dim == other.dim and bool(
            np.array_equal(self.constants, other.constants),
        )

    def transformed(
        self,
        change: Matrix,
        basis_names: Sequence[str] | None = None,
    ) -> "LieAlgebra":
        """Re-express this algebra in the basis `x'_i = sum_k change[k, i] x_k`.

        Raises
        ------
        SingularMatrixError
            If `change` is not invertible.
        """
        forward = fraction_array(dense(change))
        backward = fraction_array(dense(inverse(change)))
        partial = np.tensordot(forward, self.constants, axes=([0], [0]))
        partial = np.tensordot(partial, forward, axes=([1], [0])).transpose(0, 2, 1)
        constants = np.tensordot(partial, backward, axes=([2], [1]))
        return LieAlgebra.from_constants(
            self.basis_names if basis_names is None else basis_names,
            constants,
        )


class LieValidationReport(msgspec.Struct, frozen=True):
    """Every violated antisymmetry triple and Jacobi quadruple."""

    dim: int
    antisymmetry: tuple[tuple[int, int, int], ...] = ()
    jacobi: tuple[tuple[int, int, int, int], ...] = ()

    @property
    def is_valid(self) -> bool:
        return not (self.antisymmetry or self.jacobi)

    def violations(self, prefix: str = "") -> list[Violation]:
        """Flatten the report into `Violation`s (kinds optionally prefixed)."""
        found = [
            Violation(
                kind=f"{prefix}antisymmetry",
                indices=triple,
                detail="c[i][j][k] != -c[j][i][k]",
            )
            for triple in self.antisymmetry
        ]
        found.extend(
            Violation(
                kind=f"{prefix}jacobi",
                indices=quadruple,
                detail="Jacobi identity fails for (x_i, x_j, x_k) in component x_l",
            )
            for quadruple in self.jacobi
        )
        return found


class InvalidLieAlgebraError(ValueError):
    """Raised when structure constants don't define a Lie algebra."""

    def __init__(self, report: LieValidationReport):
        self.report = report
        super().__init__(
            f"Not a Lie algebra: {len(report.antisymmetry)} antisymmetry and "
            f"{len(report.jacobi)} Jacobi violations",
        )


def _jacobi_violations(
    terms: Mapping[tuple[int, int], Mapping[int, Fraction]],
) -> list[tuple[int, int, int, int]]:
    # products[i, j, k, l] = sum_m c[i, j, m] c[m, k, l]
    by_left: dict[int, list[tuple[int, Mapping[int, Fraction]]]] = defaultdict(list)
    for (m, k), row in terms.items():
        by_left[m].append((k, row))

    products: dict[tuple[int, int, int, int], Fraction] = defaultdict(Fraction)
    for (i, j), row in terms.items():
        for m, outer in row.items():
            for k, inner in by_left.get(m, ()):
                for l, value in inner.items():
                    products[i, j, k, l] += outer * value

    candidates = sorted(
        {
            (*sorted((i, j, k)), l)
            for (i, j, k, l), value in products.items()
            if value and len({i, j, k}) == 3
        },
    )
    violations = []
    for i, j, k, l in candidates:
        total = (
            products.get((i, j, k, l), 0)
            + products.get((j, k, i, l), 0)
            + products.get((k, i, j, l), 0)
        )
        if total:
            violations.append((i, j, k, l))
    return violations


def validate_lie(constants) -> LieValidationReport:
    """Check antisymmetry and the Jacobi identity of a structure tensor.

    Antisymmetry violations are reported once per unordered pair as `(i, j, k)`
    with `i <= j`; Jacobi violations as `(i, j, k, l)` with `i < j < k`, where `l`
    is the failing component.

    Parameters
    ----------
    constants
        A `LieAlgebra` or any `dim x dim x dim` nested rational data.

    Raises
    ------
    DimensionMismatchError
        If `constants` is not a cube.
    """
    if isinstance(constants, LieAlgebra):
        algebra = constants
    else:
        array = fraction_array(constants)
        if array.ndim != 3 or len(set(array.shape)) != 1:
            raise DimensionMismatchError(
                f"Structure constants must be a cube, got shape {array.shape}",
            )
        algebra = LieAlgebra(
            basis_names=tuple(f"x{i + 1}" for i in range(array.shape[0])),
            constants=array,
        )

    symmetric_part = algebra.constants + algebra.constants.transpose(1, 0, 2)
    antisymmetry = tuple(
        (int(i), int(j), int(k))
        for i, j, k in np.argwhere(symmetric_part.astype(bool))
        if i <= j
    )
    jacobi = tuple(_jacobi_violations(algebra.terms))
    report = LieValidationReport(
        dim=algebra.dim,
        antisymmetry=antisymmetry,
        jacobi=jacobi,
    )
    logger.debug(
        f"Validated {algebra.dim}-dim structure constants: "
        f"{len(antisymmetry)} antisymmetry, {len(jacobi)} Jacobi violations",
    )
    return report


def make_lie_algebra(basis_names: Sequence[str], constants) -> LieAlgebra:
    """Build a `LieAlgebra` and insist that it is valid.

    Raises
    ------
    InvalidLieAlgebraError
        If antisymmetry or Jacobi fail.
    """
    algebra = LieAlgebra.from_constants(basis_names, constants)
    report = validate_lie(algebra)
    if not report.is_valid:
        raise InvalidLieAlgebraError(report)
    return algebra


def same_algebra(first: LieAlgebra, second: LieAlgebra) -> bool:
    return first is second or (
        first.basis_names == second.basis_names and first.same_structure(second)
    )


class Representation(msgspec.Struct, frozen=True, eq=False):
    """A Lie algebra action, one `space_dim x space_dim` matrix per basis vector."""

    algebra: LieAlgebra
    rho: tuple[Matrix, ...]
    space_dim: int
    name: str = ""

    def act(self, index: int, values: Sequence[Scalar]) -> Vector:
        """Apply `rho(x_index)` to a vector of the module."""
        return matvec(self.rho[index], values)


def representation(
    algebra: LieAlgebra,
    rho: Sequence[Matrix],
    name: str = "",
) -> Representation:
    """Assemble a `Representation`, checking matrix shapes.

    Raises
    ------
    InvalidRepresentationError
        If there isn't one square matrix per basis vector, all of the same size.
    """
    if len(rho) != algebra.dim:
        raise InvalidRepresentationError(
            f"Need {algebra.dim} matrices, got {len(rho)}",
        )
    shapes = {matrix.shape for matrix in rho}
    if len(shapes) > 1 or any(rows != cols for rows, cols in shapes):
        raise InvalidRepresentationError(
            f"Matrices must share a square shape: {shapes}",
        )
    space_dim = shapes.pop()[0] if shapes else 0
    return Representation(
        algebra=algebra,
        rho=tuple(rho),
        space_dim=space_dim,
        name=name,
    )


def adjoint(algebra: LieAlgebra) -> Representation:
    """The adjoint action `x . y = [x, y]`."""
    return representation(algebra, algebra.ad, name="ad")


def dual_adjoint(algebra: LieAlgebra) -> tuple[Matrix, ...]:
    """The raw dual maps `ad*_{x_i} = (ad_{x_i})^T` on `g*`.

    Note that these are *not* a representation (they are an anti-representation);
    the coadjoint action is their negative.
    """
    return tuple(transpose(matrix) for matrix in algebra.ad)


def coadjoint(algebra: LieAlgebra) -> Representation:
    """The coadjoint action `x . xi = -ad*_x xi` on `g*`."""
    return representation(
        algebra,
        [neg(matrix) for matrix in dual_adjoint(algebra)],
        name="coad",
    )


def dual_rep(module: Representation) -> Representation:
    """The dual module, `rho_{V*} = -rho_V^T`."""
    return representation(
        module.algebra,
        [neg(transpose(matrix)) for matrix in module.rho],
        name=f"({module.name})*",
    )


def trivial_rep(algebra: LieAlgebra, space_dim: int) -> Representation:
    return representation(
        algebra,
        [zeros((space_dim, space_dim)) for _ in range(algebra.dim)],
        name=f"k^{space_dim}",
    )


def tensor_rep(first: Representation, second: Representation) -> Representation:
    """The Leibniz action `rho_V (x) id + id (x) rho_W` on `V (x) W`.

    Raises
    ------
    InvalidRepresentationError
        If the two modules are over different algebras.
    """
    if not same_algebra(first.algebra, second.algebra):
        raise InvalidRepresentationError(
            "Tensor product of modules over different algebras",
        )
    first_identity = identity(first.space_dim)
    second_identity = identity(second.space_dim)
    return representation(
        first.algebra,
        [
            add(kron(rho_first, second_identity), kron(first_identity, rho_second))
            for rho_first, rho_second in zip(first.rho, second.rho)
        ],
        name=f"{first.name}(x){second.name}",
    )


def end_rep(module: Representation) -> Representation:
    """The commutator action `x . T = [rho(x), T]` on `End(V)` (column-major)."""
    space_identity = identity(module.space_dim)
    return representation(
        module.algebra,
        [
            sub(kron(space_identity, matrix), kron(transpose(matrix), space_identity))
            for matrix in module.rho
        ],
        name=f"End({module.name})",
    )


def check_homomorphism(module: Representation) -> list[tuple[int, int]]:
    """Pairs `i < j` where `rho([x_i, x_j]) != [rho(x_i), rho(x_j)]`."""
    algebra = module.algebra
    failures = []
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            row = algebra.terms.get((i, j), {})
            if row:
                expected = linear_combination(
                    list(row.values()),
                    [module.rho[k] for k in row],
                )
            else:
                expected = zeros((module.space_dim, module.space_dim))
            actual = sub(
                matmul(module.rho[i], module.rho[j]),
                matmul(module.rho[j], module.rho[i]),
            )
            if not equal(expected, actual):
                failures.append((i, j))
    return failures


class ModuleMap(msgspec.Struct, frozen=True, eq=False):
    """A linear map between two modules over the same algebra."""

    source: Representation
    target: Representation
    matrix: Matrix


def is_module_morphism(module_map: ModuleMap) -> tuple[bool, int | None]:
    """Check `M rho_source(x_i) = rho_target(x_i) M` for every basis vector.

    Returns
    -------
    `(True, None)` if the map is equivariant, otherwise `(False, i)` for the first
    failing basis index `i`.

    Raises
    ------
    DimensionMismatchError
        If the matrix shape doesn't match the two module dimensions.
    InvalidRepresentationError
        If source and target are over different algebras.
    """
    source, target, matrix = module_map.source, module_map.target, module_map.matrix
    if matrix.shape != (target.space_dim, source.space_dim):
        raise DimensionMismatchError(
            f"Map has shape {matrix.shape}, modules have dims "
            f"{source.space_dim} -> {target.space_dim}",
        )
    if not same_algebra(source.algebra, target.algebra):
        raise InvalidRepresentationError("Module map between different algebras")
    for index, (rho_source, rho_target) in enumerate(zip(source.rho, target.rho)):
        if not equal(matmul(matrix, rho_source), matmul(rho_target, matrix)):
            return False, index
    return True, None


def center(algebra: LieAlgebra) -> tuple[Vector, ...]:
    """A basis of the center, the kernel of `y -> ([x_i, y])_i`."""
    if algebra.dim == 0:
        return ()
    return kernel(vstack(*algebra.ad))


def in_center(algebra: LieAlgebra, values: Sequence[Scalar]) -> bool:
    return all(
        not any(algebra.bracket(unit_vector(algebra.dim, index), values))
        for index in range(algebra.dim)
    )
