"""Chevalley-Eilenberg cochains of a Lie algebra in degrees 0, 1 and 2.

A degree-k cochain with values in a module `V` is stored as a `dim V x slots`
matrix: one column per `k`-subset of basis indices (`()` for degree 0, `(i,)` for
degree 1 and `(i, j)` with `i < j` for degree 2, in lexicographic order). Values on
`(j, i)` are recovered by antisymmetry.

Flattened cochains are slot-major: component `a` of slot `s` sits at
`s * dim V + a`.
"""

from collections import defaultdict
from collections.abc import Sequence
from fractions import Fraction

import msgspec
from loguru import logger

from .lie import Representation
from .ratmath import (
    DimensionMismatchError,
    LinearSolution,
    Matrix,
    Scalar,
    Vector,
    add,
    column_vector,
    entries,
    equal,
    from_columns,
    is_zero,
    matrix_from_entries,
    matvec,
    neg,
    rank,
    scale,
    solve,
    sub,
    vstack,
    zeros,
)


class UnsupportedDegreeError(ValueError):
    """Raised for cochain degrees outside the supported range."""


class NotACocycleError(ValueError):
    """Raised when asking for a primitive of a cochain which isn't closed."""


def pair_slots(dim: int) -> list[tuple[int, int]]:
    """Index pairs `(i, j)` with `i < j`, in the order degree-2 slots are stored."""
    return [(i, j) for i in range(dim) for j in range(i + 1, dim)]


def num_slots(dim: int, degree: int) -> int:
    match degree:
        case 0:
            return 1
        case 1:
            return dim
        case 2:
            return dim * (dim - 1) // 2
        case _:
            raise UnsupportedDegreeError(
                f"Cochains of degree {degree} aren't supported",
            )


class Cochain(msgspec.Struct, frozen=True, eq=False):
    """A cochain `f in Hom(Λ^degree g, V)` for the module `V`."""

    degree: int
    module: Representation
    values: Matrix

    @property
    def dim(self) -> int:
        """Dimension of the underlying Lie algebra."""
        return self.module.algebra.dim

    def value(self, *indices: int) -> Vector:
        """Evaluate on basis vectors, e.g. `f.value(i)` or `f.value(i, j)`."""
        if len(indices) != self.degree:
            raise DimensionMismatchError(
                f"Degree {self.degree} cochain evaluated on {len(indices)} vectors",
            )
        if self.degree < 2:
            slot = indices[0] if indices else 0
            return column_vector(self.values, slot)

        i, j = indices
        if i == j:
            return (Fraction(0),) * self.module.space_dim
        if i > j:
            return tuple(-value for value in self.value(j, i))
        slot = pair_slots(self.dim).index((i, j))
        return column_vector(self.values, slot)

    def flatten(self) -> Vector:
        """Slot-major coefficient vector."""
        space_dim = self.module.space_dim
        flat = [Fraction(0)] * (space_dim * self.values.shape[1])
        for (row, slot), value in entries(self.values).items():
            flat[slot * space_dim + row] = value
        return tuple(flat)

    @property
    def is_zero(self) -> bool:
        return is_zero(self.values)

    def equals(self, other: "Cochain") -> bool:
        return (
            self.degree == other.degree
            and self.module.space_dim == other.module.space_dim
            and equal(self.values, other.values)
        )

    def _check_compatible(self, other: "Cochain") -> None:
        if self.degree != other.degree or self.values.shape != other.values.shape:
            raise DimensionMismatchError(
                f"Incompatible cochains: degree {self.degree} {self.values.shape} vs "
                f"degree {other.degree} {other.values.shape}",
            )

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_compatible(other)
        return Cochain(self.degree, self.module, add(self.values, other.values))

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check_compatible(other)
        return Cochain(self.degree, self.module, sub(self.values, other.values))

    def __neg__(self) -> "Cochain":
        return Cochain(self.degree, self.module, neg(self.values))

    def scaled(self, coefficient: Scalar) -> "Cochain":
        return Cochain(self.degree, self.module, scale(coefficient, self.values))


def cochain(module: Representation, degree: int, values: Matrix) -> Cochain:
    """Wrap a value matrix as a `Cochain`, checking its shape."""
    expected = (module.space_dim, num_slots(module.algebra.dim, degree))
    if values.shape != expected:
        raise DimensionMismatchError(
            f"Degree {degree} cochain needs values of shape {expected}, "
            f"got {values.shape}",
        )
    return Cochain(degree=degree, module=module, values=values)


def cochain_from_vectors(
    module: Representation,
    degree: int,
    vectors: Sequence[Sequence[Scalar]],
) -> Cochain:
    """Build a cochain from one module vector per slot."""
    expected = num_slots(module.algebra.dim, degree)
    if len(vectors) != expected:
        raise DimensionMismatchError(
            f"Degree {degree} cochain needs {expected} values, got {len(vectors)}",
        )
    return cochain(module, degree, from_columns(vectors, module.space_dim))


def cochain_from_flat(
    module: Representation,
    degree: int,
    flat: Sequence[Scalar],
) -> Cochain:
    """Inverse of `Cochain.flatten`."""
    space_dim = module.space_dim
    slots = num_slots(module.algebra.dim, degree)
    if len(flat) != space_dim * slots:
        raise DimensionMismatchError(
            f"Flat degree {degree} cochain needs {space_dim * slots} entries, "
            f"got {len(flat)}",
        )
    return cochain(
        module,
        degree,
        matrix_from_entries(
            {
                (index % space_dim, index // space_dim): value
                for index, value in enumerate(flat)
                if value
            },
            (space_dim, slots),
        ),
    )


def zero_cochain(module: Representation, degree: int) -> Cochain:
    return cochain(
        module,
        degree,
        zeros((module.space_dim, num_slots(module.algebra.dim, degree))),
    )


def coboundary_matrix(module: Representation, degree: int) -> Matrix:
    """Matrix of `δ: C^degree -> C^(degree + 1)` on flattened cochains.

    `(δv)(x_i) = ρ(x_i) v` and
    `(δf)(x_i, x_j) = ρ(x_i) f(x_j) - ρ(x_j) f(x_i) - f([x_i, x_j])`.

    Raises
    ------
    UnsupportedDegreeError
        Unless `degree` is 0 or 1.
    """
    algebra = module.algebra
    dim, space_dim = algebra.dim, module.space_dim
    match degree:
        case 0:
            if dim == 0:
                return zeros((0, space_dim))
            return vstack(*module.rho)
        case 1:
            rho_entries = [entries(matrix) for matrix in module.rho]
            accumulated: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
            for slot, (i, j) in enumerate(pair_slots(dim)):
                row_offset = slot * space_dim
                for (row, col), value in rho_entries[i].items():
                    accumulated[row_offset + row, j * space_dim + col] += value
                for (row, col), value in rho_entries[j].items():
                    accumulated[row_offset + row, i * space_dim + col] -= value
                for k, value in algebra.terms.get((i, j), {}).items():
                    for component in range(space_dim):
                        accumulated[
                            row_offset + component,
                            k * space_dim + component,
                        ] -= value
            return matrix_from_entries(
                accumulated,
                (num_slots(dim, 2) * space_dim, dim * space_dim),
            )
        case _:
            raise UnsupportedDegreeError(
                f"Coboundary from degree {degree} isn't supported (only 0 and 1)",
            )


def coboundary(f: Cochain) -> Cochain:
    """The Chevalley-Eilenberg coboundary `δf`, of degree `f.degree + 1`."""
    image = matvec(coboundary_matrix(f.module, f.degree), f.flatten())
    return cochain_from_flat(f.module, f.degree + 1, image)


def is_cocycle(f: Cochain) -> bool:
    """Whether `δf = 0` exactly."""
    return coboundary(f).is_zero


def solve_primitive(f: Cochain, *, with_kernel: bool = False) -> LinearSolution:
    """Solve `δv = f` for a degree-0 cochain `v`.

    The returned solution carries the rank certificate: the system is inconsistent
    exactly when `augmented_rank > rank`.
    """
    if f.degree != 1:
        raise UnsupportedDegreeError(f"Primitives only for degree 1, got {f.degree}")
    system = coboundary_matrix(f.module, 0)
    solution = solve(system, f.flatten(), with_kernel=with_kernel)
    logger.debug(
        f"Primitive system {system.shape}: rank {solution.rank}, "
        f"augmented rank {solution.augmented_rank}",
    )
    return solution


def find_primitive(f: Cochain) -> Cochain | None:
    """Return some `v` with `δv = f`, or `None` if `f` is not a coboundary.

    Raises
    ------
    NotACocycleError
        If `f` is not closed to begin with.
    """
    if f.degree != 1:
        raise UnsupportedDegreeError(f"Primitives only for degree 1, got {f.degree}")
    if not is_cocycle(f):
        raise NotACocycleError("Only cocycles can have primitives")
    solution = solve_primitive(f)
    if solution.particular is None:
        return None
    return cochain_from_flat(f.module, 0, solution.particular)


class CohomologySummary(msgspec.Struct, frozen=True):
    """Ranks behind `dim H^1(g, V)`."""

    cochain_dim: int
    rank_d0: int
    rank_d1: int

    @property
    def cocycle_dim(self) -> int:
        return self.cochain_dim - self.rank_d1

    @property
    def h1(self) -> int:
        return self.cocycle_dim - self.rank_d0


def h1_summary(module: Representation) -> CohomologySummary:
    """Compute `dim ker δ^1 - dim im δ^0` by exact ranks."""
    summary = CohomologySummary(
        cochain_dim=module.algebra.dim * module.space_dim,
        rank_d0=rank(coboundary_matrix(module, 0)),
        rank_d1=rank(coboundary_matrix(module, 1)),
    )
    logger.debug(f"H^1 of {module.name or 'module'}: {summary}")
    return summary


def h1_dim(module: Representation) -> int:
    return h1_summary(module).h1
