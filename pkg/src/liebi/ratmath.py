"""Exact rational linear algebra on top of sympy's `DomainMatrix`.

Every matrix in liebi is a sparse `DomainMatrix` over `QQ`. Scalars that leave
this module are `fractions.Fraction`s (always reduced, positive denominator), and
vectors are tuples of them. Nothing here ever touches floating point.
"""

import re
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from typing import TypeAlias

import msgspec
from loguru import logger
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import (
    DMNonInvertibleMatrixError,
    DMNonSquareMatrixError,
)

Rational: TypeAlias = Fraction
Vector: TypeAlias = tuple[Fraction, ...]
Matrix: TypeAlias = DomainMatrix
Scalar: TypeAlias = Fraction | int

_RATIONAL_PATTERN = re.compile(r"^[+-]?\d+(/\d+)?$")


class DimensionMismatchError(ValueError):
    """Raised when operands have incompatible shapes."""


class SingularMatrixError(ValueError):
    """Raised when inverting a singular (or non-square) matrix."""


def parse_rational(text: str) -> Fraction:
    """Parse `"p/q"` or an integer string into a `Fraction`.

    Decimal and exponent notation are rejected so no binary floating point value
    can sneak in.

    Raises
    ------
    ValueError
        If `text` isn't an exact rational literal or has a zero denominator.
    """
    stripped = text.strip()
    if not _RATIONAL_PATTERN.match(stripped):
        raise ValueError(f"Not an exact rational: {text!r}")
    try:
        return Fraction(stripped)
    except ZeroDivisionError as zde:
        raise ValueError(f"Zero denominator: {text!r}") from zde


def format_rational(value: Scalar) -> str:
    """Format a rational as `"p/q"` (or just `"p"` for integers)."""
    return str(Fraction(value))


def to_qq(value: Scalar):
    """Convert a `Fraction` or `int` into an element of `QQ`."""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(element) -> Fraction:
    """Convert an element of `QQ` back into a `Fraction`."""
    return Fraction(int(element.numerator), int(element.denominator))


def vector(values: Iterable[Scalar]) -> Vector:
    """Normalize any iterable of rationals into a `Vector`."""
    return tuple(Fraction(value) for value in values)


def zero_vector(length: int) -> Vector:
    return (Fraction(0),) * length


def unit_vector(length: int, index: int) -> Vector:
    return tuple(Fraction(int(position == index)) for position in range(length))


def add_vectors(*vectors: Sequence[Scalar]) -> Vector:
    """Sum vectors of the same length."""
    lengths = {len(v) for v in vectors}
    if len(lengths) > 1:
        raise DimensionMismatchError(f"Vectors of lengths {sorted(lengths)}")
    return tuple(
        sum((Fraction(x) for x in column), Fraction(0)) for column in zip(*vectors)
    )


def scale_vector(coefficient: Scalar, values: Sequence[Scalar]) -> Vector:
    return tuple(Fraction(coefficient) * Fraction(x) for x in values)


def is_zero_vector(values: Sequence[Scalar]) -> bool:
    return not any(values)


def matrix_from_entries(
    entries: Mapping[tuple[int, int], Scalar],
    shape: tuple[int, int],
) -> Matrix:
    """Build a sparse matrix from a `{(row, col): value}` mapping.

    Zero values are dropped.
    """
    rows, cols = shape
    dok = {}
    for (row, col), value in entries.items():
        if not (0 <= row < rows and 0 <= col < cols):
            raise DimensionMismatchError(f"Entry {(row, col)} outside shape {shape}")
        if value:
            dok[row, col] = to_qq(value)
    return DomainMatrix.from_dok(dok, shape, QQ)


def matrix(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    """Build a sparse matrix from dense rows."""
    num_rows = len(rows)
    num_cols = len(rows[0]) if rows else 0
    if any(len(row) != num_cols for row in rows):
        raise DimensionMismatchError("Ragged rows")
    return matrix_from_entries(
        {(i, j): value for i, row in enumerate(rows) for j, value in enumerate(row)},
        (num_rows, num_cols),
    )


def column(values: Sequence[Scalar]) -> Matrix:
    """Turn a vector into a single-column matrix."""
    return matrix_from_entries(
        {(i, 0): v for i, v in enumerate(values)},
        (len(values), 1),
    )


def from_columns(columns: Sequence[Sequence[Scalar]], num_rows: int) -> Matrix:
    """Build a matrix whose j-th column is `columns[j]`."""
    entries = {}
    for j, values in enumerate(columns):
        if len(values) != num_rows:
            raise DimensionMismatchError(
                f"Column {j} has length {len(values)}, expected {num_rows}",
            )
        entries.update({(i, j): v for i, v in enumerate(values)})
    return matrix_from_entries(entries, (num_rows, len(columns)))


def entries(matrix: Matrix) -> dict[tuple[int, int], Fraction]:
    """Nonzero entries of `matrix` as `{(row, col): Fraction}`."""
    return {key: from_qq(value) for key, value in matrix.to_dok().items()}


def entry(matrix: Matrix, row: int, col: int) -> Fraction:
    return from_qq(matrix.to_sparse().rep.getitem(row, col))


def dense(matrix: Matrix) -> list[list[Fraction]]:
    """Dense rows of `matrix` as `Fraction`s."""
    rows, cols = matrix.shape
    result = [[Fraction(0)] * cols for _ in range(rows)]
    for (i, j), value in entries(matrix).items():
        result[i][j] = value
    return result


def column_vector(matrix: Matrix, index: int = 0) -> Vector:
    """Extract column `index` of `matrix` as a `Vector`."""
    rows, _ = matrix.shape
    values = [Fraction(0)] * rows
    for (i, j), value in entries(matrix).items():
        if j == index:
            values[i] = value
    return tuple(values)


def identity(size: int) -> Matrix:
    return DomainMatrix.eye(size, QQ)


def zeros(shape: tuple[int, int]) -> Matrix:
    return DomainMatrix.zeros(shape, QQ)


def _check_same_shape(a: Matrix, b: Matrix) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"Shapes differ: {a.shape} vs {b.shape}")


def add(a: Matrix, b: Matrix) -> Matrix:
    _check_same_shape(a, b)
    return a.to_sparse().add(b.to_sparse())


def sub(a: Matrix, b: Matrix) -> Matrix:
    _check_same_shape(a, b)
    return a.to_sparse().sub(b.to_sparse())


def neg(a: Matrix) -> Matrix:
    return a.to_sparse().neg()


def scale(coefficient: Scalar, a: Matrix) -> Matrix:
    if not coefficient:
        return zeros(a.shape)
    return a.to_sparse().scalarmul(to_qq(coefficient))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"Cannot multiply {a.shape} by {b.shape}")
    return a.to_sparse().matmul(b.to_sparse())


def commutator(a: Matrix, b: Matrix) -> Matrix:
    """Matrix commutator `ab - ba`."""
    return sub(matmul(a, b), matmul(b, a))


def transpose(a: Matrix) -> Matrix:
    return a.to_sparse().transpose()


def linear_combination(
    coefficients: Sequence[Scalar],
    matrices: Sequence[Matrix],
) -> Matrix:
    """Return `sum(c * m)` over paired coefficients and matrices."""
    if len(coefficients) != len(matrices):
        raise DimensionMismatchError(
            f"{len(coefficients)} coefficients for {len(matrices)} matrices",
        )
    if not matrices:
        raise DimensionMismatchError("Empty linear combination has no shape")
    accumulated: dict[tuple[int, int], Fraction] = {}
    for coefficient, term in zip(coefficients, matrices):
        if not coefficient:
            continue
        coefficient = Fraction(coefficient)
        for key, value in entries(term).items():
            accumulated[key] = accumulated.get(key, Fraction(0)) + coefficient * value
    return matrix_from_entries(accumulated, matrices[0].shape)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product, `(a ⊗ b)[i*p + k, j*q + l] = a[i, j] * b[k, l]`."""
    a_rows, a_cols = a.shape
    b_rows, b_cols = b.shape
    b_entries = entries(b)
    product = {}
    for (i, j), a_value in entries(a).items():
        for (k, l), b_value in b_entries.items():
            product[i * b_rows + k, j * b_cols + l] = a_value * b_value
    return matrix_from_entries(product, (a_rows * b_rows, a_cols * b_cols))


def hstack(*blocks: Matrix) -> Matrix:
    """Stack matrices side by side, staying sparse."""
    num_rows = {block.shape[0] for block in blocks}
    if len(num_rows) != 1:
        raise DimensionMismatchError(f"Row counts differ: {sorted(num_rows)}")
    stacked = {}
    offset = 0
    for block in blocks:
        for (i, j), value in block.to_dok().items():
            stacked[i, j + offset] = value
        offset += block.shape[1]
    return DomainMatrix.from_dok(stacked, (num_rows.pop(), offset), QQ)


def vstack(*blocks: Matrix) -> Matrix:
    """Stack matrices on top of each other, staying sparse.

    `DomainMatrix.vstack` densifies, which is far too expensive for the
    coboundary systems.
    """
    num_cols = {block.shape[1] for block in blocks}
    if len(num_cols) != 1:
        raise DimensionMismatchError(f"Column counts differ: {sorted(num_cols)}")
    stacked = {}
    offset = 0
    for block in blocks:
        for (i, j), value in block.to_dok().items():
            stacked[i + offset, j] = value
        offset += block.shape[0]
    return DomainMatrix.from_dok(stacked, (offset, num_cols.pop()), QQ)


def is_zero(a: Matrix) -> bool:
    return a.is_zero_matrix


def equal(a: Matrix, b: Matrix) -> bool:
    """Exact equality of shape and entries."""
    return a.shape == b.shape and a.to_dok() == b.to_dok()


def matvec(a: Matrix, values: Sequence[Scalar]) -> Vector:
    """Apply `a` to a vector."""
    if a.shape[1] != len(values):
        raise DimensionMismatchError(
            f"Cannot apply {a.shape} matrix to vector of length {len(values)}",
        )
    result = [Fraction(0)] * a.shape[0]
    for (i, j), value in entries(a).items():
        if values[j]:
            result[i] += value * Fraction(values[j])
    return tuple(result)


def trace(a: Matrix) -> Fraction:
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"Trace of non-square {a.shape} matrix")
    return sum(
        (value for (i, j), value in entries(a).items() if i == j),
        Fraction(0),
    )


def inverse(a: Matrix) -> Matrix:
    """Exact inverse of a square matrix.

    Raises
    ------
    SingularMatrixError
        If `a` is not square or not invertible.
    """
    try:
        return a.to_sparse().inv().to_sparse()
    except (DMNonInvertibleMatrixError, DMNonSquareMatrixError) as error:
        raise SingularMatrixError(f"Cannot invert {a.shape} matrix") from error


def _reduce(a: Matrix) -> tuple[dict[int, dict[int, object]], list[int]]:
    """Reduced row echelon form of `a`, as rows keyed by their pivot column."""
    reduced, _ = a.to_sparse().rref(method="GJ")
    by_pivot = {}
    for row in reduced.to_dod().values():
        if row:
            by_pivot[min(row)] = row
    return by_pivot, sorted(by_pivot)


def rank(a: Matrix) -> int:
    """Exact rank over the rationals."""
    if 0 in a.shape:
        return 0
    _, pivots = _reduce(a)
    return len(pivots)


class LinearSolution(msgspec.Struct, frozen=True):
    """Affine solution set of `A x = b`.

    `particular` is `None` exactly when the system is inconsistent, which is
    certified by `augmented_rank > rank`. Free variables are set to zero in the
    particular solution, and `kernel_basis` holds one vector per free column
    (when requested), so the output is a deterministic function of `(A, b)`.
    """

    particular: Vector | None
    kernel_basis: tuple[Vector, ...]
    rank: int
    augmented_rank: int
    num_unknowns: int

    @property
    def is_consistent(self) -> bool:
        return self.particular is not None

    @property
    def nullity(self) -> int:
        return self.num_unknowns - self.rank

    def general(self, coefficients: Sequence[Scalar]) -> Vector:
        """Return `particular + sum(c_i * kernel_basis[i])`."""
        if self.particular is None:
            raise ValueError("Inconsistent system has no solutions")
        if len(coefficients) != len(self.kernel_basis):
            raise DimensionMismatchError(
                f"{len(coefficients)} coefficients for "
                f"{len(self.kernel_basis)} kernel vectors",
            )
        return add_vectors(
            self.particular,
            *(scale_vector(c, k) for c, k in zip(coefficients, self.kernel_basis)),
        )


def solve(
    a: Matrix,
    b: Sequence[Scalar],
    *,
    with_kernel: bool = True,
) -> LinearSolution:
    """Solve `a x = b` exactly.

    Parameters
    ----------
    a
        Coefficient matrix.
    b
        Right hand side, one entry per row of `a`.
    with_kernel
        Whether to materialize the kernel basis. Large coboundary systems only
        need the particular solution and the rank certificate.

    Returns
    -------
    The `LinearSolution` describing every solution.

    Raises
    ------
    DimensionMismatchError
        If `len(b)` doesn't match the number of rows of `a`.
    """
    num_rows, num_cols = a.shape
    if num_rows != len(b):
        raise DimensionMismatchError(
            f"Right hand side has length {len(b)}, matrix has {num_rows} rows",
        )
    logger.debug(f"Solving {num_rows}x{num_cols} system")
    by_pivot, pivots = _reduce(hstack(a, column(b)))
    rank_a = sum(1 for pivot in pivots if pivot < num_cols)
    augmented_rank = len(pivots)

    particular = None
    if augmented_rank == rank_a:
        values = [Fraction(0)] * num_cols
        for pivot in pivots:
            rhs = by_pivot[pivot].get(num_cols)
            if rhs is not None:
                values[pivot] = from_qq(rhs)
        particular = tuple(values)

    kernel_basis: list[Vector] = []
    if with_kernel:
        pivot_set = set(pivots)
        for free in range(num_cols):
            if free in pivot_set:
                continue
            values = [Fraction(0)] * num_cols
            values[free] = Fraction(1)
            for pivot in pivots:
                if pivot < num_cols and free in by_pivot[pivot]:
                    values[pivot] = -from_qq(by_pivot[pivot][free])
            kernel_basis.append(tuple(values))

    return LinearSolution(
        particular=particular,
        kernel_basis=tuple(kernel_basis),
        rank=rank_a,
        augmented_rank=augmented_rank,
        num_unknowns=num_cols,
    )


def kernel(a: Matrix) -> tuple[Vector, ...]:
    """Basis of the kernel of `a`."""
    return solve(a, zero_vector(a.shape[0])).kernel_basis


def coordinates(basis: Matrix, targets: Matrix) -> Matrix:
    """Solve `basis @ X = targets` for a basis given as independent columns.

    All right hand sides share one elimination.

    Raises
    ------
    DimensionMismatchError
        If the row counts differ, the columns of `basis` are dependent, or some
        target is outside their span.
    """
    num_rows, num_basis = basis.shape
    if targets.shape[0] != num_rows:
        raise DimensionMismatchError(
            f"Targets have {targets.shape[0]} rows, basis has {num_rows}",
        )
    by_pivot, pivots = _reduce(hstack(basis, targets))
    if pivots != list(range(num_basis)):
        raise DimensionMismatchError("Targets are not in the span of the basis")
    return matrix_from_entries(
        {
            (pivot, col - num_basis): from_qq(value)
            for pivot in pivots
            for col, value in by_pivot[pivot].items()
            if col >= num_basis
        },
        (num_basis, targets.shape[1]),
    )
