"""Built-in Lie bialgebras.

The matrix examples live inside realified `sl(n, C)`. Complex matrices are kept as
pairs of rational matrices, so a complex entry `a + bi` only ever shows up as the
two rationals `a` and `b`. Fixed bases (`E_jk` is a matrix unit, `j < k` in
lexicographic order):

- `su(n)`: `E_jk - E_kj` and `i(E_jk + E_kj)` for each `j < k` (named `A{j}{k}`
  and `S{j}{k}`), then `i(E_jj - E_{j+1,j+1})` (named `iH{j}`).
- `sb(n, C)`: `E_jk` and `iE_jk` for each `j < k` (named `E{j}{k}` and `iE{j}{k}`),
  then `E_jj - E_{j+1,j+1}` (named `H{j}`).

The invariant pairing is `<X, Y> = Im tr(XY)`. Whichever factor plays `g`, the basis
of `g*` is the pairing-dual of the `g` basis, computed by inverting the rational
pairing matrix once.
"""

import functools
import re
from collections.abc import Callable, Sequence
from fractions import Fraction
from typing import Literal, TypeAlias

import msgspec
import numpy as np
from loguru import logger

from .bialgebra import (
    ConsistencyError,
    InvalidBialgebraError,
    LieBialgebra,
    RMatrix,
    build_double,
    coboundary_bialgebra,
    dual_basis_names,
    make_bialgebra,
)
from .cohomology import pair_slots
from .lie import LieAlgebra
from .ratmath import (
    Matrix,
    Scalar,
    SingularMatrixError,
    coordinates,
    dense,
    equal,
    from_columns,
    inverse,
    matrix,
)
from .runtime_environment import get_runtime_environment

Orientation: TypeAlias = Literal["su_first", "sb_first"]
ORIENTATIONS: tuple[Orientation, ...] = ("su_first", "sb_first")

_SL_NAME_PATTERN = re.compile(r"^sl(\d+)-(su|sb)-first$")


class UnknownEntryError(KeyError):
    """Raised for catalog names which don't exist."""


class SizeCapError(ValueError):
    """Raised when an entry would exceed the configured `sl(n)` size cap."""


class ComplexMatrix(msgspec.Struct, frozen=True, eq=False):
    """A complex matrix stored as its real and imaginary parts."""

    real: np.ndarray
    imag: np.ndarray

    @classmethod
    def zeros(cls, size: int) -> "ComplexMatrix":
        return cls(
            real=np.full((size, size), Fraction(0), dtype=object),
            imag=np.full((size, size), Fraction(0), dtype=object),
        )

    @classmethod
    def unit(
        cls,
        size: int,
        row: int,
        col: int,
        imaginary: bool = False,
    ) -> "ComplexMatrix":
        """The matrix unit `E_{row,col}`, or `i E_{row,col}`."""
        result = cls.zeros(size)
        (result.imag if imaginary else result.real)[row, col] = Fraction(1)
        return result

    @property
    def size(self) -> int:
        return self.real.shape[0]

    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self.real + other.real, self.imag + other.imag)

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self.real - other.real, self.imag - other.imag)

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(
            self.real @ other.real - self.imag @ other.imag,
            self.real @ other.imag + self.imag @ other.real,
        )

    def scaled(self, coefficient: Scalar) -> "ComplexMatrix":
        return ComplexMatrix(self.real * coefficient, self.imag * coefficient)

    def times_i(self) -> "ComplexMatrix":
        return ComplexMatrix(-self.imag, self.real)

    def commutator(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return self @ other - other @ self

    def trace(self) -> tuple[Fraction, Fraction]:
        """Real and imaginary parts of the trace."""
        return (
            sum(self.real.diagonal(), Fraction(0)),
            sum(self.imag.diagonal(), Fraction(0)),
        )

    def flatten(self) -> tuple[Fraction, ...]:
        """Real coordinates: the real part row by row, then the imaginary part."""
        return (*self.real.ravel(), *self.imag.ravel())

    def is_imaginary_diagonal(self) -> bool:
        """Whether the matrix is `i` times a real diagonal matrix."""
        off_diagonal = self.imag - np.diag(self.imag.diagonal())
        return not self.real.any() and not off_diagonal.any()


def combine(
    coefficients: Sequence[Scalar],
    matrices: Sequence[ComplexMatrix],
) -> ComplexMatrix:
    """`sum_k coefficients[k] * matrices[k]`."""
    result = ComplexMatrix.zeros(matrices[0].size)
    for coefficient, matrix_ in zip(coefficients, matrices):
        if coefficient:
            result = result + matrix_.scaled(coefficient)
    return result


def _check_size(n: int) -> None:
    if n < 2:
        raise ValueError(f"sl(n) examples need n >= 2, got {n}")


def su_basis(n: int) -> tuple[tuple[str, ...], tuple[ComplexMatrix, ...]]:
    """Names and matrices of the fixed `su(n)` basis."""
    _check_size(n)
    names, matrices = [], []
    for j, k in pair_slots(n):
        names.extend([f"A{j + 1}{k + 1}", f"S{j + 1}{k + 1}"])
        matrices.append(ComplexMatrix.unit(n, j, k) - ComplexMatrix.unit(n, k, j))
        matrices.append(
            ComplexMatrix.unit(n, j, k, imaginary=True)
            + ComplexMatrix.unit(n, k, j, imaginary=True),
        )
    for j in range(n - 1):
        names.append(f"iH{j + 1}")
        matrices.append(
            ComplexMatrix.unit(n, j, j, imaginary=True)
            - ComplexMatrix.unit(n, j + 1, j + 1, imaginary=True),
        )
    return tuple(names), tuple(matrices)


def sb_basis(n: int) -> tuple[tuple[str, ...], tuple[ComplexMatrix, ...]]:
    """Names and matrices of the fixed `sb(n, C)` basis."""
    _check_size(n)
    names, matrices = [], []
    for j, k in pair_slots(n):
        names.extend([f"E{j + 1}{k + 1}", f"iE{j + 1}{k + 1}"])
        matrices.append(ComplexMatrix.unit(n, j, k))
        matrices.append(ComplexMatrix.unit(n, j, k, imaginary=True))
    for j in range(n - 1):
        names.append(f"H{j + 1}")
        matrices.append(
            ComplexMatrix.unit(n, j, j) - ComplexMatrix.unit(n, j + 1, j + 1),
        )
    return tuple(names), tuple(matrices)


def _realified(matrices: Sequence[ComplexMatrix]) -> Matrix:
    size = matrices[0].size
    return from_columns([m.flatten() for m in matrices], 2 * size * size)


def algebra_from_matrices(
    basis_names: Sequence[str],
    matrices: Sequence[ComplexMatrix],
) -> LieAlgebra:
    """Structure constants of the real span of `matrices` under the commutator.

    Raises
    ------
    DimensionMismatchError
        If the matrices are dependent or their span isn't closed.
    """
    dim = len(matrices)
    pairs = pair_slots(dim)
    constants = np.full((dim, dim, dim), Fraction(0), dtype=object)
    if pairs:
        targets = from_columns(
            [matrices[i].commutator(matrices[j]).flatten() for i, j in pairs],
            2 * matrices[0].size ** 2,
        )
        solved = dense(coordinates(_realified(matrices), targets))
        for slot, (i, j) in enumerate(pairs):
            for k in range(dim):
                constants[i, j, k] = solved[k][slot]
                constants[j, i, k] = -solved[k][slot]
    return LieAlgebra.from_constants(basis_names, constants)


def im_trace_pairing(
    first: Sequence[ComplexMatrix],
    second: Sequence[ComplexMatrix],
) -> Matrix:
    """`P[a][k] = Im tr(first[a] second[k])`."""
    return matrix([[(a @ b).trace()[1] for b in second] for a in first])


def su_n(n: int) -> LieAlgebra:
    return algebra_from_matrices(*su_basis(n))


def sb_n(n: int) -> LieAlgebra:
    return algebra_from_matrices(*sb_basis(n))


def sl_n(n: int) -> LieAlgebra:
    """Realified `sl(n, C)` on the `su(n)` basis followed by the `sb(n, C)` basis."""
    su_names, su_matrices = su_basis(n)
    sb_names, sb_matrices = sb_basis(n)
    return algebra_from_matrices(su_names + sb_names, su_matrices + sb_matrices)


def t_subspace(n: int) -> tuple[int, ...]:
    """Indices of the `sb(n, C)` basis spanning the real diagonal `t`."""
    _check_size(n)
    start = n * (n - 1)
    return tuple(range(start, start + n - 1))


def n_plus_subspace(n: int) -> tuple[int, ...]:
    """Indices of the `sb(n, C)` basis spanning the strictly upper triangular part."""
    _check_size(n)
    return tuple(range(n * (n - 1)))


def i_t_subspace(n: int) -> tuple[int, ...]:
    """Indices of the `su(n)` basis spanning `i t`.

    `su_basis` lists its diagonal elements where `sb_basis` lists `t`.
    """
    return t_subspace(n)


class ExpectedVerdicts(msgspec.Struct, frozen=True):
    """Known answers for an entry; `None` means not asserted."""

    vanishing: bool | None = None
    c1_vanishing: bool | None = None


class MatrixModel(msgspec.Struct, frozen=True, eq=False):
    """Matrices realizing the `g` basis and its pairing-dual `g*` basis."""

    g_matrices: tuple[ComplexMatrix, ...]
    dual_matrices: tuple[ComplexMatrix, ...]
    # Im-trace pairing of the g basis against the raw basis of the other factor.
    pairing: Matrix

    def dual_matrix(self, coefficients: Sequence[Scalar]) -> ComplexMatrix:
        """The matrix of `sum_b coefficients[b] xi^b`."""
        return combine(coefficients, self.dual_matrices)

    @property
    def double_matrices(self) -> tuple[ComplexMatrix, ...]:
        return self.g_matrices + self.dual_matrices


class CatalogEntry(msgspec.Struct, frozen=True, eq=False):
    name: str
    bialgebra: LieBialgebra
    provenance: str
    expected: ExpectedVerdicts = msgspec.field(default_factory=ExpectedVerdicts)
    metadata: dict[str, str] = msgspec.field(default_factory=dict)
    model: MatrixModel | None = None


_DESCRIPTIONS = {
    "hong-liu-3d": "3-dim Heisenberg bialgebra, center not preserved by g*",
    "affine-2d-r": "2-dim affine algebra, coboundary bialgebra of t^e",
    "abelian-2d": "abelian 2-dim algebra with abelian dual",
}


def hong_liu_3d() -> CatalogEntry:
    """Heisenberg `g` whose center is moved off itself by the coadjoint `g*` action.

    `[x1, x2] = x3` on `g`, and `[xi1, xi2] = xi2`, `[xi1, xi3] = xi3` on `g*`.
    """
    g = LieAlgebra.from_brackets(("x1", "x2", "x3"), {(0, 1): {2: 1}})
    g_dual = LieAlgebra.from_brackets(
        dual_basis_names(g.basis_names),
        {(0, 1): {1: 1}, (0, 2): {2: 1}},
    )
    return CatalogEntry(
        name="hong-liu-3d",
        bialgebra=make_bialgebra(g, g_dual),
        provenance=_DESCRIPTIONS["hong-liu-3d"],
        expected=ExpectedVerdicts(vanishing=False, c1_vanishing=True),
    )


def affine_2d_coboundary() -> CatalogEntry:
    """`[t, e] = e` with the r-matrix `r = t (x) e - e (x) t`."""
    g = LieAlgebra.from_brackets(("t", "e"), {(0, 1): {1: 1}})
    r = RMatrix.from_terms(2, {(0, 1): 1, (1, 0): -1})
    validation = coboundary_bialgebra(g, r)
    if not validation.ok:
        raise ConsistencyError(f"affine-2d-r is invalid: {validation.violations}")
    return CatalogEntry(
        name="affine-2d-r",
        bialgebra=validation.bialgebra,  # type: ignore
        provenance=_DESCRIPTIONS["affine-2d-r"],
        expected=ExpectedVerdicts(vanishing=True, c1_vanishing=True),
    )


def abelian_2d() -> CatalogEntry:
    g = LieAlgebra.abelian(2)
    return CatalogEntry(
        name="abelian-2d",
        bialgebra=make_bialgebra(
            g,
            LieAlgebra.abelian(2, dual_basis_names(g.basis_names)),
        ),
        provenance=_DESCRIPTIONS["abelian-2d"],
        expected=ExpectedVerdicts(vanishing=True, c1_vanishing=True),
    )


def _sl_provenance(n: int, orientation: Orientation) -> str:
    first, second = ("su", "sb") if orientation == "su_first" else ("sb", "su")
    return f"Manin triple sl({n}, C) = {first}({n}) + {second}({n}), Im-trace pairing"


def sl_entry_name(n: int, orientation: Orientation) -> str:
    return f"sl{n}-{orientation.replace('_', '-')}"


def manin_triple_sl_n(
    n: int,
    orientation: Orientation,
    *,
    max_n: int | None = None,
) -> CatalogEntry:
    """The bialgebra of `sl(n, C) = su(n) ⋈ sb(n, C)` with `g` the first factor.

    Raises
    ------
    SizeCapError
        If `n` exceeds the size cap (`max_n`, defaulting to the runtime environment).
    ConsistencyError
        If the pairing is degenerate or a factor isn't isotropic.
    """
    _check_size(n)
    if orientation not in ORIENTATIONS:
        raise ValueError(f"Unknown orientation {orientation!r}")
    if max_n is None:
        max_n = get_runtime_environment().max_n
    if n > max_n:
        raise SizeCapError(f"sl({n}) exceeds the size cap n <= {max_n}")

    su, sb = su_basis(n), sb_basis(n)
    (g_names, g_matrices), (_, other_matrices) = (
        (su, sb) if orientation == "su_first" else (sb, su)
    )
    pairing = im_trace_pairing(g_matrices, other_matrices)
    try:
        alignment = dense(inverse(pairing))
    except SingularMatrixError as error:
        raise ConsistencyError(f"Im-trace pairing is degenerate for n={n}") from error
    dual_matrices = tuple(
        combine([row[b] for row in alignment], other_matrices)
        for b in range(len(g_matrices))
    )
    for factor in (g_matrices, dual_matrices):
        pairing_on_factor = im_trace_pairing(factor, factor)
        if any(any(row) for row in dense(pairing_on_factor)):
            raise ConsistencyError(f"sl({n}) factor is not isotropic")

    g = algebra_from_matrices(g_names, g_matrices)
    g_dual = algebra_from_matrices(dual_basis_names(g_names), dual_matrices)
    try:
        bialgebra = make_bialgebra(g, g_dual)
    except InvalidBialgebraError as error:
        raise ConsistencyError(f"sl({n}) {orientation} is not a bialgebra") from error

    if orientation == "su_first":
        expected = ExpectedVerdicts(vanishing=True, c1_vanishing=True)
    else:
        expected = ExpectedVerdicts(vanishing=False, c1_vanishing=False)
    logger.debug(f"Built sl({n}) {orientation} ({g.dim}-dim)")
    return CatalogEntry(
        name=sl_entry_name(n, orientation),
        bialgebra=bialgebra,
        provenance=_sl_provenance(n, orientation),
        expected=expected,
        metadata={
            "orientation": orientation,
            "pairing": "Im tr(XY)",
            "dual_basis": "pairing-dual of the g basis",
            "mixed_bracket": "[x, xi] = -ad*_x xi + ad*_xi x",
        },
        model=MatrixModel(
            g_matrices=g_matrices,
            dual_matrices=dual_matrices,
            pairing=pairing,
        ),
    )


def matches_matrix_model(entry: CatalogEntry) -> bool:
    """Whether the double of `entry` is exactly its matrix model.

    Compares the double's structure constants with matrix commutators on the
    combined `g` + `g*` basis, and its pairing with the Im-trace pairing.
    """
    if entry.model is None:
        return False
    double = build_double(entry.bialgebra)
    combined = entry.model.double_matrices
    model_algebra = algebra_from_matrices(double.algebra.basis_names, combined)
    return double.algebra.same_structure(model_algebra) and equal(
        double.pairing,
        im_trace_pairing(combined, combined),
    )


_BUILDERS: dict[str, Callable[[], CatalogEntry]] = {
    "hong-liu-3d": hong_liu_3d,
    "affine-2d-r": affine_2d_coboundary,
    "abelian-2d": abelian_2d,
}
# Extra names accepted by `get_entry` but not listed.
_ALIASES = {"heisenberg-3d": "hong-liu-3d"}


def list_entries(max_n: int | None = None) -> list[tuple[str, str]]:
    """Names and one-line descriptions of every entry under the size cap.

    Entries aren't built.
    """
    if max_n is None:
        max_n = get_runtime_environment().max_n
    listing = list(_DESCRIPTIONS.items())
    for n in range(2, max_n + 1):
        for orientation in ORIENTATIONS:
            listing.append(
                (sl_entry_name(n, orientation), _sl_provenance(n, orientation)),
            )
    return listing


@functools.cache
def _build_sl(n: int, orientation: Orientation) -> CatalogEntry:
    return manin_triple_sl_n(n, orientation, max_n=n)


def get_entry(name: str, max_n: int | None = None) -> CatalogEntry:
    """Build the entry called `name`.

    Raises
    ------
    UnknownEntryError
        If there's no such entry.
    SizeCapError
        If it's an `sl(n)` entry above the size cap.
    """
    name = _ALIASES.get(name, name)
    if name in _BUILDERS:
        return _BUILDERS[name]()

    match = _SL_NAME_PATTERN.match(name)
    if match is None or int(match.group(1)) < 2:
        raise UnknownEntryError(name)
    n = int(match.group(1))
    if max_n is None:
        max_n = get_runtime_environment().max_n
    if n > max_n:
        raise SizeCapError(f"{name} exceeds the size cap n <= {max_n}")
    orientation: Orientation = "su_first" if match.group(2) == "su" else "sb_first"
    return _build_sl(n, orientation)
