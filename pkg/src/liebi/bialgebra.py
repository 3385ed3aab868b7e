"""Lie bialgebras, their Drinfeld doubles, and coboundary bialgebras.

A bialgebra is given by two Lie algebras `g` and `g*` on dual bases. With
`[xi^j, xi^k] = sum_i d[j, k, i] xi^i`, the cobracket is

    γ(x_i) = sum_{j, k} d[j, k, i] x_j (x) x_k

and the double `g ⋈ g*` has basis `x_1..x_n, xi^1..xi^n` with the mixed bracket
`[x, xi] = -ad*_x xi + ad*_xi x` (raw dual maps) and the pairing
`<x + xi, y + eta> = <x, eta> + <xi, y>`.
"""

from collections.abc import Sequence
from fractions import Fraction

import msgspec
import numpy as np
from loguru import logger

from .cohomology import (
    Cochain,
    cochain_from_flat,
    cochain_from_vectors,
    coboundary,
    pair_slots,
)
from .lie import (
    LieAlgebra,
    Representation,
    Violation,
    adjoint,
    tensor_rep,
    validate_lie,
)
from .ratmath import (
    DimensionMismatchError,
    Matrix,
    Scalar,
    Vector,
    column_vector,
    dense,
    entries,
    inverse,
    linear_combination,
    matmul,
    matrix_from_entries,
    transpose,
)


class InvalidBialgebraError(ValueError):
    """Raised when two Lie algebras don't form a Lie bialgebra."""

    def __init__(self, violations: Sequence[Violation], message: str | None = None):
        self.violations = list(violations)
        if message is None:
            kinds = sorted({violation.kind for violation in self.violations})
            message = f"Not a Lie bialgebra ({', '.join(kinds)})"
        super().__init__(message)


class NotAMatchedPairError(InvalidBialgebraError):
    """Raised when the would-be double fails Jacobi or pairing invariance."""

    def __init__(self, violations: Sequence[Violation], witness: tuple[int, ...]):
        self.witness = witness
        super().__init__(
            violations,
            f"Not a matched pair: the double fails at basis indices {witness}",
        )


class ConsistencyError(RuntimeError):
    """An internal cross-check failed, which indicates a bug in liebi."""


def dual_basis_names(basis_names: Sequence[str]) -> tuple[str, ...]:
    return tuple(f"{name}*" for name in basis_names)


class RMatrix(msgspec.Struct, frozen=True, eq=False):
    """An element `r = sum r[j, k] x_j (x) x_k` of `g (x) g`."""

    r: Matrix

    @classmethod
    def from_terms(
        cls,
        dim: int,
        terms: dict[tuple[int, int], Scalar],
    ) -> "RMatrix":
        return cls(r=matrix_from_entries(terms, (dim, dim)))

    @property
    def dim(self) -> int:
        return self.r.shape[0]

    def flatten(self) -> Vector:
        """Row-major coefficients, matching the `g (x) g` flattening."""
        dim = self.dim
        flat = [Fraction(0)] * (dim * dim)
        for (j, k), value in entries(self.r).items():
            flat[j * dim + k] = value
        return tuple(flat)

    def image(self, index: int) -> Vector:
        """`r(xi^index)`, contracting the first tensor slot."""
        return tuple(dense(self.r)[index])


def bracket_module(algebra: LieAlgebra) -> Representation:
    """The module `g (x) g` with action `ad (x) id + id (x) ad`."""
    ad = adjoint(algebra)
    return tensor_rep(ad, ad)


class LieBialgebra(msgspec.Struct, frozen=True, eq=False, dict=True):
    """A Lie bialgebra `(g, g*)` together with its cobracket `gamma`."""

    g: LieAlgebra
    g_dual: LieAlgebra
    gamma: Cochain
    r_matrix: RMatrix | None = None

    @property
    def dim(self) -> int:
        return self.g.dim

    def cobracket(self, index: int) -> Vector:
        """`γ(x_index)` as a vector of `g (x) g`."""
        return self.gamma.value(index)

    def same_structure(self, other: "LieBialgebra") -> bool:
        """Whether both bialgebras have identical structure constants."""
        return self.g.same_structure(other.g) and self.g_dual.same_structure(
            other.g_dual,
        )


def cobracket_cochain(g: LieAlgebra, g_dual: LieAlgebra) -> Cochain:
    """Read `γ: g -> g (x) g` off the dual structure constants."""
    dim = g.dim
    columns = []
    for i in range(dim):
        columns.append(
            [g_dual.constants[j, k, i] for j in range(dim) for k in range(dim)],
        )
    return cochain_from_vectors(bracket_module(g), 1, columns)


class BialgebraValidation(msgspec.Struct, frozen=True, eq=False):
    """Result of validating a bialgebra: the bialgebra or what went wrong."""

    bialgebra: LieBialgebra | None
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return self.bialgebra is not None and not self.violations


def _cobracket_violations(gamma: Cochain) -> list[Violation]:
    dim = gamma.dim
    violations = []
    for i in range(dim):
        values = gamma.value(i)
        for j in range(dim):
            for k in range(j, dim):
                if values[j * dim + k] + values[k * dim + j]:
                    violations.append(
                        Violation(
                            kind="cobracket-antisymmetry",
                            indices=(i, j, k),
                            detail="γ(x_i) has a symmetric (x_j, x_k) component",
                        ),
                    )
    return violations


def _cocycle_violations(gamma: Cochain) -> list[Violation]:
    image = coboundary(gamma)
    return [
        Violation(
            kind="cocycle",
            indices=(i, j),
            detail="(δγ)(x_i, x_j) != 0",
        )
        for i, j in pair_slots(gamma.dim)
        if any(image.value(i, j))
    ]


def validate_bialgebra(g: LieAlgebra, g_dual: LieAlgebra) -> BialgebraValidation:
    """Check that `(g, g*)` is a Lie bialgebra.

    Both algebras must be Lie algebras, `γ` must land in `g ∧ g`, and `γ` must be a
    1-cocycle for the action of `g` on `g (x) g`.

    Raises
    ------
    DimensionMismatchError
        If `g` and `g*` have different dimensions.
    """
    if g.dim != g_dual.dim:
        raise DimensionMismatchError(f"dim g = {g.dim} but dim g* = {g_dual.dim}")

    violations = validate_lie(g).violations(prefix="g-")
    violations.extend(validate_lie(g_dual).violations(prefix="dual-"))
    gamma = cobracket_cochain(g, g_dual)
    violations.extend(_cobracket_violations(gamma))
    violations.extend(_cocycle_violations(gamma))

    if violations:
        logger.info(f"Not a Lie bialgebra: {len(violations)} violations")
        return BialgebraValidation(bialgebra=None, violations=tuple(violations))
    return BialgebraValidation(
        bialgebra=LieBialgebra(g=g, g_dual=g_dual, gamma=gamma),
    )


def make_bialgebra(g: LieAlgebra, g_dual: LieAlgebra) -> LieBialgebra:
    """Like `validate_bialgebra`, but raise if the pair is invalid.

    Raises
    ------
    InvalidBialgebraError
        With the list of violations.
    """
    validation = validate_bialgebra(g, g_dual)
    if not validation.ok:
        raise InvalidBialgebraError(validation.violations)
    return validation.bialgebra  # type: ignore


def trivial_dual(g: LieAlgebra) -> LieBialgebra:
    """The bialgebra `(g, abelian g*)` with zero cobracket."""
    return make_bialgebra(
        g,
        LieAlgebra.abelian(g.dim, dual_basis_names(g.basis_names)),
    )


class Double(msgspec.Struct, frozen=True, eq=False):
    """The Drinfeld double `g ⋈ g*` and its invariant pairing.

    Basis vectors `0..n-1` are `x_1..x_n`, and `n..2n-1` are `xi^1..xi^n`.
    """

    algebra: LieAlgebra
    pairing: Matrix
    half_dim: int

    @property
    def embedded_g(self) -> range:
        return range(self.half_dim)

    @property
    def embedded_gdual(self) -> range:
        return range(self.half_dim, 2 * self.half_dim)

    def restrict(self, indices: range) -> LieAlgebra:
        """The subalgebra on a block of basis vectors (must be closed)."""
        start = indices.start
        constants = self.algebra.constants[
            start : indices.stop,
            start : indices.stop,
            start : indices.stop,
        ]
        return LieAlgebra.from_constants(
            self.algebra.basis_names[start : indices.stop],
            constants,
        )

    def embed(self, x: Sequence[Scalar], xi: Sequence[Scalar]) -> Vector:
        """The vector `x + xi` of the double."""
        return tuple(Fraction(value) for value in (*x, *xi))

    def pair(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Fraction:
        """`<u, v>` under the double's pairing."""
        n = self.half_dim
        total = Fraction(0)
        for a in range(n):
            total += Fraction(u[a]) * Fraction(v[a + n])
            total += Fraction(u[a + n]) * Fraction(v[a])
        return total


def _double_constants(b: LieBialgebra) -> np.ndarray:
    n = b.dim
    c, d = b.g.constants, b.g_dual.constants
    constants = np.full((2 * n, 2 * n, 2 * n), Fraction(0), dtype=object)
    constants[:n, :n, :n] = c
    constants[n:, n:, n:] = d
    for i in range(n):
        for a in range(n):
            for l in range(n):
                # [x_i, xi^a] = -sum_l c[i, l, a] xi^l + sum_l d[a, l, i] x_l
                constants[i, n + a, n + l] = -c[i, l, a]
                constants[i, n + a, l] = d[a, l, i]
                constants[n + a, i, n + l] = c[i, l, a]
                constants[n + a, i, l] = -d[a, l, i]
    return constants


def _pairing_matrix(n: int) -> Matrix:
    return matrix_from_entries(
        {
            **{(a, n + a): 1 for a in range(n)},
            **{(n + a, a): 1 for a in range(n)},
        },
        (2 * n, 2 * n),
    )


def _invariance_violations(constants: np.ndarray, n: int) -> list[Violation]:
    # <[a, b], c> + <b, [a, c]> with the pairing swapping the two halves.
    swap = [*range(n, 2 * n), *range(n)]
    paired = constants[:, :, swap]
    invariance = paired + paired.transpose(0, 2, 1)
    return [
        Violation(
            kind="pairing-invariance",
            indices=(int(a), int(b), int(c)),
            detail="<[a, b], c> + <b, [a, c]> != 0",
        )
        for a, b, c in np.argwhere(invariance.astype(bool))
    ]


def build_double(b: LieBialgebra) -> Double:
    """Assemble and validate the Drinfeld double `g ⋈ g*`.

    Raises
    ------
    NotAMatchedPairError
        If the double fails Jacobi or the pairing isn't invariant. The witness is
        the first failing index tuple.
    """
    n = b.dim
    names = (*b.g.basis_names, *b.g_dual.basis_names)
    algebra = LieAlgebra.from_constants(names, _double_constants(b))

    report = validate_lie(algebra)
    if not report.is_valid:
        witness = report.jacobi[0] if report.jacobi else report.antisymmetry[0]
        raise NotAMatchedPairError(report.violations(prefix="double-"), witness)

    violations = _invariance_violations(algebra.constants, n)
    if violations:
        raise NotAMatchedPairError(violations, violations[0].indices)

    logger.debug(f"Built {2 * n}-dim double of {names}")
    return Double(algebra=algebra, pairing=_pairing_matrix(n), half_dim=n)


def coboundary_bialgebra(g: LieAlgebra, r: RMatrix) -> BialgebraValidation:
    """The coboundary bialgebra with `γ = δr`.

    The dual bracket is synthesized from `γ` and checked for antisymmetry and
    Jacobi.

    Raises
    ------
    DimensionMismatchError
        If `r` isn't `dim g x dim g`.
    """
    n = g.dim
    if r.r.shape != (n, n):
        raise DimensionMismatchError(f"r-matrix shape {r.r.shape} for dim {n}")
    module = bracket_module(g)
    gamma = coboundary(cochain_from_flat(module, 0, r.flatten()))

    violations = validate_lie(g).violations(prefix="g-")
    violations.extend(_cobracket_violations(gamma))
    if violations:
        return BialgebraValidation(bialgebra=None, violations=tuple(violations))

    dual_constants = np.full((n, n, n), Fraction(0), dtype=object)
    for i in range(n):
        values = gamma.value(i)
        for j in range(n):
            for k in range(n):
                dual_constants[j, k, i] = values[j * n + k]
    g_dual = LieAlgebra.from_constants(dual_basis_names(g.basis_names), dual_constants)

    violations = validate_lie(g_dual).violations(prefix="dual-")
    if violations:
        logger.info(f"r-matrix induces an invalid dual bracket: {len(violations)}")
        return BialgebraValidation(bialgebra=None, violations=tuple(violations))

    return BialgebraValidation(
        bialgebra=LieBialgebra(g=g, g_dual=g_dual, gamma=gamma, r_matrix=r),
    )


def swap(b: LieBialgebra) -> LieBialgebra:
    """The dual bialgebra `(g*, g)`.

    Raises
    ------
    ConsistencyError
        If the swapped pair fails validation (that would be a bug).
    """
    validation = validate_bialgebra(b.g_dual, b.g)
    if not validation.ok:
        raise ConsistencyError(
            f"Swapped bialgebra failed validation: {validation.violations}",
        )
    return validation.bialgebra  # type: ignore


def change_basis(b: LieBialgebra, change: Matrix) -> LieBialgebra:
    """Transport `b` to the basis `x'_i = sum_k change[k, i] x_k`.

    The dual basis transforms by `(change^-1)^T`, and an r-matrix (if any) is carried
    along as `change^-1 r change^-T`.

    Raises
    ------
    SingularMatrixError
        If `change` is not invertible.
    ConsistencyError
        If the transported pair fails validation (that would be a bug).
    """
    backward = inverse(change)
    g = b.g.transformed(change)
    g_dual = b.g_dual.transformed(transpose(backward))
    validation = validate_bialgebra(g, g_dual)
    if not validation.ok:
        raise ConsistencyError(
            f"Basis change broke the bialgebra: {validation.violations}",
        )
    transported = validation.bialgebra
    if b.r_matrix is not None:
        r = RMatrix(r=matmul(matmul(backward, b.r_matrix.r), transpose(backward)))
        transported = LieBialgebra(
            g=transported.g,  # type: ignore
            g_dual=transported.g_dual,  # type: ignore
            gamma=transported.gamma,  # type: ignore
            r_matrix=r,
        )
    return transported  # type: ignore


def ad_dual_on_g(b: LieBialgebra) -> tuple[Matrix, ...]:
    """The raw dual maps `ad*_{xi^a}` of `g*` acting on `g`.

    `ad*_{xi^a} x_i = sum_l d[a, l, i] x_l`.
    """
    return tuple(transpose(matrix) for matrix in b.g_dual.ad)


def ad_dual_of(b: LieBialgebra, xi: Sequence[Scalar]) -> Matrix:
    """`ad*_xi` on `g` for an arbitrary `xi in g*`."""
    return linear_combination(list(xi), list(ad_dual_on_g(b)))


def contraction(b: LieBialgebra, xi: Sequence[Scalar], index: int) -> Vector:
    """`ι_xi γ(x_index)`, contracting `xi` into the first slot of `γ(x_index)`."""
    n = b.dim
    values = b.cobracket(index)
    return tuple(
        sum(
            (Fraction(xi[j]) * values[j * n + k] for j in range(n) if xi[j]),
            Fraction(0),
        )
        for k in range(n)
    )


def check_duality(b: LieBialgebra) -> list[tuple[int, int]]:
    """Pairs `(a, i)` where `ι_{xi^a} γ(x_i) != ad*_{xi^a} x_i`."""
    n = b.dim
    maps = ad_dual_on_g(b)
    failures = []
    for a in range(n):
        xi = [Fraction(int(position == a)) for position in range(n)]
        for i in range(n):
            if contraction(b, xi, i) != column_vector(maps[a], i):
                failures.append((a, i))
    return failures


def restriction_matches(b: LieBialgebra, double: Double) -> bool:
    """Whether the double restricts to `g` and `g*` exactly."""
    return double.restrict(double.embedded_g).same_structure(b.g) and double.restrict(
        double.embedded_gdual,
    ).same_structure(b.g_dual)
