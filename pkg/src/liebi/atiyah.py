"""Atiyah classes of Lie bialgebras.

For a Lie bialgebra `(g, g*)` with double `L = g ⋈ g*`, the Lie pair `(L, g)` and the
module `E = L/g ≅ g*`, the Atiyah cocycle lives in `C^1(g, g (x) End(g*))`. An
element `sum_j x_j (x) T_j` of `g (x) End(g*)` is the same thing as a linear map
`g* -> End(g*)` sending `xi^j` to `T_j`; it's flattened as `j * n^2 + vec(T_j)` with
`vec` column-major.

Sign conventions:

- `ad*` always means the raw dual map (a transpose), for `g` on `g*` and for `g*`
  on `g` alike.
- For a connection datum `S`, the curvature is `R(S) = λ + δS`, so the Atiyah
  class vanishes exactly when `δS = -λ` is solvable.
- `ι_κ γ` equals `ad*_κ` as a map `g -> g`. The class `c_1` vanishes when
  `ι_κ γ = ad_v` for some `v`, i.e. `v = -w` for a primitive `δw = ι_κ γ`.
"""

import datetime
from collections.abc import Sequence
from fractions import Fraction

import humanize
import msgspec
from loguru import logger

from .bialgebra import (
    ConsistencyError,
    Double,
    LieBialgebra,
    RMatrix,
    ad_dual_on_g,
    bracket_module,
    build_double,
    contraction,
)
from .cohomology import (
    Cochain,
    coboundary,
    cochain_from_flat,
    cochain_from_vectors,
    find_primitive,
    is_cocycle,
    solve_primitive,
)
from .lie import (
    LieAlgebra,
    ModuleMap,
    Representation,
    adjoint,
    center,
    coadjoint,
    dual_adjoint,
    end_rep,
    in_center,
    tensor_rep,
)
from .ratmath import (
    DimensionMismatchError,
    LinearSolution,
    Matrix,
    Scalar,
    Vector,
    column_vector,
    dense,
    entries,
    equal,
    is_zero_vector,
    linear_combination,
    matmul,
    matrix_from_entries,
    matvec,
    neg,
    sub,
    trace,
    unit_vector,
    zeros,
)
from .runtime_environment import get_runtime_environment

# The scalar in front of the first Atiyah class, kept symbolic.
C1_PREFACTOR = "-sqrt(-1)/(2*pi)"


class PreconditionError(ValueError):
    """Raised when an operation's input doesn't satisfy its precondition."""


def connection_module(g: LieAlgebra) -> Representation:
    """The module `g (x) End(g*)` with action `ad_x (x) id + id (x) [-ad*_x, .]`."""
    return tensor_rep(adjoint(g), end_rep(coadjoint(g)))


def _cross_checks(check: bool | None) -> bool:
    return get_runtime_environment().cross_checks if check is None else check


def _place(
    accumulated: list[Fraction],
    n: int,
    slot: int,
    coefficient: Fraction,
    endomorphism: Matrix,
) -> None:
    """Add `coefficient * x_slot (x) endomorphism` to a flattened vector."""
    offset = slot * n * n
    for (row, col), value in entries(endomorphism).items():
        accumulated[offset + col * n + row] += coefficient * value


class ConnectionDatum(msgspec.Struct, frozen=True, eq=False):
    """The free part `S: g* -> End(g*)` of a connection, one matrix per `xi^j`."""

    maps: tuple[Matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.maps)

    @classmethod
    def zero(cls, dim: int) -> "ConnectionDatum":
        return cls(maps=tuple(zeros((dim, dim)) for _ in range(dim)))

    @classmethod
    def from_flat(cls, dim: int, flat: Sequence[Scalar]) -> "ConnectionDatum":
        """Inverse of `flatten`."""
        block = dim * dim
        if len(flat) != dim * block:
            raise DimensionMismatchError(
                f"Connection datum for dim {dim} needs {dim * block} entries, "
                f"got {len(flat)}",
            )
        return cls(
            maps=tuple(
                matrix_from_entries(
                    {
                        (index % dim, index // dim): flat[j * block + index]
                        for index in range(block)
                    },
                    (dim, dim),
                )
                for j in range(dim)
            ),
        )

    def flatten(self) -> Vector:
        n = self.dim
        accumulated = [Fraction(0)] * (n * n * n)
        for j, endomorphism in enumerate(self.maps):
            _place(accumulated, n, j, Fraction(1), endomorphism)
        return tuple(accumulated)

    def equals(self, other: "ConnectionDatum") -> bool:
        return self.dim == other.dim and all(
            equal(mine, theirs) for mine, theirs in zip(self.maps, other.maps)
        )


class AtiyahCocycle(msgspec.Struct, frozen=True, eq=False):
    """The Atiyah cocycle `λ(x, xi) = ad*_{ad*_xi x}` of a bialgebra."""

    bialgebra: LieBialgebra
    cochain: Cochain

    def value(self, i: int, j: int) -> Matrix:
        """`λ(x_i, xi^j)` as an endomorphism of `g*`."""
        n = self.bialgebra.dim
        values = self.cochain.value(i)
        offset = j * n * n
        return matrix_from_entries(
            {
                (index % n, index // n): values[offset + index]
                for index in range(n * n)
            },
            (n, n),
        )


class SolveCertificate(msgspec.Struct, frozen=True):
    """Sizes and ranks of a decisive linear system.

    The system is inconsistent exactly when `augmented_rank > rank`.
    """

    equations: int
    unknowns: int
    rank: int
    augmented_rank: int

    @property
    def consistent(self) -> bool:
        return self.augmented_rank == self.rank


def _certificate(solution: LinearSolution, equations: int) -> SolveCertificate:
    return SolveCertificate(
        equations=equations,
        unknowns=solution.num_unknowns,
        rank=solution.rank,
        augmented_rank=solution.augmented_rank,
    )


def F_map(b: LieBialgebra) -> ModuleMap:  # noqa: N802
    """The module morphism `F = id (x) (-ad*): g (x) g -> g (x) End(g*)`."""
    n = b.dim
    transposed = dual_adjoint(b.g)
    accumulated: dict[tuple[int, int], Fraction] = {}
    for j in range(n):
        for k in range(n):
            for (row, col), value in entries(transposed[k]).items():
                accumulated[j * n * n + col * n + row, j * n + k] = -value
    return ModuleMap(
        source=bracket_module(b.g),
        target=connection_module(b.g),
        matrix=matrix_from_entries(accumulated, (n**3, n**2)),
    )


def trace_map(b: LieBialgebra) -> ModuleMap:
    """The module morphism `id (x) tr: g (x) End(g*) -> g`."""
    n = b.dim
    return ModuleMap(
        source=connection_module(b.g),
        target=adjoint(b.g),
        matrix=matrix_from_entries(
            {
                (j, j * n * n + r * n + r): 1
                for j in range(n)
                for r in range(n)
            },
            (n, n**3),
        ),
    )


def lambda_cocycle(b: LieBialgebra, *, check: bool | None = None) -> AtiyahCocycle:
    """The Atiyah cocycle `λ(x_i, xi^j) = ad*_{ad*_{xi^j} x_i}`.

    Raises
    ------
    ConsistencyError
        If (with cross-checks on) `λ != -F∘γ` or `λ` isn't a cocycle.
    """
    n = b.dim
    on_g_dual = dual_adjoint(b.g)
    on_g = ad_dual_on_g(b)
    columns = []
    for i in range(n):
        accumulated = [Fraction(0)] * (n**3)
        for j in range(n):
            image = column_vector(on_g[j], i)
            for k, coefficient in enumerate(image):
                if coefficient:
                    _place(accumulated, n, j, coefficient, on_g_dual[k])
        columns.append(accumulated)
    module = connection_module(b.g)
    cocycle = AtiyahCocycle(
        bialgebra=b,
        cochain=cochain_from_vectors(module, 1, columns),
    )

    if _cross_checks(check):
        via_f = neg(matmul(F_map(b).matrix, b.gamma.values))
        if not equal(cocycle.cochain.values, via_f):
            raise ConsistencyError("λ differs from -F∘γ")
        if not is_cocycle(cocycle.cochain):
            raise ConsistencyError("λ is not a cocycle")
    return cocycle


def curvature_R(b: LieBialgebra, S: ConnectionDatum) -> Cochain:  # noqa: N802, N803
    """Evaluate `R(x, xi) = -ad*_x S(xi) + S(xi) ad*_x + S(ad*_x xi) + ad*_{ad*_xi x}`.

    Raises
    ------
    DimensionMismatchError
        If `S` doesn't have one `n x n` matrix per basis vector of `g*`.
    """
    n = b.dim
    if S.dim != n or any(endomorphism.shape != (n, n) for endomorphism in S.maps):
        raise DimensionMismatchError(f"Connection datum doesn't match dim {n}")

    on_g_dual = dual_adjoint(b.g)
    cocycle = lambda_cocycle(b, check=False)
    columns = []
    for i in range(n):
        accumulated = list(cocycle.cochain.value(i))
        for j in range(n):
            commutator_part = sub(
                matmul(S.maps[j], on_g_dual[i]),
                matmul(on_g_dual[i], S.maps[j]),
            )
            _place(accumulated, n, j, Fraction(1), commutator_part)
            # ad*_{x_i} xi^j = sum_l (ad_{x_i}^T)[l, j] xi^l
            coefficients = column_vector(on_g_dual[i], j)
            for l, coefficient in enumerate(coefficients):
                if coefficient:
                    _place(accumulated, n, j, coefficient, S.maps[l])
        columns.append(accumulated)
    return cochain_from_vectors(connection_module(b.g), 1, columns)


def connection_coboundary(b: LieBialgebra, S: ConnectionDatum) -> Cochain:
    """`δS`, treating `S` as a degree-0 cochain in `g (x) End(g*)`."""
    return coboundary(cochain_from_flat(connection_module(b.g), 0, S.flatten()))


class VanishingResult(msgspec.Struct, frozen=True, eq=False):
    """Whether the Atiyah class vanishes, with a witness connection if so."""

    vanishes: bool
    witness: ConnectionDatum | None
    certificate: SolveCertificate


def atiyah_vanishes(
    b: LieBialgebra,
    *,
    cocycle: AtiyahCocycle | None = None,
) -> VanishingResult:
    """Decide whether the Atiyah class vanishes by solving `δS = -λ`."""
    if cocycle is None:
        cocycle = lambda_cocycle(b)
    target = -cocycle.cochain
    solution = solve_primitive(target)
    certificate = _certificate(solution, equations=len(target.flatten()))
    witness = None
    if solution.particular is not None:
        witness = ConnectionDatum.from_flat(b.dim, solution.particular)
    logger.debug(f"Atiyah system: {certificate}")
    return VanishingResult(
        vanishes=witness is not None,
        witness=witness,
        certificate=certificate,
    )


def r_matrix_connection(b: LieBialgebra, r: RMatrix) -> ConnectionDatum:
    """The flat connection `S(xi) = -ad*_{r(xi)}` of a coboundary bialgebra.

    Raises
    ------
    PreconditionError
        If `γ != δr`.
    """
    n = b.dim
    if r.dim != n:
        raise PreconditionError(f"r-matrix of dim {r.dim} for a dim {n} bialgebra")
    induced = coboundary(cochain_from_flat(bracket_module(b.g), 0, r.flatten()))
    if not induced.equals(b.gamma):
        raise PreconditionError("The cobracket is not the coboundary of this r-matrix")
    transposed = dual_adjoint(b.g)
    rows = dense(r.r)
    return ConnectionDatum(
        maps=tuple(
            neg(linear_combination(rows[j], list(transposed))) for j in range(n)
        ),
    )


def apply_F(b: LieBialgebra, element: Sequence[Scalar]) -> Vector:  # noqa: N802
    """`F(element)` for an element of `g (x) g`."""
    return matvec(F_map(b).matrix, element)


class CenterWitness(msgspec.Struct, frozen=True):
    """A central `x` and a `xi` with `ad*_xi x` outside the center."""

    x: Vector
    xi: Vector
    image: Vector


def center_obstruction(b: LieBialgebra) -> CenterWitness | None:
    """Search for `x in Z(g)` and a basis `xi^a` with `ad*_{xi^a} x` not central.

    Its existence forces the Atiyah class to be nonzero.
    """
    n = b.dim
    on_g = ad_dual_on_g(b)
    for x in center(b.g):
        for a in range(n):
            image = matvec(on_g[a], x)
            if not in_center(b.g, image):
                return CenterWitness(x=x, xi=unit_vector(n, a), image=image)
    return None


def modular_vector(g: LieAlgebra) -> Vector:
    """The modular vector `κ(x) = tr(ad_x)`, in the dual basis.

    Raises
    ------
    ConsistencyError
        If `κ` isn't fixed by the coadjoint action.
    """
    kappa = tuple(trace(matrix) for matrix in g.ad)
    for index, matrix in enumerate(dual_adjoint(g)):
        if not is_zero_vector(matvec(matrix, kappa)):
            raise ConsistencyError(f"ad*_x κ != 0 for basis vector {index}")
    return kappa


def c1_representative(
    b: LieBialgebra,
    *,
    kappa: Sequence[Scalar] | None = None,
    cocycle: AtiyahCocycle | None = None,
    check: bool | None = None,
) -> Cochain:
    """The cocycle `ι_κ γ: g -> g` representing `c_1` (up to the prefactor).

    Raises
    ------
    ConsistencyError
        If `ι_κ γ` isn't a cocycle or (with cross-checks on) `tr∘λ != -ι_κ γ`.
    """
    if kappa is None:
        kappa = modular_vector(b.g)
    representative = cochain_from_vectors(
        adjoint(b.g),
        1,
        [contraction(b, kappa, i) for i in range(b.dim)],
    )
    if not is_cocycle(representative):
        raise ConsistencyError("ι_κγ is not a cocycle")

    if _cross_checks(check):
        if cocycle is None:
            cocycle = lambda_cocycle(b, check=False)
        traced = matmul(trace_map(b).matrix, cocycle.cochain.values)
        if not equal(traced, neg(representative.values)):
            raise ConsistencyError("tr∘λ differs from -ι_κγ")
    return representative


def double_annihilates(
    b: LieBialgebra,
    kappa: Sequence[Scalar],
    v: Sequence[Scalar],
    double: Double | None = None,
) -> bool:
    """Whether `[κ + v, x] = 0` in the double for every basis vector `x` of `g`."""
    if double is None:
        double = build_double(b)
    element = double.embed(v, kappa)
    size = 2 * b.dim
    return all(
        is_zero_vector(double.algebra.bracket(element, unit_vector(size, index)))
        for index in double.embedded_g
    )


class C1Result(msgspec.Struct, frozen=True, eq=False):
    """Whether `c_1` vanishes, with `v` satisfying `ad*_κ = ad_v` if so."""

    vanishes: bool
    witness: Vector | None
    certificate: SolveCertificate


def c1_vanishes(
    b: LieBialgebra,
    *,
    kappa: Sequence[Scalar] | None = None,
    representative: Cochain | None = None,
    check: bool | None = None,
) -> C1Result:
    """Decide whether `ι_κ γ = ad_v` has a solution `v`.

    Raises
    ------
    ConsistencyError
        If the witness doesn't reproduce `ι_κ γ` or (with cross-checks on) doesn't
        annihilate `g` inside the double.
    """
    if kappa is None:
        kappa = modular_vector(b.g)
    if representative is None:
        representative = c1_representative(b, kappa=kappa, check=check)
    solution = solve_primitive(representative)
    certificate = _certificate(solution, equations=b.dim * b.dim)
    if solution.particular is None:
        return C1Result(vanishes=False, witness=None, certificate=certificate)

    v = tuple(-value for value in solution.particular)
    for index in range(b.dim):
        if b.g.bracket(v, unit_vector(b.dim, index)) != representative.value(index):
            raise ConsistencyError(f"ad_v differs from ι_κγ on basis vector {index}")
    if _cross_checks(check) and not double_annihilates(b, kappa, v):
        raise ConsistencyError("κ + v does not annihilate g in the double")
    return C1Result(vanishes=True, witness=v, certificate=certificate)


def gamma_primitive(b: LieBialgebra) -> RMatrix | None:
    """An r-matrix with `γ = δr`, if the bialgebra is a coboundary one."""
    primitive = find_primitive(b.gamma)
    if primitive is None:
        return None
    n = b.dim
    flat = primitive.flatten()
    return RMatrix(
        r=matrix_from_entries(
            {(j, k): flat[j * n + k] for j in range(n) for k in range(n)},
            (n, n),
        ),
    )


class AtiyahReport(msgspec.Struct, frozen=True, eq=False):
    """Verdicts, witnesses and representatives for one bialgebra.

    `vanishing` is `None` when the Atiyah class itself wasn't computed.
    """

    vanishing: bool | None
    witness_connection: ConnectionDatum | None
    c1_vanishing: bool
    witness_v: Vector | None
    kappa: Vector
    c1_representative: Cochain
    center_obstruction: CenterWitness | None
    atiyah_certificate: SolveCertificate | None
    c1_certificate: SolveCertificate
    r_matrix: RMatrix | None
    prefactor: str = C1_PREFACTOR


def _is_flat(b: LieBialgebra, S: ConnectionDatum) -> bool:  # noqa: N803
    return curvature_R(b, S).is_zero


def full_report(b: LieBialgebra, *, include_atiyah: bool = True) -> AtiyahReport:
    """Compute every verdict for `b`, with internal cross-checks.

    Parameters
    ----------
    b
        A valid Lie bialgebra.
    include_atiyah
        If False, only decide `c_1` (the Atiyah system is the expensive part).

    Raises
    ------
    ConsistencyError
        If any cross-check fails.
    """
    start_time = datetime.datetime.now(tz=datetime.timezone.utc)
    check = get_runtime_environment().cross_checks

    kappa = modular_vector(b.g)
    cocycle = lambda_cocycle(b, check=check) if include_atiyah or check else None
    representative = c1_representative(b, kappa=kappa, cocycle=cocycle, check=check)
    c1 = c1_vanishes(b, kappa=kappa, representative=representative, check=check)
    obstruction = center_obstruction(b)
    r_matrix = gamma_primitive(b)

    vanishing = None
    if include_atiyah:
        vanishing = atiyah_vanishes(b, cocycle=cocycle)
        if obstruction is not None and vanishing.vanishes:
            raise ConsistencyError("Center obstruction found but the class vanishes")
        if vanishing.vanishes and not c1.vanishes:
            raise ConsistencyError("The Atiyah class vanishes but c1 doesn't")
        if r_matrix is not None and not vanishing.vanishes:
            raise ConsistencyError("γ is a coboundary but the class doesn't vanish")
        if check and vanishing.witness is not None and not _is_flat(
            b,
            vanishing.witness,
        ):
            raise ConsistencyError("Witness connection has nonzero curvature")
        if check and b.r_matrix is not None:
            if not _is_flat(b, r_matrix_connection(b, b.r_matrix)):
                raise ConsistencyError("r-matrix connection has nonzero curvature")

    duration = datetime.datetime.now(tz=datetime.timezone.utc) - start_time
    logger.info(
        f"Atiyah report for {b.dim}-dim bialgebra: vanishing="
        f"{None if vanishing is None else vanishing.vanishes}, c1_vanishing="
        f"{c1.vanishes} ({humanize.precisedelta(duration)})",
    )
    return AtiyahReport(
        vanishing=None if vanishing is None else vanishing.vanishes,
        witness_connection=None if vanishing is None else vanishing.witness,
        c1_vanishing=c1.vanishes,
        witness_v=c1.witness,
        kappa=tuple(kappa),
        c1_representative=representative,
        center_obstruction=obstruction,
        atiyah_certificate=None if vanishing is None else vanishing.certificate,
        c1_certificate=c1.certificate,
        r_matrix=r_matrix,
    )

