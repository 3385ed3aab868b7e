"""Input and report documents.

Both are `LiebiStruct`s, written as YAML or JSON. Every rational is a string
(`"p/q"` or an integer) so no floating point value can get in or out. Documents
carry `format_version: "1"`.
"""

from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

import msgspec
import yaml
from loguru import logger

from .atiyah import (
    AtiyahReport,
    ConnectionDatum,
    SolveCertificate,
    atiyah_vanishes,
    c1_representative,
    c1_vanishes,
    curvature_R,
    modular_vector,
)
from .bialgebra import (
    BialgebraValidation,
    LieBialgebra,
    RMatrix,
    ad_dual_of,
    coboundary_bialgebra,
    dual_basis_names,
    validate_bialgebra,
)
from .catalog import CatalogEntry
from .lie import LieAlgebra, in_center
from .ratmath import (
    DimensionMismatchError,
    Scalar,
    Vector,
    dense,
    entries,
    format_rational,
    matrix,
    matvec,
    parse_rational,
    unit_vector,
)
from .struct import LiebiStruct, format_for_path

FORMAT_VERSION = "1"

# Rationals may also be written as bare YAML/JSON integers.
RationalText = str | int


class DocumentError(ValueError):
    """Raised for documents which can't be parsed or don't describe an algebra.

    The message names the offending position, e.g. `$.brackets[0].left`.
    """


class BracketTerm(LiebiStruct, frozen=True, forbid_unknown_fields=True):
    """`[x_left, x_right] = sum_k terms[k] x_k`."""

    left: int
    right: int
    terms: dict[int, RationalText] = {}


class RMatrixTerm(LiebiStruct, frozen=True, forbid_unknown_fields=True):
    """The coefficient of `x_left (x) x_right` in `r`."""

    left: int
    right: int
    value: RationalText


class InputDocument(
    LiebiStruct,
    frozen=True,
    forbid_unknown_fields=True,
    omit_defaults=True,
):
    """A Lie algebra, optionally with a cobracket given by dual brackets or by `r`.

    Brackets which are omitted are zero, and `[x_j, x_i]` is filled in from
    `[x_i, x_j]` unless listed separately.
    """

    format_version: str
    name: str
    basis: list[str]
    brackets: list[BracketTerm] = []
    dual_basis: list[str] | None = None
    dual_brackets: list[BracketTerm] | None = None
    r_matrix: list[RMatrixTerm] | None = None
    provenance: str = ""

    @property
    def is_bialgebra(self) -> bool:
        return self.dual_brackets is not None or self.r_matrix is not None


def _rational(value: RationalText, position: str) -> Fraction:
    try:
        return parse_rational(str(value))
    except ValueError as error:
        raise DocumentError(f"{error} at `{position}`") from error


def _index(value: int, dim: int, position: str) -> int:
    if not 0 <= value < dim:
        raise DocumentError(f"Index {value} out of range [0, {dim}) at `{position}`")
    return value


def parse_document(encoded_bytes: bytes, format: str) -> InputDocument:
    """Decode and version-check an input document.

    Raises
    ------
    DocumentError
        If decoding fails or the version is unsupported.
    """
    try:
        document = InputDocument.decode(encoded_bytes, format=format)
    except (msgspec.DecodeError, yaml.YAMLError) as error:
        raise DocumentError(str(error)) from error
    if document.format_version != FORMAT_VERSION:
        raise DocumentError(
            f"Unsupported format_version {document.format_version!r} at "
            "`$.format_version`",
        )
    return document


def load_document(path: Path) -> InputDocument:
    return parse_document(path.read_bytes(), format_for_path(path))


def _brackets_to_algebra(
    basis_names: Sequence[str],
    brackets: Sequence[BracketTerm],
    field: str,
) -> LieAlgebra:
    dim = len(basis_names)
    mapping: dict[tuple[int, int], dict[int, Fraction]] = {}
    for position, bracket in enumerate(brackets):
        prefix = f"$.{field}[{position}]"
        key = (
            _index(bracket.left, dim, f"{prefix}.left"),
            _index(bracket.right, dim, f"{prefix}.right"),
        )
        if key in mapping:
            raise DocumentError(f"Duplicate bracket {key} at `{prefix}`")
        mapping[key] = {
            _index(k, dim, f"{prefix}.terms"): _rational(value, f"{prefix}.terms.{k}")
            for k, value in bracket.terms.items()
        }
    return LieAlgebra.from_brackets(basis_names, mapping)


def document_to_lie(document: InputDocument) -> LieAlgebra:
    """The Lie algebra `g` of a document (not validated)."""
    return _brackets_to_algebra(document.basis, document.brackets, "brackets")


def document_r_matrix(document: InputDocument) -> RMatrix | None:
    if document.r_matrix is None:
        return None
    dim = len(document.basis)
    terms: dict[tuple[int, int], Scalar] = {}
    for position, term in enumerate(document.r_matrix):
        prefix = f"$.r_matrix[{position}]"
        key = (
            _index(term.left, dim, f"{prefix}.left"),
            _index(term.right, dim, f"{prefix}.right"),
        )
        if key in terms:
            raise DocumentError(f"Duplicate r-matrix term {key} at `{prefix}`")
        terms[key] = _rational(term.value, f"{prefix}.value")
    return RMatrix.from_terms(dim, terms)


def document_to_bialgebra(document: InputDocument) -> BialgebraValidation:
    """Validate the bialgebra described by `document`.

    Raises
    ------
    DocumentError
        Unless exactly one of `dual_brackets` and `r_matrix` is present.
    """
    if (document.dual_brackets is None) == (document.r_matrix is None):
        raise DocumentError(
            "Exactly one of `$.dual_brackets` and `$.r_matrix` must be present",
        )
    g = document_to_lie(document)
    r = document_r_matrix(document)
    if r is not None:
        return coboundary_bialgebra(g, r)

    dual_basis = document.dual_basis or list(dual_basis_names(document.basis))
    if len(dual_basis) != len(document.basis):
        raise DocumentError(
            f"`$.dual_basis` has {len(dual_basis)} names for a "
            f"{len(document.basis)}-dim algebra",
        )
    g_dual = _brackets_to_algebra(
        dual_basis,
        document.dual_brackets,  # type: ignore
        "dual_brackets",
    )
    return validate_bialgebra(g, g_dual)


def _bracket_terms(algebra: LieAlgebra) -> list[BracketTerm]:
    return [
        BracketTerm(
            left=i,
            right=j,
            terms={k: format_rational(value) for k, value in sorted(row.items())},
        )
        for (i, j), row in sorted(algebra.terms.items())
        if i < j
    ]


def document_from_bialgebra(
    b: LieBialgebra,
    name: str,
    provenance: str = "",
) -> InputDocument:
    """Describe `b` as an input document (by its r-matrix if it carries one)."""
    r_terms = None
    dual_brackets = None
    if b.r_matrix is not None:
        r_terms = [
            RMatrixTerm(left=j, right=k, value=format_rational(value))
            for (j, k), value in sorted(entries(b.r_matrix.r).items())
        ]
    else:
        dual_brackets = _bracket_terms(b.g_dual)
    return InputDocument(
        format_version=FORMAT_VERSION,
        name=name,
        basis=list(b.g.basis_names),
        brackets=_bracket_terms(b.g),
        dual_basis=list(b.g_dual.basis_names),
        dual_brackets=dual_brackets,
        r_matrix=r_terms,
        provenance=provenance,
    )


def document_from_entry(entry: CatalogEntry) -> InputDocument:
    return document_from_bialgebra(entry.bialgebra, entry.name, entry.provenance)


def _texts(values: Sequence[Scalar]) -> list[str]:
    return [format_rational(value) for value in values]


def _rationals(texts: Sequence[str], position: str) -> Vector:
    return tuple(
        _rational(text, f"{position}[{index}]") for index, text in enumerate(texts)
    )


class CertificateDocument(LiebiStruct, frozen=True):
    equations: int
    unknowns: int
    rank: int
    augmented_rank: int

    @classmethod
    def from_certificate(cls, certificate: SolveCertificate) -> "CertificateDocument":
        return cls(
            equations=certificate.equations,
            unknowns=certificate.unknowns,
            rank=certificate.rank,
            augmented_rank=certificate.augmented_rank,
        )


class CenterWitnessDocument(LiebiStruct, frozen=True):
    x: list[str]
    xi: list[str]
    image: list[str]


class InputEcho(LiebiStruct, frozen=True):
    name: str
    provenance: str
    dim: int


class Verdicts(LiebiStruct, frozen=True):
    """The verdict section; `vanishing` is null when it wasn't computed."""

    vanishing: bool | None
    c1_vanishing: bool
    center_obstruction: bool
    coboundary: bool


class Witnesses(LiebiStruct, frozen=True):
    # One matrix (as rows) per dual basis vector.
    connection: list[list[list[str]]] | None
    v: list[str] | None
    center: CenterWitnessDocument | None
    r_matrix: list[list[str]] | None


class Certificates(LiebiStruct, frozen=True):
    atiyah: CertificateDocument | None
    c1: CertificateDocument


class ReportDocument(LiebiStruct, frozen=True):
    """Machine readable form of an `AtiyahReport`."""

    format_version: str
    input: InputEcho
    verdicts: Verdicts
    witnesses: Witnesses
    kappa: list[str]
    # ι_κγ(x_i) for each basis vector x_i.
    c1_representative: list[list[str]]
    c1_prefactor: str
    certificates: Certificates


def report_document(
    report: AtiyahReport,
    b: LieBialgebra,
    name: str,
    provenance: str = "",
) -> ReportDocument:
    center = None
    if report.center_obstruction is not None:
        center = CenterWitnessDocument(
            x=_texts(report.center_obstruction.x),
            xi=_texts(report.center_obstruction.xi),
            image=_texts(report.center_obstruction.image),
        )
    connection = None
    if report.witness_connection is not None:
        connection = [
            [_texts(row) for row in dense(endomorphism)]
            for endomorphism in report.witness_connection.maps
        ]
    return ReportDocument(
        format_version=FORMAT_VERSION,
        input=InputEcho(name=name, provenance=provenance, dim=b.dim),
        verdicts=Verdicts(
            vanishing=report.vanishing,
            c1_vanishing=report.c1_vanishing,
            center_obstruction=report.center_obstruction is not None,
            coboundary=report.r_matrix is not None,
        ),
        witnesses=Witnesses(
            connection=connection,
            v=None if report.witness_v is None else _texts(report.witness_v),
            center=center,
            r_matrix=(
                None
                if report.r_matrix is None
                else [_texts(row) for row in dense(report.r_matrix.r)]
            ),
        ),
        kappa=_texts(report.kappa),
        c1_representative=[
            _texts(report.c1_representative.value(i)) for i in range(b.dim)
        ],
        c1_prefactor=report.prefactor,
        certificates=Certificates(
            atiyah=(
                None
                if report.atiyah_certificate is None
                else CertificateDocument.from_certificate(report.atiyah_certificate)
            ),
            c1=CertificateDocument.from_certificate(report.c1_certificate),
        ),
    )


def _connection(b: LieBialgebra, rows: list[list[list[str]]]) -> ConnectionDatum:
    n = b.dim
    if len(rows) != n:
        raise DocumentError(
            f"Connection has {len(rows)} matrices for dim {n} at "
            "`$.witnesses.connection`",
        )
    maps = []
    for j, endomorphism in enumerate(rows):
        position = f"$.witnesses.connection[{j}]"
        if len(endomorphism) != n or any(len(row) != n for row in endomorphism):
            raise DocumentError(f"Expected a {n}x{n} matrix at `{position}`")
        maps.append(
            matrix(
                [
                    _rationals(row, f"{position}[{r}]")
                    for r, row in enumerate(endomorphism)
                ],
            ),
        )
    return ConnectionDatum(maps=tuple(maps))


def verify_report(b: LieBialgebra, document: ReportDocument) -> list[str]:
    """Re-check every verdict of `document` against `b`.

    Positive verdicts are checked through their witnesses, negative ones by
    recomputing the rank certificate. Returns the problems found (empty if the
    report is reproduced).

    Raises
    ------
    DocumentError
        If a witness is malformed.
    """
    problems = []
    n = b.dim
    if document.input.dim != n:
        return [f"Report is for dim {document.input.dim}, input has dim {n}"]

    kappa = modular_vector(b.g)
    if _rationals(document.kappa, "$.kappa") != kappa:
        problems.append("κ differs")

    verdicts, witnesses = document.verdicts, document.witnesses
    if verdicts.vanishing:
        if witnesses.connection is None:
            problems.append("Vanishing Atiyah class without a witness connection")
        elif not curvature_R(b, _connection(b, witnesses.connection)).is_zero:
            problems.append("Witness connection has nonzero curvature")
    elif verdicts.vanishing is False:
        recomputed = atiyah_vanishes(b)
        if recomputed.vanishes:
            problems.append("Atiyah class vanishes after all")

    representative = c1_representative(b, kappa=kappa)
    if verdicts.c1_vanishing:
        if witnesses.v is None:
            problems.append("Vanishing c1 without a witness v")
        else:
            v = _rationals(witnesses.v, "$.witnesses.v")
            if len(v) != n:
                raise DocumentError(f"Expected {n} entries at `$.witnesses.v`")
            for i in range(n):
                if b.g.bracket(v, unit_vector(n, i)) != representative.value(i):
                    problems.append(f"ad_v differs from ι_κγ on basis vector {i}")
                    break
    elif c1_vanishes(b, kappa=kappa, representative=representative).vanishes:
        problems.append("c1 vanishes after all")

    if witnesses.center is not None:
        x = _rationals(witnesses.center.x, "$.witnesses.center.x")
        xi = _rationals(witnesses.center.xi, "$.witnesses.center.xi")
        try:
            image = matvec(ad_dual_of(b, xi), x)
        except DimensionMismatchError as error:
            raise DocumentError(f"{error} at `$.witnesses.center`") from error
        if not in_center(b.g, x) or in_center(b.g, image):
            problems.append("Center witness doesn't obstruct")

    logger.debug(f"Report for {document.input.name}: {len(problems)} problem(s)")
    return problems
