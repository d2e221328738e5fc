"""
Finite-dimensional bialgebras by structure constants, (co)module
(co)algebras of the four symmetry kinds, and the transpositions w_{M,X}.

Conventions: a left action of B on X is a matrix B(x)X -> X, a left
coaction is X -> B(x)X.  Tensor bases are lexicographic with the leftmost
factor most significant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Sequence

from .linalg import FieldSpec, Matrix, kronecker, kron_all, tensor_permutation


class ConfigurationError(ValueError):
    pass


class FormatError(ValueError):
    pass


class Kind(str, enum.Enum):
    MC = "MC"  # module coalgebra
    CA = "CA"  # comodule algebra
    MA = "MA"  # module algebra
    CC = "CC"  # comodule coalgebra

    @property
    def is_algebra(self) -> bool:
        return self in (Kind.MA, Kind.CA)

    @property
    def module_side(self) -> bool:
        return self in (Kind.MA, Kind.MC)


def _I(field, n):
    return Matrix.identity(field, n)


def switch(field, m: int, n: int) -> Matrix:
    """s: X(x)Y -> Y(x)X for dim X = m, dim Y = n."""
    return tensor_permutation(field, [m, n], [1, 0])


@dataclass(frozen=True)
class Bialgebra:
    field: FieldSpec
    dim: int
    mult: Matrix  # d x d^2
    unit: Matrix  # d x 1
    comult: Matrix  # d^2 x d
    counit: Matrix  # 1 x d
    antipode: Matrix | None = None
    name: str = ""

    def __post_init__(self):
        d = self.dim
        shapes = {"mult": (d, d * d), "unit": (d, 1), "comult": (d * d, d), "counit": (1, d)}
        for attr, shape in shapes.items():
            if getattr(self, attr).shape != shape:
                raise FormatError("%s has shape %s, expected %s"
                                  % (attr, getattr(self, attr).shape, shape))
        if self.antipode is not None and self.antipode.shape != (d, d):
            raise FormatError("antipode has shape %s" % (self.antipode.shape,))

    def dual(self) -> "Bialgebra":
        """The dual bialgebra: structure maps transposed."""
        S = self.antipode.T if self.antipode is not None else None
        return Bialgebra(self.field, self.dim, self.comult.T, self.counit.T, self.mult.T,
                         self.unit.T, S, (self.name or "B") + "*")

    def is_trivial(self) -> bool:
        return self.dim == 1


@dataclass
class Failure:
    axiom: str
    witness: tuple
    lhs: dict
    rhs: dict

    def __str__(self):
        return "%s fails at basis %s: %s != %s" % (self.axiom, self.witness,
                                                  _vec_text(self.lhs), _vec_text(self.rhs))


def _vec_text(v: dict) -> str:
    return "{" + ", ".join("%d: %s" % (k, v[k]) for k in sorted(v)) + "}"


@dataclass
class ValidationReport:
    subject: str
    failures: list = dc_field(default_factory=list)
    checked: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def extend(self, other: "ValidationReport"):
        self.failures.extend(other.failures)
        self.checked.extend(other.checked)

    def lines(self) -> list[str]:
        out = ["%s: %s (%d identities checked)"
               % (self.subject, "valid" if self.ok else "INVALID", len(self.checked))]
        out.extend("  " + str(f) for f in self.failures)
        return out


def _decode(j: int, dims: Sequence[int]) -> tuple:
    out = []
    for d in reversed(dims):
        j, r = divmod(j, d)
        out.append(r)
    return tuple(reversed(out))


def check_identity(report: ValidationReport, axiom: str, lhs: Matrix, rhs: Matrix,
                   source_dims: Sequence[int]) -> bool:
    """Record lhs == rhs; on failure store the first differing basis tuple."""
    report.checked.append(axiom)
    if lhs.shape != rhs.shape:
        raise FormatError("%s: shapes %s and %s" % (axiom, lhs.shape, rhs.shape))
    if lhs == rhs:
        return True
    for j in range(lhs.cols):
        if lhs.column(j) != rhs.column(j):
            report.failures.append(Failure(axiom, _decode(j, source_dims),
                                           dict(lhs.column(j)), dict(rhs.column(j))))
            break
    return False


def validate_bialgebra(B: Bialgebra) -> ValidationReport:
    F, d = B.field, B.dim
    I = _I(F, d)
    one = _I(F, 1)
    rep = ValidationReport("bialgebra %s" % (B.name or ""))
    mu, e, D, eps = B.mult, B.unit, B.comult, B.counit
    check_identity(rep, "associativity", mu @ kronecker(mu, I), mu @ kronecker(I, mu), [d, d, d])
    check_identity(rep, "left unit", mu @ kronecker(e, I), I, [d])
    check_identity(rep, "right unit", mu @ kronecker(I, e), I, [d])
    check_identity(rep, "coassociativity", kronecker(D, I) @ D, kronecker(I, D) @ D, [d])
    check_identity(rep, "left counit", kronecker(eps, I) @ D, I, [d])
    check_identity(rep, "right counit", kronecker(I, eps) @ D, I, [d])
    mid = kron_all([I, switch(F, d, d), I])
    check_identity(rep, "comultiplication multiplicative", D @ mu,
                   kronecker(mu, mu) @ mid @ kronecker(D, D), [d, d])
    check_identity(rep, "comultiplication unital", D @ e, kronecker(e, e), [1])
    check_identity(rep, "counit multiplicative", eps @ mu, kronecker(eps, eps), [d, d])
    check_identity(rep, "counit unital", eps @ e, one, [1])
    if B.antipode is not None:
        S = B.antipode
        check_identity(rep, "left antipode", mu @ kronecker(S, I) @ D, e @ eps, [d])
        check_identity(rep, "right antipode", mu @ kronecker(I, S) @ D, e @ eps, [d])
    return rep


# ---------------------------------------------------------------------------
# modules, comodules, carriers


def trivial_action(B: Bialgebra, n: int) -> Matrix:
    """b.x = eps(b) x."""
    return kronecker(B.counit, _I(B.field, n))


def trivial_coaction(B: Bialgebra, n: int) -> Matrix:
    """x -> 1 (x) x."""
    return kronecker(B.unit, _I(B.field, n))


def regular_action(B: Bialgebra) -> Matrix:
    return B.mult


def regular_coaction(B: Bialgebra) -> Matrix:
    return B.comult


def validate_module(rep: ValidationReport, B: Bialgebra, n: int, action: Matrix, label: str):
    F, d = B.field, B.dim
    if action.shape != (n, d * n):
        raise FormatError("%s action has shape %s, expected %s" % (label, action.shape, (n, d * n)))
    In = _I(F, n)
    check_identity(rep, "%s action associative" % label, action @ kronecker(B.mult, In),
                   action @ kronecker(_I(F, d), action), [d, d, n])
    check_identity(rep, "%s action unital" % label, action @ kronecker(B.unit, In), In, [n])


def validate_comodule(rep: ValidationReport, B: Bialgebra, n: int, coaction: Matrix, label: str):
    F, d = B.field, B.dim
    if coaction.shape != (d * n, n):
        raise FormatError("%s coaction has shape %s, expected %s"
                          % (label, coaction.shape, (d * n, n)))
    In = _I(F, n)
    check_identity(rep, "%s coaction coassociative" % label, kronecker(B.comult, In) @ coaction,
                   kronecker(_I(F, d), coaction) @ coaction, [n])
    check_identity(rep, "%s coaction counital" % label, kronecker(B.counit, In) @ coaction,
                   In, [n])


@dataclass(frozen=True)
class CoefficientDatum:
    dim: int
    action: Matrix | None = None
    coaction: Matrix | None = None

    @classmethod
    def trivial(cls, B: Bialgebra, n: int = 1) -> "CoefficientDatum":
        return cls(n, trivial_action(B, n), trivial_coaction(B, n))


@dataclass(frozen=True)
class SymmetryDatum:
    kind: Kind
    dim: int
    mult: Matrix | None = None
    unit: Matrix | None = None
    comult: Matrix | None = None
    counit: Matrix | None = None
    action: Matrix | None = None
    coaction: Matrix | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind.is_algebra:
            if self.mult is None or self.unit is None:
                raise ConfigurationError("kind %s needs mult and unit" % self.kind.value)
        else:
            if self.comult is None or self.counit is None:
                raise ConfigurationError("kind %s needs comult and counit" % self.kind.value)
        if self.kind.module_side and self.action is None:
            raise ConfigurationError("kind %s needs a B-action on the carrier" % self.kind.value)
        if not self.kind.module_side and self.coaction is None:
            raise ConfigurationError("kind %s needs a B-coaction on the carrier" % self.kind.value)


def _carrier_axioms(rep: ValidationReport, F, D: SymmetryDatum):
    n = D.dim
    I = _I(F, n)
    if D.kind.is_algebra:
        mu, e = D.mult, D.unit
        if mu.shape != (n, n * n) or e.shape != (n, 1):
            raise FormatError("carrier algebra structure has wrong shape")
        check_identity(rep, "carrier associativity", mu @ kronecker(mu, I), mu @ kronecker(I, mu),
                       [n, n, n])
        check_identity(rep, "carrier left unit", mu @ kronecker(e, I), I, [n])
        check_identity(rep, "carrier right unit", mu @ kronecker(I, e), I, [n])
    else:
        dl, eps = D.comult, D.counit
        if dl.shape != (n * n, n) or eps.shape != (1, n):
            raise FormatError("carrier coalgebra structure has wrong shape")
        check_identity(rep, "carrier coassociativity", kronecker(dl, I) @ dl,
                       kronecker(I, dl) @ dl, [n])
        check_identity(rep, "carrier left counit", kronecker(eps, I) @ dl, I, [n])
        check_identity(rep, "carrier right counit", kronecker(I, eps) @ dl, I, [n])


def diagonal_action(B: Bialgebra, actions: Sequence[Matrix], dims: Sequence[int]) -> Matrix:
    """Action b(x (x) y) = b_(1) x (x) b_(2) y on X_1 (x) ... (x) X_k."""
    F, d = B.field, B.dim
    acc, acc_dim = actions[-1], dims[-1]
    for act, n in zip(reversed(actions[:-1]), reversed(dims[:-1])):
        spread = kronecker(B.comult, _I(F, n * acc_dim))
        perm = tensor_permutation(F, [d, d, n, acc_dim], [0, 2, 1, 3])
        acc = kronecker(act, acc) @ perm @ spread
        acc_dim *= n
    return acc


def diagonal_coaction(B: Bialgebra, coactions: Sequence[Matrix], dims: Sequence[int]) -> Matrix:
    """Coaction x (x) y -> x_(-1) y_(-1) (x) x_(0) (x) y_(0)."""
    F, d = B.field, B.dim
    acc, acc_dim = coactions[-1], dims[-1]
    for co, n in zip(reversed(coactions[:-1]), reversed(dims[:-1])):
        perm = tensor_permutation(F, [d, n, d, acc_dim], [0, 2, 1, 3])
        acc = kronecker(B.mult, _I(F, n * acc_dim)) @ perm @ kronecker(co, acc)
        acc_dim *= n
    return acc


def validate_symmetry(B: Bialgebra, D: SymmetryDatum, M: CoefficientDatum | None = None
                      ) -> ValidationReport:
    F, d, n = B.field, B.dim, D.dim
    rep = ValidationReport("%s datum %s" % (D.kind.value, D.name))
    _carrier_axioms(rep, F, D)
    I = _I(F, n)
    if D.kind.module_side:
        alpha = D.action
        validate_module(rep, B, n, alpha, "carrier")
        alpha2 = diagonal_action(B, [alpha, alpha], [n, n])
        if D.kind is Kind.MA:
            check_identity(rep, "multiplication equivariant", alpha @ kronecker(_I(F, d), D.mult),
                           D.mult @ alpha2, [d, n, n])
            check_identity(rep, "unit equivariant", alpha @ kronecker(_I(F, d), D.unit),
                           D.unit @ B.counit, [d, 1])
        else:
            check_identity(rep, "comultiplication equivariant", D.comult @ alpha,
                           alpha2 @ kronecker(_I(F, d), D.comult), [d, n])
            check_identity(rep, "counit equivariant", D.counit @ alpha,
                           kronecker(B.counit, D.counit), [d, n])
    else:
        rho = D.coaction
        validate_comodule(rep, B, n, rho, "carrier")
        rho2 = diagonal_coaction(B, [rho, rho], [n, n])
        if D.kind is Kind.CA:
            check_identity(rep, "multiplication colinear", rho @ D.mult,
                           kronecker(_I(F, d), D.mult) @ rho2, [n, n])
            check_identity(rep, "unit colinear", rho @ D.unit, kronecker(B.unit, D.unit), [1])
        else:
            check_identity(rep, "comultiplication colinear", rho2 @ D.comult,
                           kronecker(_I(F, d), D.comult) @ rho, [n])
            check_identity(rep, "counit colinear", kronecker(_I(F, d), D.counit) @ rho,
                           B.unit @ D.counit, [n])
    if M is not None:
        if M.action is not None:
            validate_module(rep, B, M.dim, M.action, "coefficient")
        if M.coaction is not None:
            validate_comodule(rep, B, M.dim, M.coaction, "coefficient")
    return rep


# ---------------------------------------------------------------------------
# transpositions


@dataclass(frozen=True)
class Transposition:
    w: Matrix  # M(x)X -> X(x)M
    m_dim: int
    x_dim: int
    formula: str


def build_transposition(kind: Kind | str, B: Bialgebra, M: CoefficientDatum, x_dim: int,
                        x_action: Matrix | None = None, x_coaction: Matrix | None = None,
                        side: str = "left") -> Transposition:
    """The transposition w_{M,X} used by the given symmetry kind.

    Module kinds use w(m (x) x) = m_(-1) x (x) m_(0) (M coacts, X is acted on);
    comodule kinds use w(m (x) x) = x_(0) (x) x_(-1) m (X coacts, M is acted on).
    ``side="right"`` gives w(m (x) x) = x_(0) (x) m x_(1) for a right comodule X
    (coaction X -> X(x)B) and a right module M (action M(x)B -> M).
    """
    kind = Kind(kind)
    F, d, m = B.field, B.dim, M.dim
    if side == "right":
        if x_coaction is None or M.action is None:
            raise ConfigurationError("right-sided transposition needs X coaction and M action")
        # m (x) x -> m (x) x0 (x) x1 -> x0 (x) m (x) x1 -> x0 (x) m.x1
        w = (kronecker(_I(F, x_dim), M.action)
             @ tensor_permutation(F, [m, x_dim, d], [1, 0, 2])
             @ kronecker(_I(F, m), x_coaction))
        return Transposition(w, m, x_dim, "x0 (x) m x1")
    if side != "left":
        raise ValueError("side must be 'left' or 'right'")
    if kind.module_side:
        if M.coaction is None:
            raise ConfigurationError("kind %s needs a coaction on the coefficient" % kind.value)
        if x_action is None:
            raise ConfigurationError("kind %s needs a B-action on X" % kind.value)
        # m (x) x -> m_-1 (x) m_0 (x) x -> m_-1 (x) x (x) m_0 -> m_-1 x (x) m_0
        w = (kronecker(x_action, _I(F, m))
             @ tensor_permutation(F, [d, m, x_dim], [0, 2, 1])
             @ kronecker(M.coaction, _I(F, x_dim)))
        return Transposition(w, m, x_dim, "m(-1) x (x) m(0)")
    if M.action is None:
        raise ConfigurationError("kind %s needs an action on the coefficient" % kind.value)
    if x_coaction is None:
        raise ConfigurationError("kind %s needs a B-coaction on X" % kind.value)
    # m (x) x -> m (x) x_-1 (x) x_0 -> x_0 (x) x_-1 (x) m -> x_0 (x) x_-1 m
    w = (kronecker(_I(F, x_dim), M.action)
         @ tensor_permutation(F, [m, d, x_dim], [2, 1, 0])
         @ kronecker(_I(F, m), x_coaction))
    return Transposition(w, m, x_dim, "x(0) (x) x(-1) m")


def transposition_for(B: Bialgebra, D: SymmetryDatum, M: CoefficientDatum) -> Transposition:
    return build_transposition(D.kind, B, M, D.dim, x_action=D.action, x_coaction=D.coaction)


def check_w_transpositive(D: SymmetryDatum, t: Transposition, field: FieldSpec) -> ValidationReport:
    F, n, m = field, D.dim, t.m_dim
    w = t.w
    In, Im = _I(F, n), _I(F, m)
    rep = ValidationReport("w-transpositivity of %s datum %s" % (D.kind.value, D.name))
    if w.shape != (n * m, m * n):
        raise FormatError("transposition has shape %s" % (w.shape,))
    if D.kind.is_algebra:
        mu, e = D.mult, D.unit
        check_identity(rep, "bow-tie (multiplication)", w @ kronecker(Im, mu),
                       kronecker(mu, Im) @ kronecker(In, w) @ kronecker(w, In), [m, n, n])
        check_identity(rep, "bow-tie (unit)", w @ kronecker(Im, e), kronecker(e, Im), [m, 1])
    else:
        dl, eps = D.comult, D.counit
        check_identity(rep, "bow-tie (comultiplication)", kronecker(dl, Im) @ w,
                       kronecker(In, w) @ kronecker(w, In) @ kronecker(Im, dl), [m, n])
        check_identity(rep, "bow-tie (counit)", kronecker(eps, Im) @ w, kronecker(Im, eps),
                       [m, n])
    return rep


def basis_tuples(dims: Sequence[int]):
    return list(product(*[range(x) for x in dims]))
