"""
Explicit para-(co)cyclic modules T_n = X^{(x) n+1} (x) M built from a
transpositive (co)algebra X and a transposition w_{M,X}.

The colimit over the two-object groupoid S is realized on the second leg
X^{(x) n+1} (x) M; maps naturally defined on the first leg X^{(x) n} (x) M (x) X
are conjugated through the cyclic permutation t_{n+2}.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .hopf import SymmetryDatum, Transposition, ValidationReport, check_w_transpositive
from .lambda_cat import (Flavor, RelationInstance, TruncationError, evaluate_word,
                         relation_instances)
from .linalg import FieldSpec, Matrix, kron_all, kronecker, tensor_permutation


class TranspositivityError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("\n".join(report.lines()))
        self.report = report


class CertificationError(ValueError):
    def __init__(self, report):
        super().__init__("\n".join(report.lines()))
        self.report = report


@dataclass
class ParaCyclicModule:
    """Graded operator family indexed by the generators of Lambda.

    ``face[n][j]`` is the image of d^n_j, ``degen[n][i]`` that of s^n_i and
    ``tau[n]`` that of t_n.  A cocyclic family is covariant (face[n][j] maps
    degree n to n+1); a cyclic family is contravariant (face[n][j] maps degree
    n+1 to n, i.e. it is the face d_j of T_{n+1}).
    """

    field: FieldSpec
    orientation: str
    dims: list
    face: list
    degen: list
    tau: list
    provenance: dict = dc_field(default_factory=dict)
    _powers: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.orientation not in ("cyclic", "cocyclic"):
            raise ValueError("orientation must be cyclic or cocyclic")
        N = len(self.dims) - 1
        if len(self.tau) != N + 1 or len(self.face) != N or len(self.degen) != N:
            raise ValueError("operator lists do not match truncation %d" % N)
        for n in range(N + 1):
            if self.tau[n].shape != (self.dims[n], self.dims[n]):
                raise ValueError("tau[%d] has shape %s" % (n, self.tau[n].shape))
        for n in range(N):
            lo, hi = self.dims[n], self.dims[n + 1]
            fshape = (hi, lo) if self.orientation == "cocyclic" else (lo, hi)
            for j, f in enumerate(self.face[n]):
                if f.shape != fshape:
                    raise ValueError("face[%d][%d] has shape %s, expected %s"
                                     % (n, j, f.shape, fshape))
            for i, s in enumerate(self.degen[n]):
                if s.shape != fshape[::-1]:
                    raise ValueError("degen[%d][%d] has shape %s" % (n, i, s.shape))

    @property
    def N(self) -> int:
        return len(self.dims) - 1

    def identity(self, n: int) -> Matrix:
        return Matrix.identity(self.field, self.dims[n])

    def tau_power(self, n: int, k: int) -> Matrix:
        key = (n, k)
        if key not in self._powers:
            if k == 0:
                m = self.identity(n)
            elif k == 1:
                m = self.tau[n]
            elif k < 0:
                m = self.tau[n] ** k
            else:
                m = self.tau_power(n, k - 1) @ self.tau[n]
            self._powers[key] = m
        return self._powers[key]

    def generator(self, letter) -> Matrix:
        kind, n, i = letter
        if kind == "t":
            if n > self.N:
                raise TruncationError("t%d beyond truncation %d" % (n, self.N))
            return self.tau_power(n, i)
        if n + 1 > self.N:
            raise TruncationError("%s%d_%d beyond truncation %d" % (kind, n, i, self.N))
        if kind == "d":
            return self.face[n][i]
        return self.degen[n][i]

    # classical names: faces and degeneracies acting on T_n
    def d(self, n: int, i: int) -> Matrix:
        """Face d_i out of T_n (cyclic) or into T_n from T_{n-1} (cocyclic)."""
        return self.face[n - 1][i]

    def transpose(self) -> "ParaCyclicModule":
        other = "cyclic" if self.orientation == "cocyclic" else "cocyclic"
        return ParaCyclicModule(
            self.field, other, list(self.dims),
            [[f.T for f in fs] for fs in self.face],
            [[s.T for s in ss] for ss in self.degen],
            [t.T for t in self.tau],
            dict(self.provenance, transposed=not self.provenance.get("transposed", False)))

    def truncate(self, N: int) -> "ParaCyclicModule":
        if N > self.N:
            raise TruncationError("cannot extend truncation %d to %d" % (self.N, N))
        return ParaCyclicModule(self.field, self.orientation, self.dims[:N + 1],
                                self.face[:N], self.degen[:N], self.tau[:N + 1],
                                dict(self.provenance))

    def operators(self):
        """Yield (label, matrix, source degree, target degree) for every stored operator."""
        cov = self.orientation == "cocyclic"
        for n in range(self.N):
            for j, f in enumerate(self.face[n]):
                yield ("d%d_%d" % (n, j), f, n if cov else n + 1, n + 1 if cov else n)
            for i, s in enumerate(self.degen[n]):
                yield ("s%d_%d" % (n, i), s, n + 1 if cov else n, n if cov else n + 1)
        for n in range(self.N + 1):
            yield ("t%d" % n, self.tau[n], n, n)

    def same_operators(self, other: "ParaCyclicModule") -> bool:
        return (self.orientation == other.orientation and self.dims == other.dims
                and self.face == other.face and self.degen == other.degen
                and self.tau == other.tau)


@dataclass(frozen=True)
class SModulePair:
    degree: int
    leg0_dims: tuple
    leg1_dims: tuple
    t: Matrix  # leg0 -> leg1


def cyclic_permutation(field, x_dim: int, m_dim: int, n: int) -> Matrix:
    """t_{n+2}: X^{(x) n} (x) M (x) X -> X^{(x) n+1} (x) M, last factor moved to the front."""
    dims = [x_dim] * n + [m_dim, x_dim]
    return tensor_permutation(field, dims, [n + 1] + list(range(n + 1)))


def build_P(x_dim: int, m_dim: int, w: Transposition, n: int, field: FieldSpec) -> SModulePair:
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if (w.m_dim, w.x_dim) != (m_dim, x_dim):
        raise ValueError("transposition does not match the dimensions of X and M")
    t = cyclic_permutation(field, x_dim, m_dim, n)
    return SModulePair(n, tuple([x_dim] * n + [m_dim, x_dim]), tuple([x_dim] * (n + 1) + [m_dim]), t)


def _I(field, n):
    return Matrix.identity(field, n)


def build_T_coalgebra(D: SymmetryDatum, w: Transposition, N: int, field: FieldSpec,
                      check: bool = True, provenance: dict | None = None) -> ParaCyclicModule:
    """The para-cocyclic module T(C, M) of a w-transpositive coalgebra C."""
    if D.kind.is_algebra:
        raise ValueError("build_T_coalgebra needs a coalgebra carrier")
    if check:
        rep = check_w_transpositive(D, w, field)
        if not rep.ok:
            raise TranspositivityError(rep)
    if N < 0:
        raise ValueError("truncation must be nonnegative")
    F, c, m = field, D.dim, w.m_dim
    delta, eps = D.comult, D.counit
    Im = _I(F, m)
    dims = [c ** (n + 1) * m for n in range(N + 1)]

    def tau(n):
        t_inv = cyclic_permutation(F, c, m, n).T
        return kronecker(_I(F, c ** n), w.w) @ t_inv

    taus = [tau(n) for n in range(N + 1)]
    faces, degens = [], []
    for n in range(N):
        fs = [kron_all([_I(F, c ** i), delta, _I(F, c ** (n - i)), Im]) for i in range(n + 1)]
        # last coface lives on the first leg: (C^n (x) w (x) C)(C^n (x) M (x) delta)
        on_leg0 = (kron_all([_I(F, c ** n), w.w, _I(F, c)])
                   @ kron_all([_I(F, c ** n), Im, delta]))
        fs.append(cyclic_permutation(F, c, m, n + 1) @ on_leg0
                  @ cyclic_permutation(F, c, m, n).T)
        faces.append(fs)
        degens.append([kron_all([_I(F, c ** (i + 1)), eps, _I(F, c ** (n - i)), Im])
                       for i in range(n + 1)])
    prov = dict(provenance or {}, kind=D.kind.value, carrier=D.name, construction="coalgebra")
    return ParaCyclicModule(F, "cocyclic", dims, faces, degens, taus, prov)


def build_T_algebra(D: SymmetryDatum, w: Transposition, N: int, field: FieldSpec,
                    check: bool = True, provenance: dict | None = None) -> ParaCyclicModule:
    """The para-cyclic module T(A, M) of a w-transpositive algebra A.

    t_n(a_0 .. a_n (x) m) = x (x) a_0 .. a_(n-1) (x) m' where x (x) m' = w(m (x) a_n),
    faces multiply neighbours, the last face is d_0 t, degeneracies insert 1.
    """
    if not D.kind.is_algebra:
        raise ValueError("build_T_algebra needs an algebra carrier")
    if check:
        rep = check_w_transpositive(D, w, field)
        if not rep.ok:
            raise TranspositivityError(rep)
    if N < 0:
        raise ValueError("truncation must be nonnegative")
    F, a, m = field, D.dim, w.m_dim
    mu, unit = D.mult, D.unit
    Im = _I(F, m)
    dims = [a ** (n + 1) * m for n in range(N + 1)]

    def tau(n):
        dims_n = [a] * (n + 1) + [m]
        bring_m = tensor_permutation(F, dims_n, list(range(n)) + [n + 1, n])
        twist = kronecker(_I(F, a ** n), w.w)
        to_front = tensor_permutation(F, [a] * (n + 1) + [m], [n] + list(range(n)) + [n + 1])
        return to_front @ twist @ bring_m

    taus = [tau(n) for n in range(N + 1)]
    faces, degens = [], []
    for n in range(N):
        fs = [kron_all([_I(F, a ** i), mu, _I(F, a ** (n - i)), Im]) for i in range(n + 1)]
        fs.append(fs[0] @ taus[n + 1])
        faces.append(fs)
        degens.append([kron_all([_I(F, a ** (i + 1)), unit, _I(F, a ** (n - i)), Im])
                       for i in range(n + 1)])
    prov = dict(provenance or {}, kind=D.kind.value, carrier=D.name, construction="algebra")
    return ParaCyclicModule(F, "cyclic", dims, faces, degens, taus, prov)


def build_T(D: SymmetryDatum, w: Transposition, N: int, field: FieldSpec, **kw) -> ParaCyclicModule:
    if D.kind.is_algebra:
        return build_T_algebra(D, w, N, field, **kw)
    return build_T_coalgebra(D, w, N, field, **kw)


# ---------------------------------------------------------------------------
# certification


@dataclass
class CertificationReport:
    flavor: Flavor
    truncation: int
    checked: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> RelationInstance | None:
        return self.failures[0] if self.failures else None

    def lines(self) -> list[str]:
        head = "relations (%s, N=%d): %d checked, %s" % (
            self.flavor.value, self.truncation, self.checked,
            "all hold" if self.ok else "%d FAIL" % len(self.failures))
        return [head] + ["  fails: %s" % r for r in self.failures[:10]]


def certify_relations(T: ParaCyclicModule, flavor: Flavor = Flavor.N, stop_at_first=False,
                      simplicial_only=False) -> CertificationReport:
    """Evaluate both sides of every defining relation at degrees <= N and compare."""
    rep = CertificationReport(flavor, T.N)
    for rel in relation_instances(T.N, flavor):
        if simplicial_only and rel.name not in ("dd", "ss", "sd", "ds"):
            continue
        if rel.max_degree() > T.N:
            continue
        lhs, rhs = rel.words(flavor)
        rep.checked += 1
        if evaluate_word(lhs, T) != evaluate_word(rhs, T):
            rep.failures.append(rel)
            if stop_at_first:
                break
    return rep


def simplicial_relations_hold(T: ParaCyclicModule) -> CertificationReport:
    """Simplicial identities of the full face set (including the last face)."""
    return certify_relations(T, Flavor.N, simplicial_only=True)
