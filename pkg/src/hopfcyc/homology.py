"""
Coefficient functors (coinvariants, cotensor) and homology engines: the
Hochschild b-complex, the Connes (b, b', 1-lambda, N) bicomplex, cocyclic
duals and the Hopf-Hochschild pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .approximation import (EquivariantParaCyclic, Mode, as_equivariant, equivariant_T)
from .hopf import Bialgebra, CoefficientDatum, Kind, SymmetryDatum, transposition_for
from .lambda_cat import Flavor
from .linalg import (Matrix, RestrictionError, Subspace, descend, equalizer, kronecker,
                     restrict)
from .paracyclic import (CertificationError, ParaCyclicModule, build_T_algebra,
                         certify_relations)


class EquivarianceError(ValueError):
    pass


class HonestyError(ValueError):
    pass


def _I(F, n):
    return Matrix.identity(F, n)


# ---------------------------------------------------------------------------
# coefficient functors


def coinvariant_relations(E: EquivariantParaCyclic, n: int) -> Subspace:
    """span{b x - eps(b) x} inside T_n."""
    B = E.comonad.B
    rel = E.rho[n] - kronecker(B.counit, _I(E.field, E.T.dims[n]))
    return Subspace.image(rel)


def _descend_family(T: ParaCyclicModule, anns: list, which: str = "all") -> ParaCyclicModule:
    faces, degens = [], []
    for n in range(T.N):
        s, t = (n, n + 1) if T.orientation == "cocyclic" else (n + 1, n)
        try:
            faces.append([descend(f, anns[s], anns[t]) for f in T.face[n]])
            degens.append([descend(g, anns[t], anns[s]) for g in T.degen[n]])
        except RestrictionError as exc:
            raise EquivarianceError("degree %d: %s" % (n, exc)) from None
    try:
        taus = [descend(x, a, a) for x, a in zip(T.tau, anns)]
    except RestrictionError as exc:
        raise EquivarianceError("cyclic operator: %s" % exc) from None
    return ParaCyclicModule(T.field, T.orientation, [a.dim for a in anns], faces, degens, taus,
                           dict(T.provenance, coefficients="coinvariants"))


def coinvariants(X) -> ParaCyclicModule:
    """k (x)_B X: the quotient X_n / span{b x - eps(b) x} with descended operators."""
    E = as_equivariant(X)
    if E.comonad is None:
        return E.T
    if E.mode is not Mode.MODULE:
        raise ValueError("coinvariants need module-side structures")
    anns = [coinvariant_relations(E, n).annihilator() for n in range(E.N + 1)]
    return _descend_family(E.T, anns)


def coinvariant_quotient_maps(X) -> list:
    """Quotient maps T_n -> k (x)_B T_n, rows spanning the annihilator of the relations."""
    E = as_equivariant(X)
    return [coinvariant_relations(E, n).annihilator().basis.T for n in range(E.N + 1)]


def cotensor_subspace(E: EquivariantParaCyclic, n: int) -> Subspace:
    """{x : rho(x) = 1 (x) x} inside T_n."""
    B = E.comonad.B
    return equalizer(E.rho[n], kronecker(B.unit, _I(E.field, E.T.dims[n])))


def cotensor(X) -> ParaCyclicModule:
    """k []_B X: the coinvariant subspace {x : rho(x) = 1 (x) x} with restricted operators."""
    E = as_equivariant(X)
    if E.comonad is None:
        return E.T
    if E.mode is not Mode.COMODULE:
        raise ValueError("cotensor needs comodule-side structures")
    T = E.T
    spaces = [cotensor_subspace(E, n) for n in range(T.N + 1)]
    faces, degens = [], []
    try:
        for n in range(T.N):
            s, t = (n, n + 1) if T.orientation == "cocyclic" else (n + 1, n)
            faces.append([restrict(f, spaces[s], spaces[t]) for f in T.face[n]])
            degens.append([restrict(g, spaces[t], spaces[s]) for g in T.degen[n]])
        taus = [restrict(x, V, V) for x, V in zip(T.tau, spaces)]
    except RestrictionError as exc:
        raise EquivarianceError(str(exc)) from None
    return ParaCyclicModule(T.field, T.orientation, [V.dim for V in spaces], faces, degens,
                            taus, dict(T.provenance, coefficients="cotensor"))


def apply_coefficients(X) -> ParaCyclicModule:
    """Coinvariants on the module side, cotensor on the comodule side."""
    E = as_equivariant(X)
    if E.comonad is None:
        return E.T
    return coinvariants(E) if E.mode is Mode.MODULE else cotensor(E)


# ---------------------------------------------------------------------------
# complexes


@dataclass
class ChainComplex:
    """d[n]: C_n -> C_{n-1} for 1 <= n <= top; d[0] is the zero map to 0."""

    dims: list
    d: list
    field: object = None

    def __post_init__(self):
        if len(self.d) != len(self.dims):
            raise ValueError("one differential per degree expected")
        for n in range(1, len(self.dims)):
            if self.d[n].shape != (self.dims[n - 1], self.dims[n]):
                raise ValueError("d[%d] has shape %s" % (n, self.d[n].shape))

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def check_square_zero(self) -> list[int]:
        return [n for n in range(2, self.top + 1) if not (self.d[n - 1] @ self.d[n]).is_zero()]

    def ranks(self) -> list[int]:
        return [0] + [self.d[n].rank() for n in range(1, self.top + 1)]

    def homology(self, upto: int | None = None) -> list[int]:
        """Homology dims in degrees 0..upto (default top - 1: the last degree lacks d[top+1])."""
        upto = self.top - 1 if upto is None else upto
        if upto > self.top - 1:
            raise HonestyError("degree %d needs the differential out of degree %d"
                               % (upto, upto + 1))
        r = self.ranks()
        return [self.dims[n] - r[n] - r[n + 1] for n in range(upto + 1)]


@dataclass
class HomologyTable:
    theory: str
    dims: list
    provenance: dict = dc_field(default_factory=dict)

    def rows(self):
        return list(enumerate(self.dims))

    def lines(self) -> list[str]:
        return ["%s_%d  %d" % (self.theory, n, d) for n, d in self.rows()]


def _alternating(mats, field, rows, cols) -> Matrix:
    acc = Matrix.zeros(field, rows, cols)
    for i, f in enumerate(mats):
        acc = acc + f if i % 2 == 0 else acc - f
    return acc


def _cyclic_input(T: ParaCyclicModule) -> ParaCyclicModule:
    if T.orientation != "cyclic":
        raise ValueError("expected a cyclic (contravariant) family; transpose cocyclic ones")
    return T


def b_complex(T: ParaCyclicModule, prime: bool = False) -> ChainComplex:
    """b = sum_{i=0}^{n} (-1)^i d_i on T_n; b' omits the last face."""
    T = _cyclic_input(T)
    F = T.field
    d = [Matrix.zeros(F, 0, T.dims[0])]
    for n in range(1, T.N + 1):
        faces = T.face[n - 1][:n] if prime else T.face[n - 1][:n + 1]
        d.append(_alternating(faces, F, T.dims[n - 1], T.dims[n]))
    return ChainComplex(list(T.dims), d, F)


def hochschild_complex_from_faces(field, dims: list, faces: list) -> ChainComplex:
    """b-complex from faces[n-1] = [d_0..d_n]: C_n -> C_{n-1}."""
    d = [Matrix.zeros(field, 0, dims[0])]
    for n in range(1, len(dims)):
        d.append(_alternating(faces[n - 1][:n + 1], field, dims[n - 1], dims[n]))
    return ChainComplex(list(dims), d, field)


def _table_provenance(T: ParaCyclicModule, extra=None) -> dict:
    p = dict(T.provenance)
    p.update(field=str(T.field), truncation=T.N)
    p.update(extra or {})
    return p


def hochschild_homology(T: ParaCyclicModule, check: bool = True) -> HomologyTable:
    """HH_n for n <= N-1 of a cyclic family (cocyclic input is transposed: cohomology)."""
    theory = "HH"
    if T.orientation == "cocyclic":
        T, theory = T.transpose(), "HH^"
    if check:
        rep = certify_relations(T, Flavor.N, simplicial_only=True, stop_at_first=True)
        if not rep.ok:
            raise CertificationError(rep)
    C = b_complex(T)
    if check and C.check_square_zero():
        raise CertificationError(_SquareReport(C.check_square_zero()))
    return HomologyTable(theory, C.homology(), _table_provenance(T))


class _SquareReport:
    def __init__(self, degrees):
        self.degrees = degrees

    def lines(self):
        return ["d o d != 0 in degrees %s" % self.degrees]


def signed_cyclic_operator(T: ParaCyclicModule, n: int) -> Matrix:
    return T.tau[n] if n % 2 == 0 else -T.tau[n]


def norm_operator(T: ParaCyclicModule, n: int) -> Matrix:
    lam = signed_cyclic_operator(T, n)
    acc, p = T.identity(n), T.identity(n)
    for _ in range(n):
        p = p @ lam
        acc = acc + p
    return acc


def connes_total_complex(T: ParaCyclicModule) -> ChainComplex:
    """Total complex of the (b, -b', 1 - lambda, N) bicomplex, columns truncated at N."""
    T = _cyclic_input(T)
    F, N = T.field, T.N
    b, bp = b_complex(T).d, b_complex(T, prime=True).d
    one_minus = [T.identity(n) - signed_cyclic_operator(T, n) for n in range(N + 1)]
    norm = [norm_operator(T, n) for n in range(N + 1)]

    def blocks(n):  # column p carries C_{n-p}
        return [(p, n - p) for p in range(n + 1)]

    def offsets(n):
        out, acc = {}, 0
        for p, q in blocks(n):
            out[p] = acc
            acc += T.dims[q]
        return out, acc

    dims, d = [], []
    for n in range(N + 1):
        off_n, tot_n = offsets(n)
        dims.append(tot_n)
        if n == 0:
            d.append(Matrix.zeros(F, 0, tot_n))
            continue
        off_m, tot_m = offsets(n - 1)
        entries = {}

        def put(mat, row0, col0):
            for (i, j), v in mat.entries.items():
                key = (row0 + i, col0 + j)
                entries[key] = entries.get(key, 0) + v

        for p, q in blocks(n):
            if q >= 1:
                vert = b[q] if p % 2 == 0 else -bp[q]
                put(vert, off_m[p], off_n[p])
            if p >= 1:
                horiz = one_minus[q] if p % 2 == 1 else norm[q]
                put(horiz, off_m[p - 1], off_n[p])
        entries = {k: F(v) for k, v in entries.items() if F(v)}
        d.append(Matrix.from_entries(F, tot_m, tot_n, entries))
    return ChainComplex(dims, d, F)


def honest_cyclic_degree(N: int) -> int:
    return N - 2


def cyclic_homology(T: ParaCyclicModule, check: bool = True, theory: str = "HC"
                    ) -> HomologyTable:
    """HC_n for n <= N-2 of a cyclic family; refuses unless tau^{n+1} = id."""
    T = _cyclic_input(T)
    if check:
        for n in range(T.N + 1):
            if not T.tau_power(n, n + 1).is_identity():
                raise CertificationError(_CyclicReport(n))
    C = connes_total_complex(T)
    if check and C.check_square_zero():
        raise CertificationError(_SquareReport(C.check_square_zero()))
    top = honest_cyclic_degree(T.N)
    dims = C.homology(top) if top >= 0 else []
    return HomologyTable(theory, dims, _table_provenance(T))


class _CyclicReport:
    def __init__(self, n):
        self.n = n

    def lines(self):
        return ["tau_%d^%d != id: input is not cyclic" % (self.n, self.n + 1)]


def cocyclic_cohomology(Q: ParaCyclicModule, check: bool = True) -> HomologyTable:
    """Cyclic cohomology of a cocyclic family, via the transposed cyclic family."""
    if Q.orientation != "cocyclic":
        raise ValueError("expected a cocyclic family")
    return cyclic_homology(Q.transpose(), check, theory="HC^")


# ---------------------------------------------------------------------------
# Hopf-Hochschild


def hopf_hochschild(B: Bialgebra, D: SymmetryDatum, M: CoefficientDatum, N: int,
                    check: bool = True) -> HomologyTable:
    """HH of k (x)_B T'(A, M) for a B-module algebra A.

    T' keeps the diagonal B-module structure; its faces and degeneracies must be
    B-linear, which is certified before taking coinvariants.
    """
    if D.kind is not Kind.MA:
        raise ValueError("Hopf-Hochschild homology needs a module algebra (kind MA)")
    F = B.field
    T = build_T_algebra(D, transposition_for(B, D, M), N, F,
                        provenance={"B": B.name, "M_dim": M.dim})
    rep = certify_relations(T, Flavor.N, simplicial_only=True, stop_at_first=True)
    if not rep.ok:
        raise CertificationError(rep)
    E = equivariant_T(B, D, M, T)
    bad = [lab for lab, f, s, t in T.operators()
           if not lab.startswith("t") and not E.is_equivariant(f, s, t)]
    if bad:
        raise EquivarianceError("not B-linear: %s" % ", ".join(bad))
    anns = [coinvariant_relations(E, n).annihilator() for n in range(N + 1)]
    faces = [[descend(f, anns[n + 1], anns[n]) for f in T.face[n]] for n in range(N)]
    C = hochschild_complex_from_faces(F, [a.dim for a in anns], faces)
    if check and C.check_square_zero():
        raise CertificationError(_SquareReport(C.check_square_zero()))
    return HomologyTable("HopfHH", C.homology(), _table_provenance(T, {"kind": "MA"}))
