"""
Comonad machinery for B (x) - (comodule side) and - (x) B in the opposite
category (module side), pseudo-para-(co)cyclic detection, the comonad
approximation T^B and the cyclic approximation App_Lambda.

One concrete recipe is implemented, on the comodule side.  Module-side data
is handled by transposing everything: the transpose of a B-action is a
B*-coaction, B-linear maps become B*-colinear, and subspaces of the dual
spaces correspond to quotients of the original ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field

from .hopf import (Bialgebra, CoefficientDatum, ConfigurationError, SymmetryDatum,
                   ValidationReport, check_identity, diagonal_action, diagonal_coaction,
                   transposition_for, validate_symmetry)
from .lambda_cat import Flavor, TruncationError
from .linalg import (FieldSpec, Matrix, RestrictionError, Subspace, equalizer, intersect,
                     kronecker, largest_invariant_subspace, restrict)
from .paracyclic import (CertificationError, ParaCyclicModule, build_T, certify_relations)


class Mode(str, enum.Enum):
    COMODULE = "comodule_side"
    MODULE = "module_side"

    def flipped(self) -> "Mode":
        return Mode.MODULE if self is Mode.COMODULE else Mode.COMODULE


class PseudoParaError(ValueError):
    def __init__(self, report):
        super().__init__("\n".join(report.lines()))
        self.report = report


@dataclass(frozen=True)
class ComonadSpec:
    B: Bialgebra
    mode: Mode

    def dual(self) -> "ComonadSpec":
        return ComonadSpec(self.B.dual(), self.mode.flipped())


def _I(F, n):
    return Matrix.identity(F, n)


@dataclass
class EquivariantParaCyclic:
    """A para-(co)cyclic module with a B-structure in every degree.

    ``rho[n]`` is a coaction T_n -> B (x) T_n on the comodule side and an
    action B (x) T_n -> T_n on the module side.  ``comonad`` may be None for
    a plain family (no equivariance data).
    """

    T: ParaCyclicModule
    comonad: ComonadSpec | None = None
    rho: list | None = None

    def __post_init__(self):
        if (self.comonad is None) != (self.rho is None):
            raise ValueError("comonad and rho must be given together")
        if self.rho is not None and len(self.rho) != self.T.N + 1:
            raise ValueError("need one B-structure per degree")

    @property
    def N(self) -> int:
        return self.T.N

    @property
    def mode(self) -> Mode | None:
        return self.comonad.mode if self.comonad else None

    @property
    def field(self) -> FieldSpec:
        return self.T.field

    def dual(self) -> "EquivariantParaCyclic":
        if self.comonad is None:
            return EquivariantParaCyclic(self.T.transpose())
        return EquivariantParaCyclic(self.T.transpose(), self.comonad.dual(),
                                     [r.T for r in self.rho])

    def truncate(self, N: int) -> "EquivariantParaCyclic":
        if self.comonad is None:
            return EquivariantParaCyclic(self.T.truncate(N))
        return EquivariantParaCyclic(self.T.truncate(N), self.comonad, self.rho[:N + 1])

    def is_equivariant(self, f: Matrix, src: int, tgt: int) -> bool:
        """Whether f: T_src -> T_tgt is a morphism of B-(co)modules."""
        if self.comonad is None:
            return True
        lift = kronecker(_I(self.field, self.comonad.B.dim), f)
        if self.mode is Mode.COMODULE:
            return self.rho[tgt] @ f == lift @ self.rho[src]
        return f @ self.rho[src] == self.rho[tgt] @ lift


def equivariant_T(B: Bialgebra, D: SymmetryDatum, M: CoefficientDatum,
                  T: ParaCyclicModule) -> EquivariantParaCyclic:
    """Attach the diagonal B-structure of X^{(x) n+1} (x) M to every T_n."""
    mode = Mode.MODULE if D.kind.module_side else Mode.COMODULE
    if mode is Mode.MODULE:
        if M.action is None:
            raise ConfigurationError("kind %s needs a B-action on the coefficient" % D.kind.value)
        pieces = (D.action, M.action)
        build = diagonal_action
    else:
        if M.coaction is None:
            raise ConfigurationError("kind %s needs a B-coaction on the coefficient"
                                     % D.kind.value)
        pieces = (D.coaction, M.coaction)
        build = diagonal_coaction
    rho = [build(B, [pieces[0]] * (n + 1) + [pieces[1]], [D.dim] * (n + 1) + [M.dim])
           for n in range(T.N + 1)]
    return EquivariantParaCyclic(T, ComonadSpec(B, mode), rho)


# ---------------------------------------------------------------------------
# pseudo-para detection


def is_lambda_plus(label: str) -> bool:
    """Faces d^n_j with j <= n and all degeneracies generate Lambda_+."""
    if label.startswith("s"):
        return True
    if label.startswith("d"):
        n, j = map(int, label[1:].split("_"))
        return j <= n
    return False


@dataclass
class PseudoParaReport:
    axioms: ValidationReport
    failing_plus: list = dc_field(default_factory=list)
    tau_equivariant: list = dc_field(default_factory=list)
    last_face_equivariant: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.axioms.ok and not self.failing_plus

    def lines(self) -> list[str]:
        out = ["pseudo-para structure: %s" % ("ok" if self.ok else "FAIL")]
        out += self.axioms.lines()
        out += ["  not equivariant: %s" % lab for lab in self.failing_plus]
        out.append("  tau equivariant by degree: %s"
                   % " ".join("yes" if t else "no" for t in self.tau_equivariant))
        out.append("  last face equivariant by degree: %s"
                   % " ".join("yes" if t else "no" for t in self.last_face_equivariant))
        return out


def detect_pseudo_para(E: EquivariantParaCyclic) -> PseudoParaReport:
    rep = ValidationReport("B-structures")
    out = PseudoParaReport(rep)
    if E.comonad is None:
        out.tau_equivariant = [True] * (E.N + 1)
        out.last_face_equivariant = [True] * E.N
        return out
    F, B = E.field, E.comonad.B
    d = B.dim
    for n, r in enumerate(E.rho):
        t = E.T.dims[n]
        I = _I(F, t)
        if E.mode is Mode.COMODULE:
            check_identity(rep, "coassociativity of rho[%d]" % n,
                           kronecker(B.comult, I) @ r, kronecker(_I(F, d), r) @ r, [t])
            check_identity(rep, "counit of rho[%d]" % n, kronecker(B.counit, I) @ r, I, [t])
        else:
            check_identity(rep, "associativity of rho[%d]" % n,
                           r @ kronecker(_I(F, d), r), r @ kronecker(B.mult, I), [d, d, t])
            check_identity(rep, "unit of rho[%d]" % n, r @ kronecker(B.unit, I), I, [t])
    for label, f, s, t in E.T.operators():
        if label.startswith("t"):
            out.tau_equivariant.append(E.is_equivariant(f, s, t))
        elif is_lambda_plus(label):
            if not E.is_equivariant(f, s, t):
                out.failing_plus.append(label)
        else:
            out.last_face_equivariant.append(E.is_equivariant(f, s, t))
    return out


# ---------------------------------------------------------------------------
# restriction machinery


@dataclass
class ApproximationResult:
    """A subobject (comodule side) or quotient (module side) of ``ambient``.

    ``maps[n]`` is the inclusion T'_n -> T_n for ``shape == "sub"`` and the
    quotient map T_n -> T'_n for ``shape == "quotient"``.  ``subspaces[n]`` is
    the defining subspace, of T_n or of its dual respectively.
    """

    module: EquivariantParaCyclic
    ambient: EquivariantParaCyclic
    maps: list
    subspaces: list
    shape: str
    stage: str

    @property
    def dims(self) -> list:
        return list(self.module.T.dims)

    def dual(self) -> "ApproximationResult":
        return ApproximationResult(self.module.dual(), self.ambient.dual(),
                                   [m.T for m in self.maps], self.subspaces,
                                   "quotient" if self.shape == "sub" else "sub", self.stage)

    def naturality_failures(self) -> list[str]:
        """Operators whose square with the structure maps does not commute."""
        bad = []
        amb = dict((lab, (f, s, t)) for lab, f, s, t in self.ambient.T.operators())
        for lab, g, s, t in self.module.T.operators():
            f = amb[lab][0]
            if self.shape == "sub":
                ok = f @ self.maps[s] == self.maps[t] @ g
            else:
                ok = self.maps[t] @ f == g @ self.maps[s]
            if not ok:
                bad.append(lab)
        return bad


def restrict_coaction(rho: Matrix, V: Subspace, d: int) -> Matrix:
    """rho restricted to V -> B (x) V, in the stored bases; raises if it escapes."""
    F = rho.field
    basis, sec = V.basis, V.section()
    res = kronecker(_I(F, d), sec.T) @ rho @ basis
    if kronecker(_I(F, d), basis) @ res != rho @ basis:
        raise RestrictionError("coaction does not preserve the subspace")
    return res


def restrict_family(E: EquivariantParaCyclic, spaces: list) -> EquivariantParaCyclic:
    """Restrict every operator (and coaction) of E to the subspaces, degree by degree."""
    T = E.T
    if len(spaces) != T.N + 1:
        raise ValueError("need one subspace per degree")
    faces, degens = [], []
    for n in range(T.N):
        if T.orientation == "cocyclic":
            up, down = (spaces[n], spaces[n + 1]), (spaces[n + 1], spaces[n])
        else:
            up, down = (spaces[n + 1], spaces[n]), (spaces[n], spaces[n + 1])
        faces.append([restrict(f, *up) for f in T.face[n]])
        degens.append([restrict(s, *down) for s in T.degen[n]])
    taus = [restrict(t, V, V) for t, V in zip(T.tau, spaces)]
    R = ParaCyclicModule(T.field, T.orientation, [V.dim for V in spaces], faces, degens, taus,
                         dict(T.provenance))
    if E.comonad is None:
        return EquivariantParaCyclic(R)
    if E.mode is not Mode.COMODULE:
        raise ValueError("restriction of module-side data goes through the dual")
    rho = [restrict_coaction(r, V, E.comonad.B.dim) for r, V in zip(E.rho, spaces)]
    return EquivariantParaCyclic(R, E.comonad, rho)


def _via_dual(E, fn, *args, **kw) -> ApproximationResult:
    return fn(E.dual(), *args, **kw).dual()


def _check_result(res: ApproximationResult, flavor: Flavor, certify: bool):
    M = res.module
    bad = [lab for lab, f, s, t in M.T.operators() if not M.is_equivariant(f, s, t)]
    if bad:
        raise RestrictionError("restricted operators not equivariant: %s" % ", ".join(bad))
    bad = res.naturality_failures()
    if bad:
        raise RestrictionError("structure maps not natural for: %s" % ", ".join(bad))
    if certify:
        rep = certify_relations(M.T, flavor, stop_at_first=True)
        if not rep.ok:
            raise CertificationError(rep)


# ---------------------------------------------------------------------------
# comonad approximation


def tau_equalizer(E: EquivariantParaCyclic, n: int, m: int = 1) -> Subspace:
    """E_m: the equalizer of rho tau^m and B(tau^m) rho on the comodule side."""
    t = E.T.tau_power(n, m)
    lift = kronecker(_I(E.field, E.comonad.B.dim), t)
    return equalizer(E.rho[n] @ t, lift @ E.rho[n])


def last_face_equalizer(E: EquivariantParaCyclic, n: int) -> Subspace:
    """Equalizer of rho d_{n+1} and B(d_{n+1}) rho for a cocyclic comodule family."""
    f = E.T.face[n][n + 1]
    lift = kronecker(_I(E.field, E.comonad.B.dim), f)
    return equalizer(E.rho[n + 1] @ f, lift @ E.rho[n])


def _working_checks(E: EquivariantParaCyclic):
    if E.comonad is None or E.mode is not Mode.COMODULE:
        raise ValueError("expected comodule-side equivariant data")


def approximation_subspace(E: EquivariantParaCyclic, n: int) -> Subspace:
    """T^B_n: the largest tau-invariant subspace of E_1 (cut down by the last-face pair
    for cocyclic families)."""
    _working_checks(E)
    seed = tau_equalizer(E, n)
    if E.T.orientation == "cocyclic":
        if n + 1 > E.N:
            raise TruncationError("degree %d needs the family built to %d" % (n, n + 1))
        seed = intersect(seed, last_face_equalizer(E, n))
    return largest_invariant_subspace(seed, [E.T.tau[n]])


def direct_limit_subspace(E: EquivariantParaCyclic, n: int, last_face: bool = False,
                          depth: int | None = None) -> Subspace:
    """Intersection of E_m for m = 1 .. depth (default dim T_n + 1), computed directly.

    With ``last_face`` the last-face equalizer is intersected too, as in the
    pair set used for cocyclic families.
    """
    _working_checks(E)
    depth = E.T.dims[n] + 1 if depth is None else depth
    V = Subspace.full(E.field, E.T.dims[n])
    for m in range(1, depth + 1):
        V = intersect(V, tau_equalizer(E, n, m))
    if last_face:
        V = intersect(V, last_face_equalizer(E, n))
    return V


def comonad_approximation(E: EquivariantParaCyclic, N: int | None = None,
                          flavor: Flavor = Flavor.N, certify: bool = True,
                          check_input: bool = True) -> ApproximationResult:
    """T^B: the universal para-(co)cyclic B-(co)module inside a pseudo-para one.

    For a cocyclic comodule-side family degree n needs the last face into
    degree n+1, so the output stops one degree below the input by default.
    """
    if E.comonad is None:
        raise ValueError("comonad approximation needs B-structures")
    if E.mode is Mode.MODULE:
        return _via_dual(E, comonad_approximation, N, flavor, certify, check_input)
    if N is None:
        N = E.N - 1 if E.T.orientation == "cocyclic" else E.N
    if N < 0 or N > E.N or (E.T.orientation == "cocyclic" and N + 1 > E.N):
        raise TruncationError("cannot approximate to degree %d from truncation %d" % (N, E.N))
    if check_input:
        rep = detect_pseudo_para(E)
        if not rep.ok:
            raise PseudoParaError(rep)
    spaces = [approximation_subspace(E, n) for n in range(N + 1)]
    amb = E.truncate(N)
    res = ApproximationResult(restrict_family(amb, spaces), amb, [V.basis for V in spaces],
                              spaces, "sub", "comonad_stage")
    _check_result(res, flavor, certify)
    return res


# ---------------------------------------------------------------------------
# cyclic approximation


def as_equivariant(X) -> EquivariantParaCyclic:
    if isinstance(X, ApproximationResult):
        return X.module
    if isinstance(X, ParaCyclicModule):
        return EquivariantParaCyclic(X)
    return X


def cyclic_approximation(X, certify: bool = True) -> ApproximationResult:
    """App_Lambda: degreewise equalizer of tau^{n+1} and the identity.

    Module-side input is handled in the dual, which turns the equalizer into
    the corresponding coequalizer (a quotient).
    """
    E = as_equivariant(X)
    if E.mode is Mode.MODULE:
        return _via_dual(E, cyclic_approximation, certify)
    T = E.T
    spaces = [equalizer(T.tau_power(n, n + 1), T.identity(n)) for n in range(T.N + 1)]
    res = ApproximationResult(restrict_family(E, spaces), E, [V.basis for V in spaces],
                              spaces, "sub", "cyclic_stage")
    _check_result(res, Flavor.LAMBDA, certify)
    return res


def factor_through(res: ApproximationResult, phis: list) -> list:
    """Solve phi_n = incl_n psi_n (or phi_n = psi_n q_n for quotients) degreewise.

    Returns the unique psi family, or raises RestrictionError when phi does not
    factor.  Used to test the universal property on supplied witnesses.
    """
    out = []
    for n, phi in enumerate(phis):
        V = res.subspaces[n]
        if res.shape == "sub":
            full = Subspace.full(phi.field, phi.cols)
            out.append(restrict(phi, full, V))
        else:
            # psi q = phi  <=>  q^T psi^T = phi^T
            full = Subspace.full(phi.field, phi.rows)
            out.append(restrict(phi.T, full, V).T)
    return out


# ---------------------------------------------------------------------------
# pipeline


def working_orientation(kind) -> str:
    """Orientation of the comodule-side family the approximation actually runs on."""
    built = "cyclic" if kind.is_algebra else "cocyclic"
    if kind.module_side:
        return "cocyclic" if built == "cyclic" else "cyclic"
    return built


@dataclass
class PipelineResult:
    B: Bialgebra
    datum: SymmetryDatum
    coefficient: CoefficientDatum
    N: int
    T: ParaCyclicModule
    equivariant: EquivariantParaCyclic  # built to N, or N+1 for cocyclic working data
    pseudo: PseudoParaReport
    comonad: ApproximationResult
    cyclic: ApproximationResult

    @property
    def Q(self) -> EquivariantParaCyclic:
        return self.cyclic.module


def full_pipeline(B: Bialgebra, D: SymmetryDatum, M: CoefficientDatum, N: int,
                  certify: bool = True, flavor: Flavor = Flavor.N,
                  validate: bool = True) -> PipelineResult:
    """build_T, then the comonad approximation, then the cyclic approximation."""
    F = B.field
    if validate:
        rep = validate_symmetry(B, D, M)
        if not rep.ok:
            from .paracyclic import TranspositivityError
            raise TranspositivityError(rep)
    w = transposition_for(B, D, M)
    depth = N + 1 if working_orientation(D.kind) == "cocyclic" else N
    T = build_T(D, w, depth, F, provenance={"B": B.name, "M_dim": M.dim})
    if certify:
        rep = certify_relations(T, flavor, stop_at_first=True)
        if not rep.ok:
            raise CertificationError(rep)
    E = equivariant_T(B, D, M, T)
    pseudo = detect_pseudo_para(E)
    if not pseudo.ok:
        raise PseudoParaError(pseudo)
    comonad = comonad_approximation(E, N, flavor, certify, check_input=False)
    cyc = cyclic_approximation(comonad, certify)
    return PipelineResult(B, D, M, N, T.truncate(N), E, pseudo, comonad, cyc)
