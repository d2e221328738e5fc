import pytest
import sympy

from hopfcyc import fixtures as fx
from hopfcyc.approximation import (ApproximationResult, EquivariantParaCyclic, Mode,
                                   PseudoParaError, approximation_subspace, comonad_approximation,
                                   cyclic_approximation, detect_pseudo_para,
                                   direct_limit_subspace, equivariant_T, factor_through,
                                   full_pipeline, is_lambda_plus, last_face_equalizer,
                                   working_orientation)
from hopfcyc.hopf import CoefficientDatum, Kind, SymmetryDatum, transposition_for
from hopfcyc.linalg import (FieldSpec, Matrix, RestrictionError, Subspace, kronecker,
                            largest_invariant_subspace)
from hopfcyc.paracyclic import ParaCyclicModule, build_T
from oracles import dense_rank, to_sympy

Q = FieldSpec.Q()


def equivariant(B, D, M, N):
    T = build_T(D, transposition_for(B, D, M), N, Q)
    return equivariant_T(B, D, M, T)


def working(E):
    return E.dual() if E.mode is Mode.MODULE else E


def kernel_dim_oracle(rows_blocks):
    """dim of the common kernel of stacked sympy blocks."""
    stacked = sympy.Matrix.vstack(*rows_blocks)
    return stacked.cols - dense_rank(stacked.tolist())


def cyclic_invariants_oracle(T, n):
    t = to_sympy(T.tau[n])
    return kernel_dim_oracle([t ** (n + 1) - sympy.eye(t.rows)])


# ---------------------------------------------------------------- pseudo-para detection


def test_lambda_plus_labels():
    assert is_lambda_plus("d2_2") and is_lambda_plus("s1_0")
    assert not is_lambda_plus("d2_3") and not is_lambda_plus("t2")


@pytest.mark.parametrize("kind", list(Kind), ids=lambda k: k.value)
def test_fixtures_are_pseudo_para(kind, H4, kZ2):
    for B, D in ((H4, fx.regular_datum(H4, kind)), (kZ2, fx.z2_data(Q)[kind])):
        rep = detect_pseudo_para(equivariant(B, D, CoefficientDatum.trivial(B), 2))
        assert rep.ok, rep.lines()
        assert rep.lines()[0] == "pseudo-para structure: ok"


def test_corrupted_coaction_detected(H4):
    E = equivariant(H4, fx.regular_datum(H4, Kind.CA), CoefficientDatum.trivial(H4), 2)
    rho = list(E.rho)
    rho[1] = rho[1] + rho[1]
    rep = detect_pseudo_para(EquivariantParaCyclic(E.T, E.comonad, rho))
    assert not rep.ok and not rep.axioms.ok
    with pytest.raises(PseudoParaError):
        comonad_approximation(EquivariantParaCyclic(E.T, E.comonad, rho))


def test_non_equivariant_faces_detected(kZ2):
    # T from a valid comodule algebra, coactions from a non-colinear grading
    D = fx.z2_data(Q)[Kind.CA]
    M = CoefficientDatum.trivial(kZ2)
    T = build_T(D, transposition_for(kZ2, D, M), 2, Q)
    odd = Matrix(Q, 4, 2, [{2: 1}, {3: 1}])  # every basis vector in degree g
    bad = SymmetryDatum(Kind.CA, 2, mult=D.mult, unit=D.unit, coaction=odd)
    rep = detect_pseudo_para(equivariant_T(kZ2, bad, M, T))
    assert not rep.ok
    assert any(lab.startswith("d") for lab in rep.failing_plus)


def test_tau_need_not_be_equivariant(H4):
    rep = detect_pseudo_para(equivariant(H4, fx.regular_datum(H4, Kind.CA),
                                         CoefficientDatum.trivial(H4), 2))
    assert rep.ok and not all(rep.tau_equivariant)


# ---------------------------------------------------------------- trivial cases


def test_ground_field_gives_full_spaces():
    k = fx.ground(Q)
    A = fx.dual_numbers(Q)
    for kind in (Kind.CA, Kind.MA):
        res = full_pipeline(k, fx.trivial_datum(k, kind, A), CoefficientDatum.trivial(k), 3)
        assert res.comonad.dims == res.T.dims == res.cyclic.dims


@pytest.mark.parametrize("kind", list(Kind), ids=lambda k: k.value)
def test_z2_comonad_stage_is_everything(kind, kZ2):
    D = fx.z2_data(Q)[kind]
    for M in (CoefficientDatum.trivial(kZ2), fx.sign_coefficient(kZ2)):
        res = full_pipeline(kZ2, D, M, 3)
        assert all(res.pseudo.tau_equivariant)
        assert res.comonad.dims == res.T.dims
        want = [cyclic_invariants_oracle(res.T, n) for n in range(4)]
        assert res.cyclic.dims == want
    trivial = full_pipeline(kZ2, D, CoefficientDatum.trivial(kZ2), 3)
    sign = full_pipeline(kZ2, D, fx.sign_coefficient(kZ2), 3)
    assert trivial.cyclic.dims == [2, 4, 8, 16]
    assert sign.cyclic.dims == [1, 2, 4, 8]


def test_twist_without_fixed_vectors_gives_zero():
    T = ParaCyclicModule(Q, "cyclic", [1], [], [], [Matrix.from_dense(Q, [[2]])])
    res = cyclic_approximation(T)
    assert res.dims == [0]


# ---------------------------------------------------------------- limit versus fixpoint


@pytest.mark.parametrize("kind", [Kind.MC, Kind.CA], ids=lambda k: k.value)
def test_fixpoint_equals_direct_limit_on_h4(kind, H4):
    W = working(equivariant(H4, fx.regular_datum(H4, kind), CoefficientDatum.trivial(H4), 3))
    assert W.T.orientation == "cyclic"
    for n in range(4):
        fp = approximation_subspace(W, n)
        assert fp == direct_limit_subspace(W, n)
    assert [approximation_subspace(W, n).dim for n in range(4)] == [4, 10, 29, 93]


def _dense_limit_dim(W, n, last_face=False):
    """Common kernel of rho tau^m - (B (x) tau^m) rho, m = 1 .. dim + 1, via sympy."""
    d = W.comonad.B.dim
    t = to_sympy(W.T.tau[n])
    rho = to_sympy(W.rho[n])
    blocks, p = [], sympy.eye(t.rows)
    for _ in range(t.rows + 1):
        p = p * t
        blocks.append(rho * p - sympy.kronecker_product(sympy.eye(d), p) * rho)
    if last_face:
        f = to_sympy(W.T.face[n][n + 1])
        blocks.append(to_sympy(W.rho[n + 1]) * f - sympy.kronecker_product(sympy.eye(d), f) * rho)
    return kernel_dim_oracle(blocks)


@pytest.mark.parametrize("kind", list(Kind), ids=lambda k: k.value)
def test_direct_limit_against_dense_oracle(kind, H4):
    W = working(equivariant(H4, fx.regular_datum(H4, kind), CoefficientDatum.trivial(H4), 2))
    cocyclic = W.T.orientation == "cocyclic"
    for n in range(2):
        V = direct_limit_subspace(W, n, last_face=cocyclic)
        assert V.dim == _dense_limit_dim(W, n, cocyclic)


@pytest.mark.parametrize("kind", [Kind.MA, Kind.CC], ids=lambda k: k.value)
def test_cocyclic_fixpoint_is_tau_stable_part_of_literal_limit(kind, H4):
    W = working(equivariant(H4, fx.regular_datum(H4, kind), CoefficientDatum.trivial(H4), 3))
    assert W.T.orientation == "cocyclic"
    n = 2
    literal = direct_limit_subspace(W, n, last_face=True)
    fp = approximation_subspace(W, n)
    assert literal.dim == 35 and fp.dim == 33
    assert fp <= literal
    assert fp == largest_invariant_subspace(literal, [W.T.tau[n]])
    # the literal limit is not closed under tau
    assert largest_invariant_subspace(literal, [W.T.tau[n]]) != literal
    assert fp <= last_face_equalizer(W, n)


# ---------------------------------------------------------------- structure of the results


def _injective(m):
    return m.rank() == m.cols


@pytest.mark.parametrize("kind", list(Kind), ids=lambda k: k.value)
def test_h4_pipeline_dims_and_naturality(kind, H4):
    res = full_pipeline(H4, fx.regular_datum(H4, kind), CoefficientDatum.trivial(H4), 3)
    want = {Kind.MC: [4, 10, 29, 93], Kind.CA: [4, 10, 29, 93],
            Kind.MA: [4, 12, 33, 99], Kind.CC: [4, 12, 33, 99]}[kind]
    assert res.comonad.dims == want
    assert res.cyclic.dims == [cyclic_invariants_oracle(res.comonad.module.T, n)
                               for n in range(4)]
    for stage in (res.comonad, res.cyclic):
        assert stage.naturality_failures() == []
        shape = "quotient" if kind.module_side else "sub"
        assert stage.shape == shape
        for m in stage.maps:
            assert _injective(m) if shape == "sub" else _injective(m.T)


def test_cyclic_approximation_idempotent(H4):
    res = full_pipeline(H4, fx.regular_datum(H4, Kind.CA), CoefficientDatum.trivial(H4), 2)
    again = cyclic_approximation(res.cyclic)
    assert again.dims == res.cyclic.dims
    assert all(V.is_full for V in again.subspaces)
    assert again.module.T.same_operators(res.Q.T)


def test_comonad_approximation_is_idempotent(H4):
    E = equivariant(H4, fx.regular_datum(H4, Kind.CA), CoefficientDatum.trivial(H4), 2)
    res = comonad_approximation(E)
    again = comonad_approximation(res.module)
    assert again.dims == res.dims and all(V.is_full for V in again.subspaces)


def test_universal_property(H4):
    E = equivariant(H4, fx.regular_datum(H4, Kind.CA), CoefficientDatum.trivial(H4), 2)
    tb = comonad_approximation(E)
    q = cyclic_approximation(tb)
    # the composite Q -> T^B -> T factors through T^B, by the inclusion Q -> T^B
    phis = [tb.maps[n] @ q.maps[n] for n in range(3)]
    psis = factor_through(tb, phis)
    assert psis == q.maps
    # the identity of T does not factor through a proper subobject
    with pytest.raises(RestrictionError):
        factor_through(tb, [Matrix.identity(Q, d) for d in E.T.dims])


def test_module_side_result_is_dual_of_comodule_side(H4):
    E = equivariant(H4, fx.regular_datum(H4, Kind.MC), CoefficientDatum.trivial(H4), 2)
    res = comonad_approximation(E)
    assert res.shape == "quotient"
    dual = comonad_approximation(E.dual())
    assert dual.shape == "sub" and dual.dims == res.dims
    assert res.dual().module.T.same_operators(dual.module.T)


def test_working_orientation():
    assert [working_orientation(k) for k in (Kind.MC, Kind.CA, Kind.MA, Kind.CC)] == \
        ["cyclic", "cyclic", "cocyclic", "cocyclic"]
