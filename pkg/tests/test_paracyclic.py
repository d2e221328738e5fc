import pytest

from hopfcyc import fixtures as fx
from hopfcyc.hopf import CoefficientDatum, Kind, transposition_for
from hopfcyc.lambda_cat import Flavor
from hopfcyc.linalg import FieldSpec, Matrix
from hopfcyc.paracyclic import (ParaCyclicModule, TranspositivityError, build_P, build_T,
                                certify_relations, simplicial_relations_hold)
from oracles import classical_cocyclic, classical_cyclic, to_sympy

Q = FieldSpec.Q()


def make_T(B, D, M, N):
    return build_T(D, transposition_for(B, D, M), N, Q)


def all_fixtures():
    """(label, B, D, M) over k[Z/2] and H4 with trivial and sign coefficients."""
    out = []
    kZ2, H4 = fx.group_algebra(Q, 2), fx.sweedler(Q)
    for kind, D in fx.z2_data(Q).items():
        out.append(("kZ2 %s trivial" % kind.value, kZ2, D, CoefficientDatum.trivial(kZ2)))
        out.append(("kZ2 %s sign" % kind.value, kZ2, D, fx.sign_coefficient(kZ2)))
    for kind in Kind:
        out.append(("H4 %s trivial" % kind.value, H4, fx.regular_datum(H4, kind),
                    CoefficientDatum.trivial(H4)))
    return out


FIXTURES = all_fixtures()


def test_build_P_moves_last_factor_to_front(kZ2):
    M = CoefficientDatum.trivial(kZ2)
    w = transposition_for(kZ2, fx.z2_data(Q)[Kind.MC], M)
    P = build_P(2, 1, w, 1, Q)
    assert P.leg0_dims == (2, 1, 2) and P.leg1_dims == (2, 2, 1)
    # (x0, m, x1) -> (x1, x0, m)
    assert P.t == Matrix.from_dense(Q, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    with pytest.raises(ValueError):
        build_P(3, 1, w, 1, Q)


@pytest.mark.parametrize("label,B,D,M", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_fixtures_are_para_cyclic(label, B, D, M):
    T = make_T(B, D, M, 3)
    assert T.dims == [D.dim ** (n + 1) * M.dim for n in range(4)]
    assert certify_relations(T, Flavor.N).ok
    assert certify_relations(T, Flavor.Z).ok
    assert simplicial_relations_hold(T).ok
    cyclic = certify_relations(T, Flavor.LAMBDA).ok
    assert cyclic == ("sign" not in label)


def test_sign_coefficient_twist_is_not_periodic(kZ2):
    M = fx.sign_coefficient(kZ2)
    T = make_T(kZ2, fx.z2_data(Q)[Kind.CA], M, 2)
    assert T.tau_power(1, 2) != T.identity(1)
    assert T.tau_power(1, 4) == T.identity(1)


def test_tau_periodic_with_trivial_coefficients(kZ2, H4):
    for B in (kZ2, H4):
        for kind in Kind:
            D = fx.regular_datum(B, kind)
            T = make_T(B, D, CoefficientDatum.trivial(B), 3)
            for n in range(4):
                assert T.tau_power(n, n + 1) == T.identity(n)
    T = make_T(kZ2, fx.z2_data(Q)[Kind.MC], CoefficientDatum.trivial(kZ2), 1)
    assert T.tau[1] @ T.tau[1] == T.identity(1)


def test_corrupted_tau_is_caught(H4):
    D = fx.regular_datum(H4, Kind.MC)
    T = make_T(H4, D, CoefficientDatum.trivial(H4), 3)
    tau = list(T.tau)
    tau[2] = tau[2] + tau[2]
    bad = ParaCyclicModule(Q, T.orientation, T.dims, T.face, T.degen, tau)
    rep = certify_relations(bad, Flavor.N)
    assert not rep.ok
    assert any(r.name in ("dt", "ts") for r in rep.failures)
    assert certify_relations(bad, Flavor.N, stop_at_first=True).first_failure is not None
    assert simplicial_relations_hold(bad).ok


def test_extra_codegeneracy_inverts_last_coface(H4):
    for kind in (Kind.MC, Kind.CC):
        T = make_T(H4, fx.regular_datum(H4, kind), CoefficientDatum.trivial(H4), 3)
        for n in range(3):
            assert T.degen[n][n] @ T.face[n][n + 1] == T.identity(n)


ALGEBRAS = [fx.dual_numbers(Q), fx.matrix_algebra(Q, 2), fx.group_algebra(Q, 2), fx.sweedler(Q)]


@pytest.mark.parametrize("A", ALGEBRAS, ids=lambda a: a.name)
def test_trivial_symmetry_is_classical_cyclic_module(A):
    k = fx.ground(Q)
    N = 2 if A.dim > 2 else 3
    T = make_T(k, fx.trivial_datum(k, Kind.CA, A), CoefficientDatum.trivial(k), N)
    faces, degens, taus = classical_cyclic(A, N)
    assert [to_sympy(t) for t in T.tau] == taus
    for n in range(N):
        assert [to_sympy(f) for f in T.face[n]] == faces[n]
        assert [to_sympy(s) for s in T.degen[n]] == degens[n]
    assert certify_relations(T, Flavor.LAMBDA).ok


COALGEBRAS = [fx.dual_numbers(Q).dual(), fx.group_algebra(Q, 3), fx.sweedler(Q)]


@pytest.mark.parametrize("C", COALGEBRAS, ids=lambda c: c.name)
def test_trivial_symmetry_is_classical_cocyclic_module(C):
    k = fx.ground(Q)
    N = 2 if C.dim > 2 else 3
    T = make_T(k, fx.trivial_datum(k, Kind.CC, C), CoefficientDatum.trivial(k), N)
    faces, degens, taus = classical_cocyclic(C, N)
    assert [to_sympy(t) for t in T.tau] == taus
    for n in range(N):
        assert [to_sympy(f) for f in T.face[n]] == faces[n]
        assert [to_sympy(s) for s in T.degen[n]] == degens[n]


@pytest.mark.parametrize("A", ALGEBRAS[:3], ids=lambda a: a.name)
def test_transpose_of_algebra_module_is_coalgebra_module_of_dual(A):
    k = fx.ground(Q)
    M = CoefficientDatum.trivial(k)
    T = make_T(k, fx.trivial_datum(k, Kind.CA, A), M, 2)
    U = make_T(k, fx.trivial_datum(k, Kind.CC, A.dual()), M, 2)
    assert T.transpose().same_operators(U)
    assert T.transpose().transpose().same_operators(T)


def test_non_transpositive_datum_refused(kZ2):
    bad = fx.z2_data(Q)[Kind.CA]
    broken = type(bad)(Kind.CA, 2, mult=bad.mult, unit=bad.unit,
                       coaction=Matrix(Q, 4, 2, [{2: 1}, {3: 1}]))
    M = fx.sign_coefficient(kZ2)
    with pytest.raises(TranspositivityError):
        build_T(broken, transposition_for(kZ2, broken, M), 2, Q)


def test_truncate_and_operator_listing(H4):
    T = make_T(H4, fx.regular_datum(H4, Kind.CA), CoefficientDatum.trivial(H4), 2)
    S = T.truncate(1)
    assert S.N == 1 and S.dims == T.dims[:2]
    labels = [op[0] for op in S.operators()]
    assert labels == ["d0_0", "d0_1", "s0_0", "t0", "t1"]
