import random

import pytest

from hopfcyc import fixtures as fx
from hopfcyc.hopf import (Bialgebra, CoefficientDatum, ConfigurationError, FormatError, Kind,
                          SymmetryDatum, build_transposition, check_w_transpositive, switch,
                          transposition_for, validate_bialgebra, validate_symmetry)
from hopfcyc.linalg import FieldSpec, Matrix, inverse
from oracles import bialgebra_axioms_hold

Q = FieldSpec.Q()


def corrupt(B, attr, i, j, delta=1):
    mats = {a: getattr(B, a) for a in ("mult", "unit", "comult", "counit", "antipode")}
    ent = dict(mats[attr].entries)
    ent[(i, j)] = ent.get((i, j), 0) + delta
    mats[attr] = Matrix.from_entries(Q, mats[attr].rows, mats[attr].cols, ent)
    return Bialgebra(Q, B.dim, name=B.name + "~", **mats)


# ---------------------------------------------------------------- bialgebras


@pytest.mark.parametrize("name", sorted(fx.BIALGEBRAS))
def test_bundled_bialgebras_valid(name):
    B = fx.BIALGEBRAS[name](Q)
    rep = validate_bialgebra(B)
    assert rep.ok and bialgebra_axioms_hold(B)
    assert validate_bialgebra(B.dual()).ok


def test_group_like_corruption_detected(kZ2):
    # Delta(g) = g (x) 1 instead of g (x) g
    cols = [dict(kZ2.comult.column(0)), {2: 1}]
    bad = Bialgebra(Q, 2, kZ2.mult, kZ2.unit, Matrix(Q, 4, 2, cols), kZ2.counit,
                    kZ2.antipode, "bad")
    rep = validate_bialgebra(bad)
    assert not rep.ok
    assert any("counit" in f.axiom or "coassoc" in f.axiom or "multiplicative" in f.axiom
               for f in rep.failures)
    assert "INVALID" in rep.lines()[0]


def test_random_corruptions_agree_with_table_oracle():
    rng = random.Random(11)
    for B in (fx.group_algebra(Q, 2), fx.group_algebra(Q, 3), fx.sweedler(Q)):
        for _ in range(25):
            attr = rng.choice(["mult", "unit", "comult", "counit", "antipode"])
            m = getattr(B, attr)
            bad = corrupt(B, attr, rng.randrange(m.rows), rng.randrange(m.cols),
                          rng.choice([-1, 1, 2]))
            assert validate_bialgebra(bad).ok == bialgebra_axioms_hold(bad)


def test_shape_errors():
    with pytest.raises(FormatError):
        Bialgebra(Q, 2, Matrix.identity(Q, 2), Matrix.zeros(Q, 2, 1), Matrix.zeros(Q, 4, 2),
                  Matrix.zeros(Q, 1, 2))


def test_report_is_deterministic(H4):
    bad = corrupt(H4, "mult", 0, 5)
    assert validate_bialgebra(bad).lines() == validate_bialgebra(bad).lines()


# ---------------------------------------------------------------- symmetry data


def _neg(B, n):  # g acts by -1 on all of X
    return Matrix(Q, n, B.dim * n,
                  [{j % n: (1 if j // n == 0 else -1)} for j in range(B.dim * n)])


def _const_grade(B, n, g):
    return Matrix(Q, B.dim * n, n, [{g * n + j: 1} for j in range(n)])


def idempotent_algebra():
    """Basis 1, e with e^2 = e."""
    mult = Matrix.from_dense(Q, [[1, 0, 0, 0], [0, 1, 1, 1]])
    return fx.Carrier(Q, 2, mult=mult, unit=Matrix.from_dense(Q, [[1], [0]]), name="k x k")


def data_by_kind(B):
    """(datum, expected validity) lists; expectations follow from the definitions."""
    Fun = fx.function_algebra(Q, 2)
    z2 = fx.z2_data(Q)
    dn = fx.dual_numbers(Q)
    idem = idempotent_algebra()
    flip_e = Matrix(Q, 2, 4, [{0: 1}, {1: 1}, {0: 1}, {1: -1}])  # g.e = -e
    sign_x = Matrix(Q, 2, 4, [{0: 1}, {1: 1}, {0: 1}, {1: -1}])  # g.x = -x
    grade_x = Matrix(Q, 4, 2, [{0: 1}, {3: 1}])  # x in degree g
    out = {
        Kind.MA: [
            (z2[Kind.MA], True),
            (fx.regular_datum(B, Kind.MA), True),
            (SymmetryDatum(Kind.MA, 2, mult=dn.mult, unit=dn.unit, action=sign_x), True),
            (SymmetryDatum(Kind.MA, 2, mult=idem.mult, unit=idem.unit, action=flip_e), False),
            (SymmetryDatum(Kind.MA, 2, mult=Fun.mult, unit=Fun.unit, action=_neg(B, 2)), False),
        ],
        Kind.MC: [
            (z2[Kind.MC], True),
            (fx.trivial_datum(B, Kind.MC, Fun), True),
            (SymmetryDatum(Kind.MC, 2, comult=B.comult, counit=B.counit, action=_neg(B, 2)),
             False),
        ],
        Kind.CA: [
            (z2[Kind.CA], True),
            (SymmetryDatum(Kind.CA, 2, mult=dn.mult, unit=dn.unit, coaction=grade_x), True),
            (SymmetryDatum(Kind.CA, 2, mult=B.mult, unit=B.unit,
                           coaction=_const_grade(B, 2, 1)), False),
        ],
        Kind.CC: [
            (z2[Kind.CC], True),
            (fx.regular_datum(B, Kind.CC), True),
            (SymmetryDatum(Kind.CC, 2, comult=B.comult, counit=B.counit,
                           coaction=_const_grade(B, 2, 1)), False),
        ],
    }
    return out


@pytest.mark.parametrize("kind", list(Kind), ids=lambda k: k.value)
def test_symmetry_axioms_match_expectations(kind, kZ2):
    for D, valid in data_by_kind(kZ2)[kind]:
        assert validate_symmetry(kZ2, D).ok == valid, D.name or D


@pytest.mark.parametrize("kind", list(Kind), ids=lambda k: k.value)
def test_symmetry_equivalent_to_transpositivity_with_regular_coefficients(kind, kZ2):
    # with M = B the bow-tie identities for w reduce to the equivariance axioms
    M = CoefficientDatum(kZ2.dim, kZ2.mult, kZ2.comult)
    for D, valid in data_by_kind(kZ2)[kind]:
        w = transposition_for(kZ2, D, M)
        assert check_w_transpositive(D, w, Q).ok == valid


def test_h4_data_validate(H4):
    for kind in Kind:
        assert validate_symmetry(H4, fx.regular_datum(H4, kind)).ok


def test_datum_requires_structure():
    with pytest.raises(ConfigurationError):
        SymmetryDatum(Kind.MA, 1, mult=Matrix.identity(Q, 1))
    with pytest.raises(ConfigurationError):
        SymmetryDatum(Kind.CC, 1, comult=Matrix.identity(Q, 1), counit=Matrix.identity(Q, 1))


# ---------------------------------------------------------------- transpositions


def test_trivial_coefficients_give_the_switch(kZ2, H4):
    for B in (kZ2, H4):
        M = CoefficientDatum.trivial(B, 2)
        for kind in Kind:
            D = fx.regular_datum(B, kind)
            assert transposition_for(B, D, M).w == switch(Q, 2, B.dim)


def test_regular_mc_transposition_invertible(H4):
    M = CoefficientDatum(H4.dim, H4.mult, H4.comult)
    w = transposition_for(H4, fx.regular_datum(H4, Kind.MC), M).w
    assert w.rank() == 16
    assert w @ inverse(w) == Matrix.identity(Q, 16)


def test_sign_coefficient_transposition(kZ2):
    M = fx.sign_coefficient(kZ2)
    # MC: w(m (x) x) = g x (x) m
    w = transposition_for(kZ2, fx.z2_data(Q)[Kind.MC], M).w
    assert w == Matrix.from_dense(Q, [[0, 1], [1, 0]])
    # CA: w(m (x) g^h) = g^h (x) (-1)^h m
    w = transposition_for(kZ2, fx.z2_data(Q)[Kind.CA], M).w
    assert w == Matrix.from_dense(Q, [[1, 0], [0, -1]])


def test_missing_structure_raises(kZ2):
    with pytest.raises(ConfigurationError):
        build_transposition(Kind.MC, kZ2, CoefficientDatum(1, action=kZ2.counit), 2,
                            x_action=kZ2.mult)
    with pytest.raises(ConfigurationError):
        build_transposition(Kind.CA, kZ2, CoefficientDatum(1), 2, x_coaction=kZ2.comult)
