"""
Bundled structure constants: the ground field, group algebras k[Z/n], their
duals, and Sweedler's four-dimensional Hopf algebra, plus the symmetry data
built from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .hopf import Bialgebra, CoefficientDatum, Kind, SymmetryDatum, switch
from .linalg import FieldSpec, Matrix, kronecker, tensor_permutation


def _mult_matrix(F, d, prod: Callable[[int, int], dict]) -> Matrix:
    cols = []
    for i in range(d):
        for j in range(d):
            cols.append({k: F(v) for k, v in prod(i, j).items() if F(v)})
    return Matrix(F, d, d * d, cols)


def _comult_matrix(F, d, cop: Callable[[int], dict]) -> Matrix:
    cols = []
    for i in range(d):
        cols.append({j * d + k: F(v) for (j, k), v in cop(i).items() if F(v)})
    return Matrix(F, d * d, d, cols)


def _vector(F, values) -> Matrix:
    return Matrix.from_dense(F, [[v] for v in values])


def _covector(F, values) -> Matrix:
    return Matrix.from_dense(F, [list(values)])


def _linear(F, d, image: Callable[[int], dict]) -> Matrix:
    return Matrix(F, d, d, [{k: F(v) for k, v in image(i).items() if F(v)} for i in range(d)])


def ground(F: FieldSpec) -> Bialgebra:
    one = Matrix.identity(F, 1)
    return Bialgebra(F, 1, one, one, one, one, one, "k")


def group_algebra(F: FieldSpec, n: int) -> Bialgebra:
    """k[Z/n] with basis g^0, ..., g^(n-1)."""
    mult = _mult_matrix(F, n, lambda i, j: {(i + j) % n: 1})
    comult = _comult_matrix(F, n, lambda i: {(i, i): 1})
    S = _linear(F, n, lambda i: {(-i) % n: 1})
    return Bialgebra(F, n, mult, _vector(F, [1] + [0] * (n - 1)), comult,
                     _covector(F, [1] * n), S, "k[Z/%d]" % n)


def function_algebra(F: FieldSpec, n: int) -> Bialgebra:
    """Dual of k[Z/n]: point functions delta_0, ..., delta_(n-1)."""
    mult = _mult_matrix(F, n, lambda i, j: {i: 1} if i == j else {})
    comult = _comult_matrix(F, n, lambda h: {(a, (h - a) % n): 1 for a in range(n)})
    S = _linear(F, n, lambda i: {(-i) % n: 1})
    return Bialgebra(F, n, mult, _vector(F, [1] * n), comult,
                     _covector(F, [1] + [0] * (n - 1)), S, "k^Z/%d" % n)


def sweedler(F: FieldSpec) -> Bialgebra:
    """Sweedler's H4 with basis 1, g, x, gx."""

    def idx(a, b):
        return a + 2 * b

    def prod(i, j):
        a, b = i % 2, i // 2
        c, d = j % 2, j // 2
        if b + d >= 2:
            return {}
        sign = -1 if b * c else 1
        return {idx((a + c) % 2, b + d): sign}

    cop = {
        0: {(0, 0): 1},
        1: {(1, 1): 1},
        2: {(2, 0): 1, (1, 2): 1},
        3: {(3, 1): 1, (0, 3): 1},
    }
    S = {0: {0: 1}, 1: {1: 1}, 2: {3: -1}, 3: {2: 1}}
    return Bialgebra(F, 4, _mult_matrix(F, 4, prod), _vector(F, [1, 0, 0, 0]),
                     _comult_matrix(F, 4, lambda i: cop[i]), _covector(F, [1, 1, 0, 0]),
                     _linear(F, 4, lambda i: S[i]), "H4")


def adjoint_action(B: Bialgebra) -> Matrix:
    """b.a = b_(1) a S(b_(2))."""
    F, d = B.field, B.dim
    I = Matrix.identity(F, d)
    return (B.mult @ kronecker(B.mult, B.antipode)
            @ kronecker(I, switch(F, d, d)) @ kronecker(B.comult, I))


def adjoint_coaction(B: Bialgebra) -> Matrix:
    """a -> a_(1) S(a_(3)) (x) a_(2)."""
    F, d = B.field, B.dim
    I = Matrix.identity(F, d)
    three = kronecker(B.comult, I) @ B.comult
    perm = tensor_permutation(F, [d, d, d], [0, 2, 1])
    return kronecker(B.mult @ kronecker(I, B.antipode), I) @ perm @ three


def character(B: Bialgebra, values) -> Matrix:
    """One-dimensional module b.m = chi(b) m."""
    return Matrix.from_dense(B.field, [list(values)])


def grading(B: Bialgebra, element: int) -> Matrix:
    """One-dimensional comodule m -> b (x) m for a group-like basis element b."""
    return Matrix(B.field, B.dim, 1, [{element: 1}])


def regular_datum(B: Bialgebra, kind: Kind | str) -> SymmetryDatum:
    """B over itself: left multiplication or comultiplication as the (co)action."""
    kind = Kind(kind)
    if kind is Kind.MC:
        return SymmetryDatum(kind, B.dim, comult=B.comult, counit=B.counit, action=B.mult,
                             name="%s regular" % B.name)
    if kind is Kind.CA:
        return SymmetryDatum(kind, B.dim, mult=B.mult, unit=B.unit, coaction=B.comult,
                             name="%s regular" % B.name)
    if kind is Kind.MA:
        return SymmetryDatum(kind, B.dim, mult=B.mult, unit=B.unit, action=adjoint_action(B),
                             name="%s adjoint" % B.name)
    return SymmetryDatum(kind, B.dim, comult=B.comult, counit=B.counit,
                         coaction=adjoint_coaction(B), name="%s adjoint" % B.name)


def trivial_datum(B: Bialgebra, kind: Kind | str, C) -> SymmetryDatum:
    """Carrier C (a Bialgebra or Carrier) with the trivial B-(co)action."""
    from .hopf import trivial_action, trivial_coaction
    kind = Kind(kind)
    common = dict(name="%s trivial" % C.name)
    if kind.module_side:
        common["action"] = trivial_action(B, C.dim)
    else:
        common["coaction"] = trivial_coaction(B, C.dim)
    if kind.is_algebra:
        return SymmetryDatum(kind, C.dim, mult=C.mult, unit=C.unit, **common)
    return SymmetryDatum(kind, C.dim, comult=C.comult, counit=C.counit, **common)


def z2_data(F: FieldSpec) -> dict:
    """Symmetry data of every kind over B = k[Z/2]."""
    B = group_algebra(F, 2)
    Fun = function_algebra(F, 2)
    shift = Matrix(F, 2, 4, [{0: 1}, {1: 1}, {1: 1}, {0: 1}])  # g.delta_h = delta_(h+1)
    grade = Matrix(F, 4, 2, [{0: 1}, {2 + 1: 1}])  # delta_h -> g^h (x) delta_h
    return {
        Kind.MC: SymmetryDatum(Kind.MC, 2, comult=B.comult, counit=B.counit, action=B.mult,
                               name="k[Z/2] regular"),
        Kind.CA: SymmetryDatum(Kind.CA, 2, mult=B.mult, unit=B.unit, coaction=B.comult,
                               name="k[Z/2] regular"),
        Kind.MA: SymmetryDatum(Kind.MA, 2, mult=Fun.mult, unit=Fun.unit, action=shift,
                               name="k^Z/2 translation"),
        Kind.CC: SymmetryDatum(Kind.CC, 2, comult=Fun.comult, counit=Fun.counit,
                               coaction=grade, name="k^Z/2 graded"),
    }


def sign_coefficient(B: Bialgebra) -> CoefficientDatum:
    """M = k with g acting by -1 and coaction m -> g (x) m, for B = k[Z/2]."""
    return CoefficientDatum(1, character(B, [1, -1]), grading(B, 1))


@dataclass(frozen=True)
class Carrier:
    """A bare algebra (mult, unit) or coalgebra (comult, counit) used as X."""

    field: FieldSpec
    dim: int
    mult: Matrix | None = None
    unit: Matrix | None = None
    comult: Matrix | None = None
    counit: Matrix | None = None
    name: str = ""

    def dual(self) -> "Carrier":
        t = lambda m: m.T if m is not None else None
        return Carrier(self.field, self.dim, t(self.comult), t(self.counit), t(self.mult),
                       t(self.unit), self.name + "*")


def dual_numbers(F: FieldSpec) -> Carrier:
    """The algebra k[x]/(x^2) with basis 1, x."""
    mult = _mult_matrix(F, 2, lambda i, j: {i + j: 1} if i + j < 2 else {})
    return Carrier(F, 2, mult=mult, unit=_vector(F, [1, 0]), name="k[x]/x^2")


def matrix_algebra(F: FieldSpec, n: int) -> Carrier:
    """M_n(k) with basis e_ij at index i*n + j."""
    def prod(a, b):
        i, j = divmod(a, n)
        k, l = divmod(b, n)
        return {i * n + l: 1} if j == k else {}
    unit = [1 if i == j else 0 for i in range(n) for j in range(n)]
    return Carrier(F, n * n, mult=_mult_matrix(F, n * n, prod), unit=_vector(F, unit),
                   name="M_%d(k)" % n)


BIALGEBRAS = {
    "k": ground,
    "kZ2": lambda F: group_algebra(F, 2),
    "kZ3": lambda F: group_algebra(F, 3),
    "H4": sweedler,
}
