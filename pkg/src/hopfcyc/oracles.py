"""
Brute-force cross-checks run by ``--oracle``: dense sympy ranks for homology
tables and the direct-limit computation of T^B against the fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import sympy
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from .approximation import (EquivariantParaCyclic, Mode, approximation_subspace,
                            direct_limit_subspace)
from .linalg import Matrix


def dense_rank(M: Matrix) -> int:
    """Rank by sympy's dense elimination, independent of the sparse engine."""
    if M.rows == 0 or M.cols == 0:
        return 0
    F = M.field
    if F.is_rational:
        dom = QQ
        rows = [[QQ.convert(sympy.Rational(str(x))) for x in r] for r in M.to_dense()]
    else:
        dom = GF(F.p)
        rows = [[dom(int(x)) for x in r] for r in M.to_dense()]
    return DomainMatrix(rows, M.shape, dom).rank()


def dense_homology(dims: list, d: list, upto: int) -> list:
    r = [0] + [dense_rank(d[n]) for n in range(1, len(dims))]
    return [dims[n] - r[n] - r[n + 1] for n in range(upto + 1)]


@dataclass
class OracleReport:
    checks: list = dc_field(default_factory=list)  # (label, ok)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)

    def add(self, label: str, ok: bool):
        self.checks.append((label, bool(ok)))

    def lines(self) -> list[str]:
        return ["oracle %s: %s" % (lab, "pass" if ok else "FAIL") for lab, ok in self.checks]


def limit_oracle(E: EquivariantParaCyclic, report: OracleReport, max_degree: int = 3):
    """Fixpoint versus the direct intersection of E_1 .. E_{dim+1}, per degree."""
    W = E.dual() if E.mode is Mode.MODULE else E
    top = min(max_degree, W.N - (1 if W.T.orientation == "cocyclic" else 0))
    for n in range(top + 1):
        fp = approximation_subspace(W, n)
        direct = direct_limit_subspace(W, n, last_face=W.T.orientation == "cocyclic")
        if W.T.orientation == "cocyclic":
            # the direct limit need not be tau-stable; the fixpoint is its tau-stable part
            from .linalg import largest_invariant_subspace
            direct = largest_invariant_subspace(direct, [W.T.tau[n]])
        report.add("limit fixpoint = direct intersection (degree %d)" % n, fp == direct)
