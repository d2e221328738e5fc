"""
Exact linear algebra over the rationals and prime fields.

Matrices are stored sparsely, column by column; subspaces are stored by a
fully reduced row-echelon basis, which makes them canonical: two subspaces
are equal iff their stored rows are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from sympy import isprime


class DimensionError(ValueError):
    pass


class RestrictionError(ValueError):
    """An operator does not map one subspace into another."""


@dataclass(frozen=True)
class FieldSpec:
    kind: str = "rationals"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "rationals":
            if self.p is not None:
                raise ValueError("rationals take no modulus")
        elif self.kind == "prime_field":
            if self.p is None or self.p < 2 or not isprime(self.p):
                raise ValueError("prime_field needs a prime modulus, got %r" % (self.p,))
            if self.p >= 2**61:
                raise ValueError("modulus must be below 2**61")
        else:
            raise ValueError("unknown field kind %r" % (self.kind,))

    @classmethod
    def Q(cls) -> "FieldSpec":
        return cls("rationals")

    @classmethod
    def GF(cls, p: int) -> "FieldSpec":
        return cls("prime_field", p)

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def __str__(self):
        return "Q" if self.p is None else "GF(%d)" % self.p

    def __call__(self, x):
        """Convert an int, Fraction or "p/q" string into a field element."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p is None:
            return _norm_q(Fraction(x))
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def norm(self, x):
        if self.p is None:
            return _norm_q(x)
        return x % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return _norm_q(Fraction(1) / x)
        return pow(x, -1, self.p)

    def neg(self, x):
        return self.norm(-x)

    def to_text(self, x) -> str:
        if isinstance(x, Fraction):
            return "%d/%d" % (x.numerator, x.denominator)
        return str(x)


def _norm_q(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


# ---------------------------------------------------------------------------
# sparse vectors: dict index -> nonzero value


def _axpy(field, y: dict, a, x: dict) -> None:
    """y += a*x in place, dropping zeros."""
    p = field.p
    for k, v in x.items():
        w = y.get(k, 0) + a * v
        w = w % p if p is not None else _norm_q(w)
        if w:
            y[k] = w
        else:
            y.pop(k, None)


class Matrix:
    """Immutable sparse matrix with column storage."""

    __slots__ = ("field", "rows", "cols", "_columns", "_hash")

    def __init__(self, field: FieldSpec, rows: int, cols: int, columns=None):
        if rows < 0 or cols < 0:
            raise DimensionError("negative shape")
        self.field = field
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(cols)]
        assert len(columns) == cols
        self._columns = tuple(columns)
        self._hash = None

    # -- constructors --------------------------------------------------

    @classmethod
    def zeros(cls, field, rows, cols) -> "Matrix":
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field, n) -> "Matrix":
        return cls(field, n, n, [{j: 1} for j in range(n)])

    @classmethod
    def from_dense(cls, field, data: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns = [{} for _ in range(cols)]
        for i, row in enumerate(data):
            if len(row) != cols:
                raise DimensionError("ragged dense matrix")
            for j, x in enumerate(row):
                x = field(x)
                if x:
                    columns[j][i] = x
        return cls(field, rows, cols, columns)

    @classmethod
    def from_entries(cls, field, rows, cols, entries: dict) -> "Matrix":
        columns = [{} for _ in range(cols)]
        for (i, j), x in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionError("entry (%d,%d) out of range" % (i, j))
            x = field(x)
            if x:
                columns[j][i] = x
        return cls(field, rows, cols, columns)

    @classmethod
    def from_columns(cls, field, rows, columns: Iterable[dict]) -> "Matrix":
        columns = [dict(c) for c in columns]
        return cls(field, rows, len(columns), columns)

    @classmethod
    def permutation(cls, field, images: Sequence[int]) -> "Matrix":
        """Matrix sending e_j to e_{images[j]}."""
        n = len(images)
        return cls(field, n, n, [{images[j]: 1} for j in range(n)])

    @classmethod
    def scalar(cls, field, x) -> "Matrix":
        x = field(x)
        return cls(field, 1, 1, [{0: x} if x else {}])

    # -- access --------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def column(self, j) -> dict:
        return self._columns[j]

    @property
    def columns(self):
        return self._columns

    def __getitem__(self, ij):
        i, j = ij
        return self._columns[j].get(i, 0)

    @property
    def entries(self) -> dict:
        return {(i, j): x for j, c in enumerate(self._columns) for i, x in c.items()}

    def nnz(self) -> int:
        return sum(len(c) for c in self._columns)

    def density(self) -> float:
        if not self.rows or not self.cols:
            return 0.0
        return self.nnz() / (self.rows * self.cols)

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, c in enumerate(self._columns):
            for i, x in c.items():
                out[i][j] = x
        return out

    def row_dicts(self) -> list[dict]:
        rows = [{} for _ in range(self.rows)]
        for j, c in enumerate(self._columns):
            for i, x in c.items():
                rows[i][j] = x
        return rows

    def is_zero(self) -> bool:
        return all(not c for c in self._columns)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            c == {j: 1} for j, c in enumerate(self._columns))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self._columns == other._columns)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, tuple(frozenset(c.items()) for c in self._columns)))
        return self._hash

    def __repr__(self):
        return "Matrix(%s, %dx%d, nnz=%d)" % (self.field, self.rows, self.cols, self.nnz())

    def __str__(self):
        rows = self.to_dense()
        return "\n".join("[" + " ".join(self.field.to_text(x).rjust(4) for x in r) + " ]"
                         for r in rows)

    # -- arithmetic ----------------------------------------------------

    def _check_field(self, other):
        if self.field != other.field:
            raise DimensionError("field mismatch: %s vs %s" % (self.field, other.field))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionError("cannot compose %dx%d with %dx%d"
                                 % (self.rows, self.cols, other.rows, other.cols))
        field = self.field
        mine = self._columns
        out = []
        for col in other._columns:
            acc = {}
            for k, b in col.items():
                _axpy(field, acc, b, mine[k])
            out.append(acc)
        return Matrix(field, self.rows, other.cols, out)

    def apply(self, v: dict) -> dict:
        if v and max(v) >= self.cols:
            raise DimensionError("vector out of range")
        acc = {}
        for k, b in v.items():
            _axpy(self.field, acc, b, self._columns[k])
        return acc

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, 1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, -1)

    def _combine(self, other, sign):
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch %s vs %s" % (self.shape, other.shape))
        out = []
        for a, b in zip(self._columns, other._columns):
            c = dict(a)
            _axpy(self.field, c, sign, b)
            out.append(c)
        return Matrix(self.field, self.rows, self.cols, out)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a) -> "Matrix":
        a = self.field(a)
        if not a:
            return Matrix.zeros(self.field, self.rows, self.cols)
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      [{i: f.norm(a * x) for i, x in c.items()} for c in self._columns])

    @property
    def T(self) -> "Matrix":
        out = [{} for _ in range(self.rows)]
        for j, c in enumerate(self._columns):
            for i, x in c.items():
                out[i][j] = x
        return Matrix(self.field, self.cols, self.rows, out)

    def __pow__(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionError("power of a non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        result = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.rows, len(idx), [self._columns[j] for j in idx])

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionError("hstack row mismatch")
        return Matrix(self.field, self.rows, self.cols + other.cols,
                      list(self._columns) + list(other._columns))

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise DimensionError("vstack column mismatch")
        r = self.rows
        out = []
        for a, b in zip(self._columns, other._columns):
            c = dict(a)
            for i, x in b.items():
                c[i + r] = x
            out.append(c)
        return Matrix(self.field, self.rows + other.rows, self.cols, out)

    def rank(self) -> int:
        return len(rref(self.field, self.row_dicts()))


def kronecker(f: Matrix, g: Matrix) -> Matrix:
    """Tensor product of linear maps, left factor most significant."""
    f._check_field(g)
    field = f.field
    p = field.p
    gr = g.rows
    out = []
    for fc in f.columns:
        for gc in g.columns:
            col = {}
            for i, a in fc.items():
                base = i * gr
                for k, b in gc.items():
                    x = a * b
                    col[base + k] = x % p if p is not None else _norm_q(x)
            out.append(col)
    return Matrix(field, f.rows * g.rows, f.cols * g.cols, out)


def kron_all(mats: Sequence[Matrix]) -> Matrix:
    out = mats[0]
    for m in mats[1:]:
        out = kronecker(out, m)
    return out


def tensor_permutation(field, dims: Sequence[int], order: Sequence[int]) -> Matrix:
    """Reorder tensor factors: output factor k is input factor ``order[k]``.

    The input space is dims[0] x dims[1] x ... in lexicographic order.
    """
    n = len(dims)
    if sorted(order) != list(range(n)):
        raise ValueError("not a permutation: %r" % (order,))
    out_dims = [dims[o] for o in order]
    strides = [1] * n
    for k in range(n - 2, -1, -1):
        strides[k] = strides[k + 1] * out_dims[k + 1]
    where = [0] * n  # input factor -> output position
    for k, o in enumerate(order):
        where[o] = k
    images = []
    for idx in product(*[range(d) for d in dims]):
        images.append(sum(idx[i] * strides[where[i]] for i in range(n)))
    return Matrix.permutation(field, images)


def inverse(f: Matrix) -> Matrix:
    if f.rows != f.cols:
        raise DimensionError("inverse of a non-square matrix")
    n = f.rows
    aug = f.hstack(Matrix.identity(f.field, n))
    rows = rref(f.field, aug.row_dicts())
    if len(rows) < n or any(piv != k for k, (piv, _) in enumerate(rows[:n])):
        raise ZeroDivisionError("matrix is singular")
    cols = [{} for _ in range(n)]
    for k, (_, row) in enumerate(rows[:n]):
        for j, x in row.items():
            if j >= n:
                cols[j - n][k] = x
    return Matrix(f.field, n, n, cols)


# ---------------------------------------------------------------------------
# elimination


def rref(field: FieldSpec, rows: Iterable[dict]) -> list[tuple[int, dict]]:
    """Fully reduced row echelon form of a list of sparse rows.

    Returns (pivot, row) pairs sorted by pivot; every row has 1 at its pivot
    and 0 at every other pivot column.
    """
    pivots: dict[int, dict] = {}
    p = field.p
    for row in rows:
        if not row:
            continue
        r = dict(row)
        hits = [c for c in r if c in pivots]
        for c in hits:
            a = r.get(c)
            if a:
                _axpy(field, r, -a, pivots[c])
        if not r:
            continue
        c0 = min(r)
        a = field.inv(r[c0])
        if a != 1:
            r = {k: (x * a) % p if p is not None else _norm_q(x * a) for k, x in r.items()}
        for prow in pivots.values():
            b = prow.get(c0)
            if b:
                _axpy(field, prow, -b, r)
        pivots[c0] = r
    return sorted(pivots.items())


class Subspace:
    """A subspace of k^n, stored as a reduced row-echelon basis."""

    __slots__ = ("field", "ambient_dim", "_rows", "pivots")

    def __init__(self, field: FieldSpec, ambient_dim: int, echelon: list[tuple[int, dict]]):
        self.field = field
        self.ambient_dim = ambient_dim
        self._rows = tuple(r for _, r in echelon)
        self.pivots = tuple(pv for pv, _ in echelon)

    @classmethod
    def span(cls, field, ambient_dim, vectors: Iterable[dict]) -> "Subspace":
        vectors = list(vectors)
        for v in vectors:
            if v and max(v) >= ambient_dim:
                raise DimensionError("vector out of ambient range")
        return cls(field, ambient_dim, rref(field, vectors))

    @classmethod
    def full(cls, field, n) -> "Subspace":
        return cls(field, n, [(j, {j: 1}) for j in range(n)])

    @classmethod
    def zero(cls, field, n) -> "Subspace":
        return cls(field, n, [])

    @classmethod
    def image(cls, f: Matrix) -> "Subspace":
        return cls.span(f.field, f.rows, f.columns)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def vectors(self) -> tuple[dict, ...]:
        return self._rows

    @property
    def basis(self) -> Matrix:
        """Inclusion matrix: columns are the basis vectors."""
        return Matrix(self.field, self.ambient_dim, self.dim, [dict(r) for r in self._rows])

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def coords(self, v: dict):
        """Coordinates of v in the stored basis, or None if v is not in the subspace."""
        coords = [v.get(pv, 0) for pv in self.pivots]
        r = dict(v)
        for a, row in zip(coords, self._rows):
            if a:
                _axpy(self.field, r, -a, row)
        return None if r else coords

    def contains_vector(self, v: dict) -> bool:
        return self.coords(v) is not None

    def __contains__(self, v):
        return self.contains_vector(v)

    def issubspace(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains_vector(r) for r in self._rows)

    def __le__(self, other):
        return self.issubspace(other)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.field == other.field
                and self._rows == other._rows)

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __repr__(self):
        return "Subspace(dim=%d in %s^%d)" % (self.dim, self.field, self.ambient_dim)

    def constraints(self) -> Matrix:
        """Matrix whose kernel is exactly this subspace (rows span the annihilator)."""
        piv = set(self.pivots)
        rows = []
        for c in range(self.ambient_dim):
            if c in piv:
                continue
            phi = {c: 1}
            for pv, row in zip(self.pivots, self._rows):
                x = row.get(c)
                if x:
                    phi[pv] = self.field.neg(x)
            rows.append(phi)
        return Matrix.from_columns(self.field, self.ambient_dim, rows).T

    def annihilator(self) -> "Subspace":
        return Subspace.span(self.field, self.ambient_dim, self.constraints().row_dicts())

    def section(self) -> Matrix:
        """Right inverse of the quotient-by-annihilator map: picks the pivot coordinates."""
        return Matrix(self.field, self.ambient_dim, self.dim,
                      [{pv: 1} for pv in self.pivots])

    def sum(self, other: "Subspace") -> "Subspace":
        _check_ambient(self, other)
        return Subspace.span(self.field, self.ambient_dim, self._rows + other._rows)


def _check_ambient(U, V):
    if U.ambient_dim != V.ambient_dim or U.field != V.field:
        raise DimensionError("ambient mismatch: %r vs %r" % (U, V))


def kernel(f: Matrix) -> Subspace:
    field = f.field
    ech = rref(field, f.row_dicts())
    piv = [pv for pv, _ in ech]
    pivset = set(piv)
    vecs = []
    for c in range(f.cols):
        if c in pivset:
            continue
        v = {c: 1}
        for pv, row in ech:
            x = row.get(c)
            if x:
                v[pv] = field.neg(x)
        vecs.append(v)
    return Subspace.span(field, f.cols, vecs)


def equalizer(f: Matrix, g: Matrix) -> Subspace:
    if f.shape != g.shape:
        raise DimensionError("equalizer of maps with shapes %s and %s" % (f.shape, g.shape))
    return kernel(f - g)


def intersect(U: Subspace, V: Subspace) -> Subspace:
    _check_ambient(U, V)
    if U.dim > V.dim:
        U, V = V, U
    if V.is_full():
        return U
    B = U.basis
    K = kernel(V.constraints() @ B)
    return Subspace.image(B @ K.basis)


def preimage(f: Matrix, V: Subspace) -> Subspace:
    if f.rows != V.ambient_dim:
        raise DimensionError("preimage: map has %d rows, subspace lives in dim %d"
                             % (f.rows, V.ambient_dim))
    if V.is_full():
        return Subspace.full(f.field, f.cols)
    return kernel(V.constraints() @ f)


def largest_invariant_subspace(seed: Subspace, ops: Sequence[Matrix]) -> Subspace:
    n = seed.ambient_dim
    for t in ops:
        if t.shape != (n, n):
            raise DimensionError("operator of shape %s is not an endomorphism of dim %d"
                                 % (t.shape, n))
    V = seed
    while True:
        W = V
        for t in ops:
            W = intersect(W, preimage(t, V))
        if W.dim == V.dim:
            return V
        V = W


def restrict(f: Matrix, source: Subspace, target: Subspace) -> Matrix:
    """Matrix of f: source -> target in the stored bases; raises if f(source) escapes."""
    if f.cols != source.ambient_dim or f.rows != target.ambient_dim:
        raise DimensionError("restrict: shape %s does not fit %r -> %r" % (f.shape, source, target))
    out = []
    for j, v in enumerate(source.vectors):
        w = f.apply(v)
        c = target.coords(w)
        if c is None:
            raise RestrictionError("image of basis vector %d leaves the target subspace" % j)
        out.append({i: x for i, x in enumerate(c) if x})
    return Matrix(f.field, target.dim, source.dim, out)


def descend(f: Matrix, source: Subspace, target: Subspace) -> Matrix:
    """Induced map on quotients.

    ``source`` and ``target`` are annihilators describing the quotients: the
    quotient map of X is the matrix whose rows are the annihilator basis.
    Raises if f does not carry the relations of the source into those of the
    target.
    """
    q_src = source.basis.T
    q_tgt = target.basis.T
    fbar = q_tgt @ f @ source.section()
    if fbar @ q_src != q_tgt @ f:
        raise RestrictionError("map does not descend to the quotients")
    return fbar
