"""
The cyclic categories Lambda_+, Lambda_N, Lambda_Z and Lambda as a rewriting
system.

A word is a list of letters read as a composite, leftmost letter applied
last.  Letters are ``('d', n, j)`` for the coface [n] -> [n+1],
``('s', n, i)`` for the codegeneracy [n+1] -> [n] and ``('t', n, l)`` for the
l-th power of the cyclic operator on [n].

Normal form: faces (indices strictly decreasing, left to right), then
degeneracies (strictly increasing), then a single twist next to the source.
"""

from __future__ import annotations

import enum
import random
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

Letter = tuple  # (kind, degree, index)


class CompositionError(ValueError):
    pass


class LambdaRangeError(ValueError):
    pass


class TruncationError(ValueError):
    pass


class Flavor(enum.Enum):
    PLUS = "plus"
    N = "n"
    Z = "z"
    LAMBDA = "lambda"

    @classmethod
    def parse(cls, text: str) -> "Flavor":
        aliases = {"plus": cls.PLUS, "lambdaplus": cls.PLUS, "n": cls.N, "lambdan": cls.N,
                   "z": cls.Z, "lambdaz": cls.Z, "lambda": cls.LAMBDA}
        try:
            return aliases[text.strip().lower().replace("_", "")]
        except KeyError:
            raise ValueError("unknown flavor %r" % text) from None


def source(letter: Letter) -> int:
    kind, n, _ = letter
    return n + 1 if kind == "s" else n


def target(letter: Letter) -> int:
    kind, n, _ = letter
    return n + 1 if kind == "d" else n


def letter_text(letter: Letter) -> str:
    kind, n, i = letter
    if kind == "t":
        return "t%d^%d" % (n, i)
    return "%s%d_%d" % (kind, n, i)


def check_letter(letter: Letter, flavor: Flavor) -> None:
    kind, n, i = letter
    if n < 0:
        raise LambdaRangeError("negative degree in %s" % letter_text(letter))
    if kind == "d":
        top = n if flavor is Flavor.PLUS else n + 1
        if not 0 <= i <= top:
            raise LambdaRangeError("face index %d out of range 0..%d" % (i, top))
    elif kind == "s":
        if not 0 <= i <= n:
            raise LambdaRangeError("degeneracy index %d out of range 0..%d" % (i, n))
    elif kind == "t":
        if flavor is Flavor.PLUS and i != 0:
            raise LambdaRangeError("Lambda_+ has no cyclic operators")
        if flavor is Flavor.N and i < 0:
            raise LambdaRangeError("negative twist t%d^%d not allowed in Lambda_N" % (n, i))
    else:
        raise ValueError("unknown letter kind %r" % kind)


@dataclass(frozen=True)
class GeneratorWord:
    flavor: Flavor
    source: int
    letters: tuple

    @property
    def target(self) -> int:
        return target(self.letters[0]) if self.letters else self.source

    def __str__(self):
        if not self.letters:
            return "id[%d]" % self.source
        return " * ".join(letter_text(x) for x in self.letters)


def make_word(letters: Sequence[Letter], flavor: Flavor, src: int | None = None) -> GeneratorWord:
    letters = tuple(tuple(x) for x in letters)
    for x in letters:
        check_letter(x, flavor)
    for outer, inner in zip(letters, letters[1:]):
        if source(outer) != target(inner):
            raise CompositionError("%s cannot follow %s"
                                   % (letter_text(outer), letter_text(inner)))
    if letters:
        s = source(letters[-1])
        if src is not None and src != s:
            raise CompositionError("word starts at [%d], not [%d]" % (s, src))
        src = s
    if src is None:
        raise ValueError("identity word needs a source degree")
    return GeneratorWord(flavor, src, letters)


_TOKEN = re.compile(r"^(?:(d|s|t)(\d+)[_^](-?\d+)|id\[(\d+)\])$")


def parse_word(text: str, flavor: Flavor | str) -> GeneratorWord:
    """Parse ``d1_0 * t1_1``-style text; ``t<n>^<l>`` and ``id[n]`` are accepted too."""
    if isinstance(flavor, str):
        flavor = Flavor.parse(flavor)
    letters = []
    ident = None
    for tok in text.split("*"):
        tok = tok.strip()
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError("cannot parse letter %r" % tok)
        if m.group(4) is not None:
            ident = int(m.group(4))
            continue
        letters.append((m.group(1), int(m.group(2)), int(m.group(3))))
    if ident is not None and letters:
        # id[n] composed with letters is just the letters, provided degrees agree
        word = make_word(letters, flavor)
        if ident not in (word.source, word.target):
            raise CompositionError("id[%d] does not compose with %s" % (ident, word))
        return word
    return make_word(letters, flavor, ident)


# ---------------------------------------------------------------------------
# rewriting


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def rewrite_pair(outer: Letter, inner: Letter):
    """One rewrite step on an adjacent pair, or None when the pair is in order.

    Returns the replacement list (possibly empty).
    """
    ko, no, io = outer
    ki, ni, ii = inner
    if ko == "t":
        if ki == "t":
            return [("t", no, io + ii)]
        if ki == "d":
            # t_{n+1}^a d_q = d_j t_n^i with i + j = (n+1)p + q and a = i + p
            n, q, a = ni, ii, io
            p = _ceil_div(a - q, n + 2)
            return [("d", n, (n + 2) * p + q - a), ("t", n, a - p)]
        if ki == "s":
            # t_n^i s_j = s_q t_{n+1}^{i+p} with j - i = -(n+1)p + q
            n, i, j = ni, io, ii
            q = (j - i) % (n + 1)
            p = (q - (j - i)) // (n + 1)
            return [("s", n, q), ("t", n + 1, i + p)]
    if ko == "s" and ki == "d":
        # s^n_j d^n_i : [n] -> [n]
        n, j, i = no, io, ii
        if i == j or i == j + 1:
            return []
        if i < j:
            return [("d", n - 1, i), ("s", n - 1, j - 1)]
        return [("d", n - 1, i - 1), ("s", n - 1, j)]
    if ko == "d" and ki == "d" and io <= ii:
        return [("d", no, ii + 1), ("d", ni, io)]
    if ko == "s" and ki == "s" and ii <= io:
        return [("s", no, ii), ("s", ni, io + 1)]
    return None


def _redexes(letters: list) -> list[int]:
    out = []
    for k, x in enumerate(letters):
        if x[0] == "t" and x[2] == 0:
            out.append(-k - 1)  # encodes "drop identity at k"
    for k in range(len(letters) - 1):
        if rewrite_pair(letters[k], letters[k + 1]) is not None:
            out.append(k)
    return out


def _step(letters: list, k: int) -> list:
    if k < 0:
        k = -k - 1
        return letters[:k] + letters[k + 1:]
    return letters[:k] + rewrite_pair(letters[k], letters[k + 1]) + letters[k + 2:]


Strategy = Callable[[list], int]


def leftmost(redexes: list) -> int:
    return min(redexes, key=lambda k: k if k >= 0 else -k - 1)


def rightmost(redexes: list) -> int:
    return max(redexes, key=lambda k: k if k >= 0 else -k - 1)


def random_strategy(seed: int) -> Strategy:
    rng = random.Random(seed)
    return lambda redexes: rng.choice(redexes)


def _reduce_twists(letters: list, flavor: Flavor) -> list:
    if flavor is not Flavor.LAMBDA:
        return letters
    out = []
    for x in letters:
        if x[0] == "t":
            x = ("t", x[1], x[2] % (x[1] + 1))
        out.append(x)
    return out


def rewrite(word: GeneratorWord, strategy: Strategy = leftmost, reduce_each_step=False,
            max_steps: int = 100000) -> list:
    """Rewrite to a word with no redex; returns the final letter list."""
    letters = list(word.letters)
    if reduce_each_step:
        letters = _reduce_twists(letters, word.flavor)
    for _ in range(max_steps):
        red = _redexes(letters)
        if not red:
            return letters
        letters = _step(letters, strategy(red))
        if reduce_each_step:
            letters = _reduce_twists(letters, word.flavor)
    raise RuntimeError("rewriting did not terminate within %d steps" % max_steps)


@dataclass(frozen=True)
class LambdaMorphism:
    flavor: Flavor
    source: int
    target: int
    faces: tuple  # indices, outermost first, strictly decreasing
    degens: tuple  # indices, outermost first, strictly increasing
    twist: int

    def __post_init__(self):
        if self.target != self.source - len(self.degens) + len(self.faces):
            raise ValueError("inconsistent degree bookkeeping")

    def letters(self) -> list:
        """Annotated generator letters, outermost first."""
        out = []
        n = self.source - len(self.degens)
        for k, i in enumerate(reversed(self.faces)):
            out.append(("d", n + k, i))
        out.reverse()
        m = self.source
        degs = []
        for j in reversed(self.degens):
            m -= 1
            degs.append(("s", m, j))
        out.extend(reversed(degs))
        if self.twist:
            out.append(("t", self.source, self.twist))
        return out

    def word(self) -> GeneratorWord:
        return GeneratorWord(self.flavor, self.source, tuple(self.letters()))

    def is_identity(self) -> bool:
        return not self.faces and not self.degens and self.twist == 0

    def __str__(self):
        return str(self.word())


def _from_letters(letters: list, flavor: Flavor, src: int) -> LambdaMorphism:
    faces, degens, twist = [], [], 0
    stage = 0
    for x in letters:
        kind = x[0]
        if kind == "d" and stage == 0:
            faces.append(x[2])
        elif kind == "s" and stage <= 1:
            stage = 1
            degens.append(x[2])
        elif kind == "t" and stage <= 2:
            stage = 3
            twist = x[2]
        else:
            raise AssertionError("irreducible word not in normal form: %r" % (letters,))
    if flavor is Flavor.LAMBDA:
        twist %= src + 1
    tgt = src - len(degens) + len(faces)
    return LambdaMorphism(flavor, src, tgt, tuple(faces), tuple(degens), twist)


def normal_form(word: GeneratorWord, strategy: Strategy = leftmost,
                reduce_each_step=False) -> LambdaMorphism:
    letters = rewrite(word, strategy, reduce_each_step)
    return _from_letters(letters, word.flavor, word.source)


def identity(n: int, flavor: Flavor = Flavor.N) -> LambdaMorphism:
    return LambdaMorphism(flavor, n, n, (), (), 0)


def generator(kind: str, n: int, i: int, flavor: Flavor = Flavor.N) -> LambdaMorphism:
    return normal_form(make_word([(kind, n, i)], flavor))


def compose(f: LambdaMorphism, g: LambdaMorphism) -> LambdaMorphism:
    """f after g."""
    if f.flavor != g.flavor:
        raise CompositionError("flavor mismatch")
    if f.source != g.target:
        raise CompositionError("cannot compose [%d]->[%d] after [%d]->[%d]"
                               % (f.source, f.target, g.source, g.target))
    word = GeneratorWord(f.flavor, g.source, tuple(f.letters()) + tuple(g.letters()))
    return normal_form(word)


def equal(f: LambdaMorphism, g: LambdaMorphism) -> bool:
    return f == g


# ---------------------------------------------------------------------------
# the defining relations, instantiated


@dataclass(frozen=True)
class RelationInstance:
    name: str
    degree: int
    lhs: tuple
    rhs: tuple
    src: int

    def words(self, flavor: Flavor):
        return (make_word(self.lhs, flavor, self.src), make_word(self.rhs, flavor, self.src))

    def max_degree(self) -> int:
        degs = [self.src]
        for x in self.lhs + self.rhs:
            degs.append(source(x))
            degs.append(target(x))
        return max(degs)

    def __str__(self):
        def show(ls):
            return " * ".join(letter_text(x) for x in ls) if ls else "id[%d]" % self.src
        return "%s@%d: %s = %s" % (self.name, self.degree, show(self.lhs), show(self.rhs))


def relation_instances(max_degree: int, flavor: Flavor = Flavor.N,
                       twist_bound: Callable[[int], int] = lambda n: 2 * (n + 1)
                       ) -> Iterator[RelationInstance]:
    """Every relation of the presentation touching only objects [0]..[max_degree]."""
    twists = flavor is not Flavor.PLUS
    top = (lambda n: n) if flavor is Flavor.PLUS else (lambda n: n + 1)

    def ok(rel):
        return rel.max_degree() <= max_degree

    for n in range(max_degree + 1):
        # faces commute: d^{n+1}_i d^n_j = d^{n+1}_{j+1} d^n_i for i <= j
        for j in range(top(n) + 1):
            for i in range(j + 1):
                if j + 1 > top(n + 1):
                    continue
                rel = RelationInstance("dd", n, (("d", n + 1, i), ("d", n, j)),
                                       (("d", n + 1, j + 1), ("d", n, i)), n)
                if ok(rel):
                    yield rel
        # s^{n-1}_j s^n_i = s^{n-1}_i s^n_{j+1} for i <= j
        if n >= 1:
            for j in range(n):
                for i in range(j + 1):
                    rel = RelationInstance("ss", n, (("s", n - 1, j), ("s", n, i)),
                                           (("s", n - 1, i), ("s", n, j + 1)), n + 1)
                    if ok(rel):
                        yield rel
        # s^n_i d^n_i = s^n_i d^n_{i+1} = id
        for i in range(n + 1):
            for k in (i, i + 1):
                if k > top(n):
                    continue
                rel = RelationInstance("sd", n, (("s", n, i), ("d", n, k)), (), n)
                if ok(rel):
                    yield rel
        # d^n_i s^n_j
        for i in range(top(n) + 1):
            for j in range(n + 1):
                if i <= j:
                    rhs = (("s", n + 1, j + 1), ("d", n + 1, i))
                else:
                    if i + 1 > top(n + 1):
                        continue
                    rhs = (("s", n + 1, j), ("d", n + 1, i + 1))
                rel = RelationInstance("ds", n, (("d", n, i), ("s", n, j)), rhs, n + 1)
                if ok(rel):
                    yield rel
        if not twists:
            continue
        bound = twist_bound(n)
        for s in range(bound + 1):
            for t in range(bound + 1):
                lhs = tuple(x for x in (("t", n, s), ("t", n, t)))
                yield RelationInstance("tt", n, lhs, (("t", n, s + t),), n)
        # d^n_j t_n^i = t_{n+1}^{i+p} d^n_q, (i+j) = (n+1)p + q
        for j in range(n + 2):
            for i in range(bound + 1):
                p, q = divmod(i + j, n + 1)
                rel = RelationInstance("dt", n, (("d", n, j), ("t", n, i)),
                                       (("t", n + 1, i + p), ("d", n, q)), n)
                if ok(rel):
                    yield rel
        # t_n^i s^n_j = s^n_q t_{n+1}^{i+p}, (j - i) = (n+1)(-p) + q
        for j in range(n + 1):
            for i in range(bound + 1):
                q = (j - i) % (n + 1)
                p = (q - (j - i)) // (n + 1)
                rel = RelationInstance("ts", n, (("t", n, i), ("s", n, j)),
                                       (("s", n, q), ("t", n + 1, i + p)), n + 1)
                if ok(rel):
                    yield rel
        if flavor is Flavor.LAMBDA:
            yield RelationInstance("cyclic", n, (("t", n, n + 1),), (), n)


# ---------------------------------------------------------------------------
# evaluation into matrix-valued (para-)(co)cyclic modules


def _letter_degrees(letters) -> int:
    return max(max(source(x), target(x)) for x in letters)


def evaluate_word(word: GeneratorWord, T):
    """Matrix of a word under T; covariant for cocyclic T, contravariant for cyclic T."""
    letters = word.letters
    if not letters:
        if word.source > T.N:
            raise TruncationError("degree %d beyond truncation %d" % (word.source, T.N))
        return T.identity(word.source)
    if _letter_degrees(letters) > T.N:
        raise TruncationError("word %s needs degrees beyond truncation %d" % (word, T.N))
    mats = [T.generator(x) for x in letters]
    if T.orientation == "cyclic":
        mats.reverse()
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def evaluate(f: LambdaMorphism, T):
    return evaluate_word(f.word(), T)
