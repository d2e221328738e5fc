"""
Job files: a JSON document describing a field, a bialgebra, a symmetry datum,
a coefficient datum and a pipeline.

Structure constants use triples: multiplication (and actions) as
``[i, j, [coefficients over the output basis]]``, comultiplication (and
coactions) as ``[i, [[j, k, coeff], ...]]``, linear maps as
``[i, [coefficients]]`` per basis vector.  Rationals are written as strings
"p/q" (integers may be bare numbers); prime-field elements as integers.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path

from . import fixtures as fx
from .hopf import Bialgebra, CoefficientDatum, FormatError, Kind, SymmetryDatum
from .lambda_cat import Flavor
from .linalg import FieldSpec, Matrix

FORMAT_VERSION = 1
PIPELINES = ("validate", "build", "approx", "homology", "hopf-hochschild", "lambda-calc")
THEORIES = ("hh", "hc", "coch")


# ---------------------------------------------------------------------------
# scalars and matrices


def parse_field(obj) -> FieldSpec:
    if isinstance(obj, str):
        low = obj.strip().lower()
        if low in ("q", "qq", "rationals", "rational"):
            return FieldSpec.Q()
        if low.startswith("gf(") and low.endswith(")"):
            return FieldSpec.GF(int(low[3:-1]))
        if low.startswith("f") and low[1:].isdigit():
            return FieldSpec.GF(int(low[1:]))
    if isinstance(obj, dict):
        kind = obj.get("kind")
        if kind == "rationals":
            return FieldSpec.Q()
        if kind == "prime_field" and isinstance(obj.get("p"), int):
            return FieldSpec.GF(obj["p"])
    raise FormatError("unrecognized field %r" % (obj,))


def field_to_json(F: FieldSpec):
    return "Q" if F.is_rational else {"kind": "prime_field", "p": F.p}


def parse_scalar(F: FieldSpec, x):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise FormatError("scalar %r must be an integer or a 'p/q' string" % (x,))
    if isinstance(x, str) and not F.is_rational:
        raise FormatError("prime-field scalars are integers, got %r" % x)
    try:
        return F(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError("bad scalar %r: %s" % (x, exc)) from None


def scalar_to_json(F: FieldSpec, x):
    if F.is_rational:
        return F.to_text(x) if not isinstance(x, int) else x
    return int(x)


def _check_index(i, bound, what):
    if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < bound:
        raise FormatError("%s index %r out of range 0..%d" % (what, i, bound - 1))


def _vector(F, values, d, what) -> dict:
    if not isinstance(values, list) or len(values) != d:
        raise FormatError("%s must list %d coefficients" % (what, d))
    return {k: v for k, v in ((k, parse_scalar(F, x)) for k, x in enumerate(values)) if v}


def parse_bilinear(F, obj, left: int, right: int, out: int, what: str) -> Matrix:
    """Triples [i, j, [coeffs]] -> matrix out x (left*right)."""
    if not isinstance(obj, list):
        raise FormatError("%s must be a list of triples" % what)
    cols = [dict() for _ in range(left * right)]
    for entry in obj:
        if not (isinstance(entry, list) and len(entry) == 3):
            raise FormatError("%s entry %r is not a triple" % (what, entry))
        i, j, coeffs = entry
        _check_index(i, left, what)
        _check_index(j, right, what)
        cols[i * right + j] = _vector(F, coeffs, out, what)
    return Matrix(F, out, left * right, cols)


def bilinear_to_json(F, m: Matrix, right: int) -> list:
    out = []
    for c, col in enumerate(m.columns):
        if col:
            vals = [scalar_to_json(F, col.get(r, 0)) for r in range(m.rows)]
            out.append([c // right, c % right, vals])
    return out


def parse_cobilinear(F, obj, src: int, left: int, right: int, what: str) -> Matrix:
    """[i, [[j, k, coeff], ...]] -> matrix (left*right) x src."""
    if not isinstance(obj, list):
        raise FormatError("%s must be a list" % what)
    cols = [dict() for _ in range(src)]
    for entry in obj:
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[1], list)):
            raise FormatError("%s entry %r is not [i, [[j, k, c], ...]]" % (what, entry))
        i, terms = entry
        _check_index(i, src, what)
        col = {}
        for t in terms:
            if not (isinstance(t, list) and len(t) == 3):
                raise FormatError("%s term %r is not [j, k, coeff]" % (what, t))
            j, k, c = t
            _check_index(j, left, what)
            _check_index(k, right, what)
            v = F.norm(col.get(j * right + k, 0) + parse_scalar(F, c))
            if v:
                col[j * right + k] = v
            else:
                col.pop(j * right + k, None)
        cols[i] = col
    return Matrix(F, left * right, src, cols)


def cobilinear_to_json(F, m: Matrix, right: int) -> list:
    out = []
    for i, col in enumerate(m.columns):
        if col:
            out.append([i, [[r // right, r % right, scalar_to_json(F, v)]
                            for r, v in sorted(col.items())]])
    return out


def parse_linear(F, obj, d: int, what: str) -> Matrix:
    if not isinstance(obj, list):
        raise FormatError("%s must be a list" % what)
    cols = [dict() for _ in range(d)]
    for entry in obj:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise FormatError("%s entry %r is not [i, [coeffs]]" % (what, entry))
        _check_index(entry[0], d, what)
        cols[entry[0]] = _vector(F, entry[1], d, what)
    return Matrix(F, d, d, cols)


def linear_to_json(F, m: Matrix) -> list:
    return [[i, [scalar_to_json(F, col.get(r, 0)) for r in range(m.rows)]]
            for i, col in enumerate(m.columns) if col]


def _dim(obj, what) -> int:
    d = obj.get("dim") if isinstance(obj, dict) else None
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise FormatError("%s needs a positive integer dim" % what)
    return d


def _require(obj, key, what):
    if key not in obj:
        raise FormatError("%s is missing %r" % (what, key))
    return obj[key]


# ---------------------------------------------------------------------------
# bialgebras


def parse_bialgebra(F: FieldSpec, obj, base: Path | None = None) -> Bialgebra:
    if isinstance(obj, str):
        return load_bundled_bialgebra(F, obj, base)
    if not isinstance(obj, dict):
        raise FormatError("bialgebra must be a name or an object")
    if "file" in obj:
        return load_bundled_bialgebra(F, obj["file"], base)
    d = _dim(obj, "bialgebra")
    S = obj.get("antipode")
    return Bialgebra(
        F, d,
        parse_bilinear(F, _require(obj, "mult", "bialgebra"), d, d, d, "mult"),
        Matrix(F, d, 1, [_vector(F, _require(obj, "unit", "bialgebra"), d, "unit")]),
        parse_cobilinear(F, _require(obj, "comult", "bialgebra"), d, d, d, "comult"),
        _covector(F, _require(obj, "counit", "bialgebra"), d, "counit"),
        parse_linear(F, S, d, "antipode") if S is not None else None,
        str(obj.get("name", "")))


def _covector(F, values, d, what) -> Matrix:
    v = _vector(F, values, d, what)
    return Matrix(F, 1, d, [{0: v[j]} if j in v else {} for j in range(d)])


def bialgebra_to_json(B: Bialgebra) -> dict:
    F, d = B.field, B.dim
    out = {
        "name": B.name,
        "dim": d,
        "mult": bilinear_to_json(F, B.mult, d),
        "unit": [scalar_to_json(F, B.unit[i, 0]) for i in range(d)],
        "comult": cobilinear_to_json(F, B.comult, d),
        "counit": [scalar_to_json(F, B.counit[0, i]) for i in range(d)],
    }
    if B.antipode is not None:
        out["antipode"] = linear_to_json(F, B.antipode)
    return out


def bundled_names() -> list[str]:
    root = resources.files("hopfcyc") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled_bialgebra(F: FieldSpec, name: str, base: Path | None = None) -> Bialgebra:
    """A bundled bialgebra by name (k, kZ2, kZ3, H4) or a JSON file path."""
    candidates = []
    if base is not None:
        candidates.append(Path(base) / name)
    candidates.append(Path(name))
    for c in candidates:
        if c.suffix == ".json" and c.is_file():
            return parse_bialgebra(F, _read_json(c), c.parent)
    res = resources.files("hopfcyc") / "data" / (name + ".json")
    if res.is_file():
        return parse_bialgebra(F, json.loads(res.read_text(encoding="utf-8")))
    raise FormatError("unknown bialgebra %r (bundled: %s)" % (name, ", ".join(bundled_names())))


def _read_json(path: Path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as exc:
        raise FormatError("cannot read %s: %s" % (path, exc)) from None
    except json.JSONDecodeError as exc:
        raise FormatError("%s is not valid JSON: %s" % (path, exc)) from None


# ---------------------------------------------------------------------------
# data


CARRIERS = {"dual_numbers": fx.dual_numbers, "M2": lambda F: fx.matrix_algebra(F, 2)}


def _carrier(F, obj, base):
    if isinstance(obj, str) and obj in CARRIERS:
        return CARRIERS[obj](F)
    return parse_bialgebra(F, obj, base)


def parse_datum(F, B: Bialgebra, obj, base=None) -> SymmetryDatum:
    if not isinstance(obj, dict):
        raise FormatError("datum must be an object")
    try:
        kind = Kind(_require(obj, "kind", "datum"))
    except ValueError:
        raise FormatError("datum kind must be one of MC, CA, MA, CC") from None
    preset = obj.get("preset")
    if preset == "regular":
        return fx.regular_datum(B, kind)
    if preset == "trivial":
        return fx.trivial_datum(B, kind, _carrier(F, _require(obj, "carrier", "datum"), base))
    if preset == "z2":
        if B.dim != 2:
            raise FormatError("preset z2 needs B = k[Z/2]")
        return fx.z2_data(F)[kind]
    if preset is not None:
        raise FormatError("unknown datum preset %r" % preset)
    n, d = _dim(obj, "datum"), B.dim
    kw = {"name": str(obj.get("name", ""))}
    if kind.is_algebra:
        kw["mult"] = parse_bilinear(F, _require(obj, "mult", "datum"), n, n, n, "datum mult")
        kw["unit"] = Matrix(F, n, 1, [_vector(F, _require(obj, "unit", "datum"), n, "unit")])
    else:
        kw["comult"] = parse_cobilinear(F, _require(obj, "comult", "datum"), n, n, n,
                                        "datum comult")
        kw["counit"] = _covector(F, _require(obj, "counit", "datum"), n, "datum counit")
    if kind.module_side:
        kw["action"] = parse_bilinear(F, _require(obj, "action", "datum"), d, n, n, "action")
    else:
        kw["coaction"] = parse_cobilinear(F, _require(obj, "coaction", "datum"), n, d, n,
                                          "coaction")
    return SymmetryDatum(kind, n, **kw)


def datum_to_json(D: SymmetryDatum, B: Bialgebra) -> dict:
    F, n = B.field, D.dim
    out = {"kind": D.kind.value, "name": D.name, "dim": n}
    if D.kind.is_algebra:
        out["mult"] = bilinear_to_json(F, D.mult, n)
        out["unit"] = [scalar_to_json(F, D.unit[i, 0]) for i in range(n)]
    else:
        out["comult"] = cobilinear_to_json(F, D.comult, n)
        out["counit"] = [scalar_to_json(F, D.counit[0, i]) for i in range(n)]
    if D.action is not None:
        out["action"] = bilinear_to_json(F, D.action, n)
    if D.coaction is not None:
        out["coaction"] = cobilinear_to_json(F, D.coaction, n)
    return out


def parse_coefficient(F, B: Bialgebra, obj) -> CoefficientDatum:
    if obj is None or obj == "trivial":
        return CoefficientDatum.trivial(B)
    if obj == "sign":
        if B.dim != 2:
            raise FormatError("coefficient 'sign' needs B = k[Z/2]")
        return fx.sign_coefficient(B)
    if not isinstance(obj, dict):
        raise FormatError("coefficient must be 'trivial', 'sign' or an object")
    m, d = _dim(obj, "coefficient"), B.dim
    act = obj.get("action")
    co = obj.get("coaction")
    return CoefficientDatum(
        m,
        parse_bilinear(F, act, d, m, m, "coefficient action") if act is not None else None,
        parse_cobilinear(F, co, m, d, m, "coefficient coaction") if co is not None else None)


def coefficient_to_json(M: CoefficientDatum, B: Bialgebra) -> dict:
    F = B.field
    out = {"dim": M.dim}
    if M.action is not None:
        out["action"] = bilinear_to_json(F, M.action, M.dim)
    if M.coaction is not None:
        out["coaction"] = cobilinear_to_json(F, M.coaction, M.dim)
    return out


# ---------------------------------------------------------------------------
# job spec


@dataclass
class JobSpec:
    pipeline: str
    field: FieldSpec = dc_field(default_factory=FieldSpec.Q)
    bialgebra: Bialgebra | None = None
    datum: SymmetryDatum | None = None
    coefficient: CoefficientDatum | None = None
    truncation: int = 3
    theory: str | None = None
    flavor: Flavor = Flavor.N
    expr: str | None = None
    output: str = "text"

    def __post_init__(self):
        if self.pipeline not in PIPELINES:
            raise FormatError("pipeline must be one of %s" % ", ".join(PIPELINES))
        if not isinstance(self.truncation, int) or self.truncation < 0:
            raise FormatError("truncation must be a nonnegative integer")
        if self.output not in ("text", "json"):
            raise FormatError("output must be text or json")
        if self.pipeline == "lambda-calc":
            if not self.expr:
                raise FormatError("lambda-calc needs an expression")
            return
        if self.bialgebra is None:
            raise FormatError("pipeline %s needs a bialgebra" % self.pipeline)
        if self.pipeline != "validate" or self.datum is not None:
            if self.datum is None:
                raise FormatError("pipeline %s needs a datum" % self.pipeline)
            if self.coefficient is None:
                self.coefficient = CoefficientDatum.trivial(self.bialgebra)
        if self.theory is not None:
            if self.theory not in THEORIES:
                raise FormatError("theory must be one of hh, hc, coch")
            if self.datum is not None and self.pipeline == "homology":
                want = "hc" if self.orientation == "cyclic" else "coch"
                if self.theory not in ("hh", want):
                    raise FormatError("theory %s does not fit a %s family (use hh or %s)"
                                      % (self.theory, self.orientation, want))
        if self.pipeline == "hopf-hochschild" and self.datum.kind is not Kind.MA:
            raise FormatError("hopf-hochschild needs a kind MA datum")

    @property
    def orientation(self) -> str:
        return "cyclic" if self.datum.kind.is_algebra else "cocyclic"

    @property
    def effective_theory(self) -> str:
        if self.theory:
            return self.theory
        if self.pipeline == "hopf-hochschild":
            return "hh"
        return "hc" if self.orientation == "cyclic" else "coch"

    def to_json(self) -> dict:
        out = {"format": FORMAT_VERSION, "pipeline": self.pipeline,
               "field": field_to_json(self.field), "truncation": self.truncation,
               "flavor": self.flavor.value, "output": self.output}
        if self.expr is not None:
            out["expr"] = self.expr
        if self.theory is not None:
            out["theory"] = self.theory
        if self.bialgebra is not None:
            out["bialgebra"] = bialgebra_to_json(self.bialgebra)
        if self.datum is not None:
            out["datum"] = datum_to_json(self.datum, self.bialgebra)
        if self.coefficient is not None:
            out["coefficient"] = coefficient_to_json(self.coefficient, self.bialgebra)
        return out

    def canonical_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def datum_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()[:16]


def parse_job(obj, base: Path | None = None) -> JobSpec:
    if not isinstance(obj, dict):
        raise FormatError("job must be a JSON object")
    if obj.get("format") != FORMAT_VERSION:
        raise FormatError("job needs \"format\": %d" % FORMAT_VERSION)
    F = parse_field(obj.get("field", "Q"))
    pipeline = obj.get("pipeline")
    B = D = M = None
    if "bialgebra" in obj:
        B = parse_bialgebra(F, obj["bialgebra"], base)
        if "datum" in obj:
            D = parse_datum(F, B, obj["datum"], base)
            M = parse_coefficient(F, B, obj.get("coefficient"))
    try:
        flavor = Flavor.parse(obj.get("flavor", "n"))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return JobSpec(pipeline, F, B, D, M, obj.get("truncation", 3), obj.get("theory"), flavor,
                   obj.get("expr"), obj.get("output", "text"))


def load_job(path) -> JobSpec:
    path = Path(path)
    return parse_job(_read_json(path), path.parent)


def dump_json(obj) -> str:
    """JSON with one structure-constant entry per line; stable key order."""
    def one(x):
        return json.dumps(x, separators=(", ", ": "), sort_keys=True)

    if not isinstance(obj, dict):
        return one(obj) + "\n"
    parts = []
    for key in sorted(obj):
        val = obj[key]
        if isinstance(val, list) and val and isinstance(val[0], list):
            body = ",\n".join("    " + one(e) for e in val)
            parts.append('  %s: [\n%s\n  ]' % (json.dumps(key), body))
        elif isinstance(val, dict) and any(isinstance(v, list) for v in val.values()):
            inner = dump_json(val).rstrip("\n").replace("\n", "\n  ")
            parts.append("  %s: %s" % (json.dumps(key), inner))
        else:
            parts.append("  %s: %s" % (json.dumps(key), one(val)))
    return "{\n" + ",\n".join(parts) + "\n}\n"
