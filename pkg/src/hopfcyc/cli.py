"""
Command-line front end.

    hopfcyc run JOB.json [--degree N] [--theory hh|hc|coch] [--flavor F] [--certify] [--oracle]
    hopfcyc lambda "d1_0 * t1_1" [--flavor n]
    hopfcyc expand JOB.json

Exit codes: 0 success, 2 validation failure, 3 certification failure, 4 format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field, replace

from .approximation import PseudoParaError, full_pipeline
from .hopf import (ConfigurationError, FormatError, check_w_transpositive, transposition_for,
                   validate_bialgebra, validate_symmetry)
from .homology import (EquivarianceError, HonestyError, apply_coefficients, b_complex,
                       cocyclic_cohomology, connes_total_complex, cyclic_homology,
                       honest_cyclic_degree, hochschild_homology, hopf_hochschild)
from .jobs import FORMAT_VERSION, JobSpec, dump_json, load_job
from .lambda_cat import (CompositionError, Flavor, LambdaRangeError, TruncationError,
                         normal_form, parse_word)
from .linalg import RestrictionError
from .oracles import OracleReport, dense_homology, limit_oracle
from .paracyclic import (CertificationError, TranspositivityError, build_T, certify_relations)

EXIT_OK, EXIT_VALIDATION, EXIT_CERTIFICATION, EXIT_FORMAT = 0, 2, 3, 4


class JobFailure(Exception):
    def __init__(self, code: int, lines: list):
        super().__init__("\n".join(lines))
        self.code = code
        self.lines = list(lines)


@dataclass
class Report:
    header: list = dc_field(default_factory=list)  # (key, value)
    columns: list = dc_field(default_factory=list)
    rows: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)
    status: str = "ok"

    def machine(self) -> dict:
        return {"format": FORMAT_VERSION, "header": dict(self.header), "columns": self.columns,
                "rows": self.rows, "notes": self.notes, "status": self.status}

    def text(self, machine: bool = False) -> str:
        out = ["format: %d" % FORMAT_VERSION]
        out += ["%s: %s" % (k, v) for k, v in self.header]
        out.append("status: %s" % self.status)
        if self.columns:
            out.append("---")
            widths = [max(len(str(c)), *(len(str(r[i])) for r in self.rows)) if self.rows
                      else len(str(c)) for i, c in enumerate(self.columns)]
            fmt = "  ".join("%%-%ds" % w for w in widths)
            out.append(fmt % tuple(self.columns))
            out += [fmt % tuple(r) for r in self.rows]
        if self.notes:
            out.append("---")
            out += self.notes
        if machine:
            out.append("--- machine")
            out.append(json.dumps(self.machine(), sort_keys=True))
        return "\n".join(line.rstrip() for line in out) + "\n"


def _header(job: JobSpec, theory: str | None = None) -> list:
    h = [("pipeline", job.pipeline), ("field", str(job.field)), ("datum", job.datum_hash())]
    if job.bialgebra is not None:
        h.append(("bialgebra", job.bialgebra.name or "unnamed"))
    if job.datum is not None:
        h.append(("kind", job.datum.kind.value))
        h.append(("carrier", job.datum.name or "unnamed"))
    h.append(("truncation", job.truncation))
    if theory:
        h.append(("theory", theory))
    return h


def _validate(job: JobSpec) -> list:
    rep = validate_bialgebra(job.bialgebra)
    lines = rep.lines()
    if not rep.ok:
        raise JobFailure(EXIT_VALIDATION, lines)
    if job.datum is not None:
        srep = validate_symmetry(job.bialgebra, job.datum, job.coefficient)
        lines += srep.lines()
        if not srep.ok:
            raise JobFailure(EXIT_VALIDATION, lines)
        w = transposition_for(job.bialgebra, job.datum, job.coefficient)
        trep = check_w_transpositive(job.datum, w, job.field)
        lines += trep.lines()
        if not trep.ok:
            raise JobFailure(EXIT_VALIDATION, lines)
    return lines


def _certify_or_fail(T, flavor, label):
    rep = certify_relations(T, flavor)
    if not rep.ok:
        raise JobFailure(EXIT_CERTIFICATION, ["%s: %s" % (label, s) for s in rep.lines()])
    return ["%s: %s" % (label, rep.lines()[0])]


def run_job(job: JobSpec, certify: bool = False, oracle: bool = False) -> Report:
    """Execute a parsed job; raises JobFailure for non-zero exits."""
    if job.pipeline == "lambda-calc":
        return lambda_report(job.expr, job.flavor)
    rep = Report()
    if job.pipeline == "validate":
        rep.header = _header(job)
        rep.notes = _validate(job)
        return rep
    _validate(job)
    B, D, M, N = job.bialgebra, job.datum, job.coefficient, job.truncation

    if job.pipeline == "build":
        T = build_T(D, transposition_for(B, D, M), N, job.field)
        rep.header = _header(job) + [("orientation", T.orientation),
                                     ("flavor", job.flavor.value)]
        rep.notes = _certify_or_fail(T, job.flavor, "T")
        rep.columns = ["degree", "dim T"]
        rep.rows = [[n, d] for n, d in enumerate(T.dims)]
        return rep

    if job.pipeline == "hopf-hochschild":
        table = hopf_hochschild(B, D, M, N)
        rep.header = _header(job, "HopfHH") + [("honest degrees", "0..%d" % (N - 1))]
        rep.columns = ["degree", "dim"]
        rep.rows = [[n, d] for n, d in table.rows()]
        return rep

    res = full_pipeline(B, D, M, N, certify=certify, flavor=job.flavor, validate=False)
    notes = res.pseudo.lines()
    if certify:
        notes += _certify_or_fail(res.T, job.flavor, "T")
        notes += _certify_or_fail(res.comonad.module.T, job.flavor, "T^B")
        notes += _certify_or_fail(res.Q.T, Flavor.LAMBDA, "Q")
    oracles = OracleReport()
    if oracle:
        limit_oracle(res.equivariant, oracles, min(N, 3))

    if job.pipeline == "approx":
        rep.header = _header(job) + [("orientation", res.T.orientation)]
        rep.columns = ["degree", "dim T", "dim T^B", "dim Q"]
        rep.rows = [[n, res.T.dims[n], res.comonad.dims[n], res.cyclic.dims[n]]
                    for n in range(N + 1)]
    else:
        C = apply_coefficients(res.Q)
        if certify:
            notes += _certify_or_fail(C, Flavor.LAMBDA, "coefficients")
        theory = job.effective_theory
        if theory == "hh":
            table = hochschild_homology(C)
            honest = N - 1
        elif theory == "hc":
            table = cyclic_homology(C)
            honest = honest_cyclic_degree(N)
        else:
            table = cocyclic_cohomology(C)
            honest = honest_cyclic_degree(N)
        if oracle:
            cyc = C if C.orientation == "cyclic" else C.transpose()
            cx = b_complex(cyc) if theory == "hh" else connes_total_complex(cyc)
            oracles.add("dense ranks reproduce %s" % table.theory,
                        dense_homology(cx.dims, cx.d, honest) == table.dims)
        rep.header = _header(job, table.theory) + [
            ("honest degrees", "0..%d" % honest if honest >= 0 else "none")]
        rep.columns = ["degree", "dim"]
        rep.rows = [[n, d] for n, d in table.rows()]
    rep.notes = notes + oracles.lines()
    if not oracles.ok:
        rep.status = "oracle mismatch"
        raise JobFailure(EXIT_CERTIFICATION, rep.text().splitlines())
    return rep


def lambda_report(expr: str, flavor: Flavor) -> Report:
    try:
        word = parse_word(expr, flavor)
        f = normal_form(word)
    except (ValueError, CompositionError, LambdaRangeError) as exc:
        raise JobFailure(EXIT_FORMAT, ["lambda: %s" % exc]) from None
    rep = Report(header=[("pipeline", "lambda-calc"), ("flavor", flavor.value),
                         ("input", str(word))])
    rep.columns = ["normal form", "source", "target"]
    rep.rows = [[str(f), "[%d]" % f.source, "[%d]" % f.target]]
    return rep


_FAILURE_CODES = (
    ((FormatError, ConfigurationError, TruncationError, json.JSONDecodeError), EXIT_FORMAT),
    ((TranspositivityError,), EXIT_VALIDATION),
    ((CertificationError, PseudoParaError, RestrictionError, EquivarianceError, HonestyError),
     EXIT_CERTIFICATION),
)


def _classify(exc: Exception) -> int | None:
    for types, code in _FAILURE_CODES:
        if isinstance(exc, types):
            return code
    return None


def execute(job: JobSpec, certify=False, oracle=False) -> tuple[int, str]:
    machine = job.output == "json"
    try:
        return EXIT_OK, run_job(job, certify, oracle).text(machine)
    except JobFailure as exc:
        return exc.code, "\n".join(exc.lines) + "\n"
    except Exception as exc:  # noqa: BLE001 - map library errors onto exit codes
        code = _classify(exc)
        if code is None:
            raise
        return code, "error (%s): %s\n" % (type(exc).__name__, exc)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfcyc",
                                description="Exact Hopf-cyclic homology from structure constants.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a JSON job file")
    r.add_argument("job")
    r.add_argument("--degree", type=int, help="override the truncation N")
    r.add_argument("--theory", choices=["hh", "hc", "coch"])
    r.add_argument("--flavor", choices=["plus", "n", "z", "lambda"])
    r.add_argument("--certify", action="store_true", help="run the full relation suites")
    r.add_argument("--oracle", action="store_true", help="run brute-force cross-checks")
    r.add_argument("--json", action="store_true", help="append the machine block")
    r.add_argument("-o", "--out", help="write the report to a file")
    lam = sub.add_parser("lambda", help="normal form of a word in the cyclic categories")
    lam.add_argument("expr")
    lam.add_argument("--flavor", default="n", choices=["plus", "n", "z", "lambda"])
    e = sub.add_parser("expand", help="print the job with every preset expanded")
    e.add_argument("job")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "lambda":
        try:
            code, text = EXIT_OK, lambda_report(args.expr, Flavor.parse(args.flavor)).text()
        except JobFailure as exc:
            code, text = exc.code, "\n".join(exc.lines) + "\n"
        sys.stdout.write(text)
        return code
    try:
        job = load_job(args.job)
        if args.command == "expand":
            sys.stdout.write(dump_json(job.to_json()))
            return EXIT_OK
        changes = {}
        if args.degree is not None:
            changes["truncation"] = args.degree
        if args.theory:
            changes["theory"] = args.theory
        if args.flavor:
            changes["flavor"] = Flavor.parse(args.flavor)
        if args.json:
            changes["output"] = "json"
        if changes:
            job = replace(job, **changes)
    except (FormatError, ConfigurationError) as exc:
        sys.stdout.write("format error: %s\n" % exc)
        return EXIT_FORMAT
    code, text = execute(job, args.certify, args.oracle)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
