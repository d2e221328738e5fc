import json
from pathlib import Path

import pytest

import hopfcyc
from hopfcyc.cli import main
from hopfcyc.hopf import Kind
from hopfcyc.jobs import bundled_names, dump_json, load_job, parse_job
from hopfcyc.lambda_cat import normal_form, parse_word

JOBS = Path(hopfcyc.__file__).parent / "data" / "jobs"
DATA = Path(hopfcyc.__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def table(text):
    """(degree, value columns) rows between the first and second '---'."""
    block = text.split("\n---\n")[1].splitlines()
    return [[int(x) for x in line.split()] for line in block[1:]]


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
    return p


def test_validate_bundled_group_algebra(capsys):
    code, out = run(capsys, "run", JOBS / "validate_kZ2.json")
    assert code == 0
    assert out.startswith("format: 1\n")
    assert "valid" in out and "status: ok" in out


def test_cyclic_homology_of_ground_field(capsys):
    code, out = run(capsys, "run", JOBS / "hc_ground.json", "--oracle")
    assert code == 0
    assert table(out) == [[0, 1], [1, 0], [2, 1], [3, 0]]
    assert "honest degrees: 0..3" in out
    assert "oracle dense ranks reproduce HC: pass" in out


def test_hochschild_of_dual_numbers(capsys):
    code, out = run(capsys, "run", JOBS / "hh_dual_numbers.json", "--oracle")
    assert code == 0 and table(out) == [[0, 2], [1, 1], [2, 1], [3, 1]]


def test_regular_group_coalgebra_job(capsys):
    code, out = run(capsys, "run", JOBS / "mc_kZ2.json", "--certify", "--oracle")
    assert code == 0 and table(out) == [[0, 1], [1, 0], [2, 1]]
    assert "FAIL" not in out


def test_corrupted_comultiplication_exits_2(capsys, tmp_path):
    B = json.loads((DATA / "kZ2.json").read_text())
    B["comult"][1] = [1, [[1, 1, 1], [1, 0, 1]]]  # g -> g (x) g + g (x) 1
    write(tmp_path, "bad.json", B)
    job = write(tmp_path, "job.json", {"format": 1, "pipeline": "validate", "field": "Q",
                                       "bialgebra": {"file": "bad.json"}})
    code, out = run(capsys, "run", job)
    assert code == 2
    assert "coassociativity fails at basis" in out


@pytest.mark.parametrize("text", ["{not json", json.dumps({"pipeline": "validate"}),
                                  json.dumps({"format": 1, "pipeline": "nope",
                                              "bialgebra": "kZ2"}),
                                  json.dumps({"format": 1, "pipeline": "validate",
                                              "bialgebra": "nonexistent"})])
def test_format_errors_exit_4(capsys, tmp_path, text):
    code, out = run(capsys, "run", write(tmp_path, "job.json", text))
    assert code == 4 and out


def test_theory_must_fit_orientation(capsys, tmp_path):
    obj = json.loads((JOBS / "hc_ground.json").read_text())
    obj["theory"] = "coch"
    code, _ = run(capsys, "run", write(tmp_path, "job.json", obj))
    assert code == 4


def test_certification_failure_exits_3(capsys, tmp_path):
    # the sign coefficient gives a para-cyclic module that is not cyclic
    job = write(tmp_path, "job.json", {
        "format": 1, "pipeline": "build", "field": "Q", "bialgebra": "kZ2",
        "datum": {"kind": "CA", "preset": "z2"}, "coefficient": "sign", "truncation": 2})
    assert run(capsys, "run", job)[0] == 0
    code, out = run(capsys, "run", job, "--flavor", "lambda")
    assert code == 3 and "fails" in out


def test_lambda_subcommand(capsys):
    def nf(text):
        return text.split("\n---\n")[1].splitlines()[1].split()

    code, out = run(capsys, "lambda", "s0_0 * d0_0")
    assert code == 0 and nf(out) == ["id[0]", "[0]", "[0]"]
    code, out = run(capsys, "lambda", "t1_2", "--flavor", "lambda")
    assert code == 0 and nf(out) == ["id[1]", "[1]", "[1]"]
    _, a = run(capsys, "lambda", "d1_0 * t1_1")
    _, b = run(capsys, "lambda", "t2^1 * d1_1")
    assert nf(a) == nf(b)
    assert " ".join(nf(a)[:-2]) == str(normal_form(parse_word("t2^1 * d1_1", "n")))


@pytest.mark.parametrize("expr", ["q1_0", "d1_0 * d1_0", "t1^-1"])
def test_lambda_errors_exit_4(capsys, expr):
    assert run(capsys, "lambda", expr)[0] == 4


def test_lambda_job_file(capsys):
    code, out = run(capsys, "run", JOBS / "lambda_example.json")
    assert code == 0 and "d1_0 * t1^1" in out


def test_reports_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (a, b):
        assert run(capsys, "run", JOBS / "approx_H4_MC.json", "--json", "-o", out)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    machine = json.loads(text.split("--- machine\n")[1])
    assert machine["format"] == 1 and machine["columns"] == ["degree", "dim T", "dim T^B", "dim Q"]
    assert [r[2] for r in machine["rows"]] == [4, 10, 29, 93]


@pytest.mark.parametrize("name", sorted(p.name for p in JOBS.glob("*.json")))
def test_emitted_specs_round_trip(capsys, tmp_path, name):
    job = load_job(JOBS / name)
    again = parse_job(json.loads(dump_json(job.to_json())))
    assert again == job
    assert again.canonical_text() == job.canonical_text()
    code, out = run(capsys, "expand", JOBS / name)
    assert code == 0 and parse_job(json.loads(out)) == job


@pytest.mark.parametrize("name", bundled_names())
def test_bundled_fixtures_validate_in_all_kinds(capsys, tmp_path, name):
    for kind in Kind:
        job = write(tmp_path, "job.json", {"format": 1, "pipeline": "validate", "field": "Q",
                                           "bialgebra": name,
                                           "datum": {"kind": kind.value, "preset": "regular"}})
        code, out = run(capsys, "run", job)
        assert code == 0, out


def test_degree_override_and_hopf_hochschild(capsys):
    code, out = run(capsys, "run", JOBS / "hopf_hochschild_kZ2.json", "--degree", "3")
    assert code == 0 and "truncation: 3" in out
    assert table(out) == [[0, 2], [1, 0], [2, 0]]
