"""Front-end behavior: exit codes, report shapes, determinism, round-trips."""

import json

import pytest

from supermod.cli import main
from supermod.dmodules import parse_token, spec_from_json
from supermod.scalars import scalar

LAURENT = '{"family":"laurent","alpha":"a"}'
OMEGA = '{"family":"omega","lambda":"2"}'


def run(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ----------------------------------------------------------------------
# the documented examples

def test_verify_algebra_passes(capsys):
    code, out, _ = run(capsys, "verify-algebra", "--sector", "0", "--window", "3")
    data = json.loads(out)
    assert code == 0
    assert data["schema"] == "1" and data["kind"] == "jacobi"
    assert data["passed"] is True and data["violationCount"] == 0


def test_act_emits_bare_vector_map(capsys):
    code, out, _ = run(capsys, "act", "--module", LAURENT, "--b", "b",
                       "--generator", "L[1]", "--vector", "t^0")
    assert code == 0
    assert out == '{\n  "t^1": "-(a + b)"\n}\n'


def test_probe_reports_the_omega_gap_with_exit_one(capsys):
    code, out, _ = run(capsys, "probe", "--module", OMEGA, "--b", "1/2",
                       "--seed", "D^0", "--window", "2,4,4")
    data = json.loads(out)
    assert code == 1
    assert data["rank"] == 9 and data["ambient"] == 10
    assert data["missing"] == ["D^0~"]


# ----------------------------------------------------------------------
# exit statuses

def test_probe_full_rank_exits_zero(capsys):
    code, out, _ = run(capsys, "probe", "--module", LAURENT, "--b", "b",
                       "--seed", "t^0", "--window", "2,3,4",
                       "--specialize", "a=1/3,b=1/3")
    assert code == 0
    assert json.loads(out)["full"] is True


def test_unknown_parameter_exits_two(capsys):
    code, out, err = run(capsys, "probe", "--module", LAURENT, "--b", "b",
                         "--seed", "t^0", "--window", "2,3,4",
                         "--specialize", "zz=1")
    assert code == 2 and out == ""
    assert "zz" in err


def test_malformed_spec_exits_two(capsys):
    code, out, err = run(capsys, "act", "--module", '{"family":"nope"}',
                         "--b", "b", "--generator", "L[0]", "--vector", "t^0")
    assert code == 2 and out == "" and "error:" in err


def test_singular_lemma_specialization_exits_two(capsys):
    code, _, err = run(capsys, "check-lemma", "--which", "T", "--module",
                       LAURENT, "--b", "1/2", "--k", "1", "--d", "1",
                       "--vector", "t^0")
    assert code == 2 and "degenerates" in err


def test_bad_window_shapes_exit_two(capsys):
    code, _, err = run(capsys, "probe", "--module", LAURENT, "--b", "b",
                       "--seed", "t^0", "--window", "2,4")
    assert code == 2 and "--window" in err
    code, _, err = run(capsys, "probe", "--module", LAURENT, "--b", "b",
                       "--seed", "t^0", "--window", "2,0,4")
    assert code == 2 and ">= 1" in err


def test_missing_subcommand_and_help(capsys):
    assert main([]) == 2
    capsys.readouterr()
    assert main(["--help"]) == 0
    capsys.readouterr()


def test_verification_failure_still_emits_report(capsys):
    code, out, _ = run(capsys, "check-submodule", "--module", LAURENT,
                       "--b", "b", "--vector", "t^0", "--window", "2,3")
    assert code == 1
    data = json.loads(out)
    assert data["passed"] is False and data["violations"]


# ----------------------------------------------------------------------
# the remaining subcommands

def test_verify_morphism_symbolic_b(capsys):
    code, out, _ = run(capsys, "verify-morphism", "--map", "sigma-b",
                       "--window", "2")
    assert code == 0 and json.loads(out)["kind"] == "hom-sigma-b"


def test_act_infers_the_sector_from_a_half_integer_index(capsys):
    code, out, _ = run(capsys, "act", "--module", LAURENT, "--b", "b",
                       "--generator", "G+[3/2]", "--vector", "t^0")
    assert code == 0
    assert json.loads(out) == {"t^1~": "-(2*a + 4*b)"}


def test_action_table_covers_every_generator(capsys):
    code, out, _ = run(capsys, "action-table", "--module", OMEGA, "--b", "1/3",
                       "--window", "1")
    data = json.loads(out)
    assert code == 0 and data["kind"] == "action-table"
    assert set(data["entries"]) == {"C", "L[-1]", "L[0]", "L[1]", "H[-1]",
                                    "H[0]", "H[1]", "G+[-1]", "G+[0]", "G+[1]",
                                    "G-[-1]", "G-[0]", "G-[1]"}
    assert all(v == {} for v in data["entries"]["C"].values())


def test_check_module_passes(capsys):
    code, out, _ = run(capsys, "check-module", "--module", LAURENT, "--b", "b",
                       "--window", "2,2")
    assert code == 0 and json.loads(out)["kind"] == "module-axiom"


def test_check_lemma_t_and_q(capsys):
    code, out, _ = run(capsys, "check-lemma", "--which", "T", "--module",
                       LAURENT, "--b", "b", "--k", "2", "--d", "-1",
                       "--vector", "t^1")
    assert code == 0 and json.loads(out)["kind"] == "t-operator"
    code, out, _ = run(capsys, "check-lemma", "--which", "Q", "--module",
                       LAURENT, "--b", "0", "--m", "-1", "--d", "2",
                       "--vector", "t^2~")
    assert code == 0 and json.loads(out)["kind"] == "q-operator"


def test_check_iso_witnesses(capsys):
    for extra in (["--witness", "phi", "--alpha", "1/3"],
                  ["--witness", "psi"],
                  ["--witness", "identity", "--module", OMEGA, "--b", "b"]):
        code, out, _ = run(capsys, "check-iso", "--window", "2,4", *extra)
        assert code == 0, out
        assert json.loads(out)["kind"] == "iso-witness"


def test_check_submodule_confirms_invariance(capsys):
    vectors = [v for n in range(-2, 3) for v in ([f"t^{n}"] if n == 0 else
                                                 [f"t^{n}", f"t^{n}~"])]
    args = ["check-submodule", "--module", '{"family":"laurent","alpha":"0"}',
            "--b", "1/2", "--window", "1,2"]
    for vec in vectors:
        args += ["--vector", vec]
    code, out, _ = run(capsys, *args)
    assert code == 0, out


# ----------------------------------------------------------------------
# output plumbing

def test_reports_are_byte_deterministic(capsys, monkeypatch):
    monkeypatch.delenv("SUPERMOD_SEED", raising=False)
    args = ("probe", "--module", LAURENT, "--b", "b", "--seed", "t^0",
            "--window", "2,3,4")
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second and first[0] == 0


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify-algebra", "--sector", "1/2",
                       "--window", "2", "--format", "text")
    assert code == 0
    lines = out.splitlines()
    assert "passed: true" in lines and "violations: []" in lines


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify-algebra", "--window", "2",
                       "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["passed"] is True


def test_printed_vectors_reparse_to_equal_values(capsys):
    spec = spec_from_json(LAURENT)
    _, out, _ = run(capsys, "act", "--module", LAURENT, "--b", "b",
                    "--generator", "G+[-2]", "--vector", "2*t^1 + t^0~")
    data = json.loads(out)
    assert data
    for token_text, coeff_text in data.items():
        tok = parse_token(spec, token_text)
        assert tok.family == "laurent"
        assert scalar(coeff_text).render() == coeff_text
