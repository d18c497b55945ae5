import json
import os

import pytest

from cyclelab.cli import main, create_parser


def run(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_lyap(capsys, system_file):
    status, out, _ = run(capsys, "lyap", system_file("deg4.sys"), "--subst", "c=0", "--json")
    assert status == 0
    report = json.loads(out)
    assert report["l0"] == "0"
    assert report["residual_ok"]
    first = report["quantities"][1]
    assert first["k"] == 1
    assert first["content"] == "1/8"
    assert first["primitive"] == "-a*b"

    status, out, _ = run(capsys, "lyap", system_file("deg4.sys"), "--step", "0:c=0", "--step", "1:a=0",
                         "--max-order", "2")
    assert status == 0
    assert "L(2) = 0" in out


def test_lyap_rejected_step(capsys, system_file):
    status, _, err = run(capsys, "lyap", system_file("deg4.sys"), "--step", "0:a=0")
    assert status == 2
    assert "SubstitutionDoesNotVanish" in err


def test_mel(capsys, system_file):
    status, out, _ = run(capsys, "mel", system_file("deg4.sys"), "--json")
    assert status == 0
    report = json.loads(out)
    assert report["M"] == "(-4*c*h^2 + 2*c*h)*pi"
    assert report["roots"] == [{"interval": ["1/2", "1/2"], "mult": 1}]
    assert report["sign_convention"]["displacement_sign"] == -1

    status, out, _ = run(capsys, "mel", system_file("deg4.sys"), "--forward", "--json")
    assert json.loads(out)["M"] == "(4*c*h^2 - 2*c*h)*pi"


def test_mel_second_order(capsys, system_file):
    status, _, err = run(capsys, "mel", system_file("deg4.sys"), "--order", "2")
    assert status == 2
    assert "FirstOrderNotZero" in err
    status, out, _ = run(capsys, "mel", system_file("deg4.sys"), "--order", "2", "--subst", "c=0", "--json")
    assert status == 0
    report = json.loads(out)
    assert report["order"] == 2
    assert report["roots"] == [{"interval": ["1/2", "1/2"], "mult": 2}]
    assert "decomposition" in report


def test_cofactor_and_dulac(capsys, system_file):
    status, out, _ = run(capsys, "cofactor", system_file("deg4.sys"), "--curve", "x^2+y^2-1", "--json")
    assert status == 0
    assert json.loads(out)["invariant"]
    status, out, _ = run(capsys, "cofactor", system_file("deg4.sys"), "--curve", "x", "--json")
    assert not json.loads(out)["invariant"]
    status, out, _ = run(capsys, "dulac", system_file("linear.sys"), "--curve", "x^2+y^2", "--json")
    assert status == 0
    assert json.loads(out)["is_constant"]


def test_center_check(capsys, system_file):
    status, out, _ = run(capsys, "center-check", system_file("deg4.sys"), "--subst", "c=0;a=0",
                         "--max-order", "2", "--json")
    assert status == 0
    report = json.loads(out)
    assert report["symmetry"]["center"]
    assert report["focal"]["all_vanish"]
    status, out, _ = run(capsys, "center-check", system_file("deg4.sys"), "--subst", "c=0;a=1;b=1",
                         "--max-order", "2", "--json")
    report = json.loads(out)
    assert not report["symmetry"]["center"]
    assert report["focal"]["first_nonzero"]["k"] == 1


def test_kukles_conditions(capsys, system_file):
    subst = "a1=1;a2=0;a3=-2;a4=-1/3;a5=-1;a6=0;a7=1/3"
    status, out, _ = run(capsys, "kukles-conditions", system_file("cubic.sys"), "--subst", subst, "--json")
    assert status == 0
    report = json.loads(out)
    assert report["satisfied"]["JinWang"]
    assert report["jin_wang_branch"] == "a7=-a4"
    status, _, err = run(capsys, "kukles-conditions", system_file("deg4.sys"))
    assert status == 2
    assert "not a cubic Kukles system" in err


def test_simulate(capsys, system_file, tmp_path):
    out_file = str(tmp_path / "orbit.csv")
    status, _, _ = run(capsys, "simulate", system_file("linear.sys"), "--from", "1,0", "--t-max", "1",
                       "--samples", "5", "--out", out_file)
    assert status == 0
    with open(out_file) as f:
        lines = f.read().splitlines()
    assert lines[0] == "t,x,y"
    assert len(lines) == 6
    status, _, _ = run(capsys, "simulate", system_file("linear.sys"), "--from", "1,0,0")
    assert status == 2


def test_cycles(capsys, system_file, tmp_path):
    portrait = str(tmp_path / "portrait.svg")
    status, out, _ = run(capsys, "cycles", system_file("linear.sys"), "--range", "0.1:1", "--grid", "8",
                         "--json", "--portrait", portrait)
    assert status == 0
    assert json.loads(out) == {"cycles": []}
    assert os.path.isfile(portrait)
    with open(portrait) as f:
        assert "<svg" in f.read()


def test_cycles_at_a_point(capsys, system_file):
    status, out, _ = run(capsys, "cycles", system_file("deg4.sys"), "--at", "a=0,b=0,c=1", "--eps", "1/10",
                         "--range", "0.5:1.5", "--grid", "12", "--json")
    assert status == 0
    cycles = json.loads(out)["cycles"]
    assert len(cycles) == 1
    assert cycles[0]["x"] == pytest.approx(1.0, abs=1e-6)


def test_usage_errors(capsys, system_file, tmp_path):
    status, _, err = run(capsys, "lyap", system_file("bad.sys"))
    assert status == 1
    assert "bad.sys:3:12" in err
    assert "undeclared identifier 'z'" in err

    status, _, _ = run(capsys, "lyap", str(tmp_path / "missing.sys"))
    assert status == 1
    status, _, _ = run(capsys, "cycles", system_file("deg4.sys"), "--at", "z=1")
    assert status == 1
    status, _, err = run(capsys, "cycles", system_file("deg4.sys"))
    assert status == 1
    assert "unbound" in err
    status, _, err = run(capsys, "cycles", system_file("deg4.sys"), "--subst", "a=1", "--at", "a=2,b=0,c=0")
    assert status == 1
    assert "ConflictingOptions" in err
    status, _, _ = run(capsys, "cycles", system_file("linear.sys"), "--eps", "1/10")
    assert status == 1
    status, _, err = run(capsys, "cycles", system_file("linear.sys"), "--tol", "1")
    assert status == 1
    assert "BadTolerance" in err
    same = str(tmp_path / "same")
    status, _, _ = run(capsys, "cycles", system_file("linear.sys"), "--out", same, "--portrait", same)
    assert status == 1
    status, _, _ = run(capsys, "cycles", system_file("linear.sys"), "--range", "1")
    assert status == 1


def test_argument_errors(capsys):
    with pytest.raises(SystemExit) as ex:
        main(["unknown-command"])
    assert ex.value.code == 1
    with pytest.raises(SystemExit) as ex:
        main(["mel", "x.sys", "--order", "3"])
    assert ex.value.code == 1
    with pytest.raises(SystemExit):
        create_parser().parse_args([])


def test_verbose_logging(capsys, system_file):
    status, _, _ = run(capsys, "-vv", "mel", system_file("deg4.sys"))
    assert status == 0
