import json
from pathlib import Path

import pytest

from goid.cli import main

SPECS = Path(__file__).resolve().parent.parent / "specs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_check_etale_one_record_per_generator(capsys):
    code, out = run(capsys, "check-etale", "--spec", SPECS / "ex44_add.spec", "--json")
    doc = json.loads(out)
    assert code == 0 and len(doc["records"]) == 1 and doc["records"][0]["status"] == "pass"


def test_multiplicative_is_not_etale(capsys):
    code, out = run(capsys, "check-etale", "--spec", SPECS / "ex44_mult.spec", "--json")
    assert code == 1
    assert all(r["status"] == "fail" for r in json.loads(out)["records"])


def test_calg_check_exact(capsys):
    code, out = run(capsys, "calg-check", "--spec", SPECS / "rot5.spec", "--backend", "exact", "--json")
    doc = json.loads(out)
    assert code == 0 and all(r["status"] == "pass" and r["checked"] > 0 for r in doc["records"])


def test_ex37_battery_matrix(capsys):
    code, out = run(capsys, "battery", "--name", "ex37_pair", "--radius", "2", "--json")
    claims = {r["claim"]: r["status"] for r in json.loads(out)["records"]}
    assert code == 0
    assert claims["identity certificate passes verify-coe"] == "pass"
    assert claims["identity conjugacy fails"] == "pass"


def test_certificate_file(capsys):
    spec = SPECS / "rot5_nat.spec"
    code, _ = run(capsys, "verify-conjugacy", "--spec", spec, "--target", spec, "--cert", SPECS / "shift2.cert")
    assert code == 0
    code, _ = run(capsys, "coe-bridge", "--spec", spec, "--target", spec, "--cert", SPECS / "shift2.cert")
    assert code == 0


def test_orbit_breaking_certificate_fails(tmp_path, capsys):
    cert = tmp_path / "bad.cert"
    cert.write_text("[certificate]\nkind = table\nphi = 0->0; 1->2; 2->1; 3->3\n")
    spec = SPECS / "swap_table.spec"
    code, out = run(capsys, "verify-oe", "--spec", spec, "--target", spec, "--cert", cert)
    assert code == 1 and "witness" in out


def test_text_output_is_a_tree(capsys):
    code, out = run(capsys, "freeness", "--spec", "catalog:rot_finite(5)")
    assert code == 1
    assert out.splitlines()[0] == "command: freeness"
    assert "  -" in out and "witness:" in out


def test_digest_tracks_input_bytes(tmp_path, capsys):
    a = tmp_path / "a.spec"
    a.write_text((SPECS / "rot5.spec").read_text())
    _, out1 = run(capsys, "check-etale", "--spec", a, "--json")
    _, out2 = run(capsys, "check-etale", "--spec", a, "--json")
    a.write_text(a.read_text() + "\n# trailing comment\n")
    _, out3 = run(capsys, "check-etale", "--spec", a, "--json")
    d1, d2, d3 = (json.loads(o)["inputs_digest"] for o in (out1, out2, out3))
    assert d1 == d2 != d3


def test_spec_options_are_used_unless_overridden(tmp_path, capsys):
    spec = tmp_path / "r.spec"
    spec.write_text((SPECS / "rot5_nat.spec").read_text().replace("radius = 3", "radius = 2"))
    _, out = run(capsys, "orbit", "--spec", spec, "--point", "0", "--json")
    assert json.loads(out)["records"][0]["bound"] == {"radius": 2}
    _, out = run(capsys, "orbit", "--spec", spec, "--point", "0", "--radius", "4", "--json")
    assert json.loads(out)["records"][0]["bound"] == {"radius": 4}


def test_parse_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.spec"
    bad.write_text("[group]\nfamily = int\n")
    assert main(["check-etale", "--spec", str(bad)]) == 2
    assert "bad.spec:" in capsys.readouterr().err


def test_invalid_flag_combination():
    with pytest.raises(SystemExit) as exc:
        main(["orbit", "--spec", "catalog:rot_finite(5)", "--backend", "float"])
    assert exc.value.code == 2


def test_unknown_command():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_compactify_check(capsys):
    code, out = run(capsys, "compactify-check", "--spec", SPECS / "ex44_add.spec", "--x0", "1", "--x-inf", "inf")
    assert code == 0
