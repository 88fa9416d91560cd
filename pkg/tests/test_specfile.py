from pathlib import Path

import pytest

from goid import catalog
from goid.errors import ParseError
from goid.specfile import AxiomError, export_spec, load_spec, parse_spec, parse_text, same_instance

SPECS = Path(__file__).resolve().parent.parent / "specs"
NAMES = ["ex37_p1", "ex37_p2", "ex44_add_nstar", "ex44_mult_nstar", "ex44_add_n", "ex44_mult_n",
         "rot_finite(5)", "rot_cyclic(5)", "onepoint(nat)", "onepoint(posint)"]


@pytest.mark.parametrize("name", NAMES)
def test_export_round_trip(name):
    A = catalog.build(name)
    doc = parse_text(export_spec(A), f"<{name}>")
    assert same_instance(doc.instance, A)


def test_shipped_specs_match_catalog():
    assert same_instance(parse_spec(SPECS / "ex44_add.spec"), catalog.build("ex44_add_nstar"))
    assert same_instance(parse_spec(SPECS / "rot5.spec"), catalog.build("rot_cyclic(5)"))
    assert load_spec(SPECS / "rot5_nat.spec").options["radius"] == 3


def test_missing_section_points_at_next_header(tmp_path):
    text = "[group]\nfamily = int\ngenerators = 1\n\n[space]\nkind = finite\nn = 3\n\n[action]\nrule = rotation\n"
    with pytest.raises(ParseError) as err:
        parse_text(text, "x.spec")
    assert "semigroup" in str(err.value)
    assert (err.value.line, err.value.column) == (5, 1)


def test_bad_family_location():
    with pytest.raises(ParseError) as err:
        parse_text("[group]\nfamily = quux\n[semigroup]\nid = nat\n[space]\nkind = finite\nn = 2\n"
                   "[action]\nrule = rotation\n", "y.spec")
    assert err.value.line == 2 and err.value.column == 10


def test_non_injective_table_is_rejected_at_load():
    text = ("[group]\nfamily = int\ngenerators = 1\n[semigroup]\nid = nat\n[space]\nkind = finite\nn = 3\n"
            "[action]\nrule = table\nimage 1 = 1, 1, 2\n")
    with pytest.raises(AxiomError) as err:
        parse_text(text)
    bad = err.value.report.failed[0]
    assert bad.claim == "each theta_a is injective" and {bad.witness["x1"], bad.witness["x2"]} == {0, 1}


def test_unknown_option_rejected():
    text = export_spec(catalog.build("rot_cyclic(5)")) + "\n[options]\nspeed = 3\n"
    with pytest.raises(ParseError):
        parse_text(text)
