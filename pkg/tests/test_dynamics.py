from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from goid import catalog
from goid.dynamics import (
    INF, NEG_INF, RectPoint, Tri, act, action_axioms_report, image_is_open, preimage, sort_points,
)
from goid.errors import NotInSemigroupError, PointError
from goid.groups import Aff, Z
from helpers import assert_fails_with_witness, doubled_table, rotation


def test_preimages():
    rect = catalog.build("ex37_p1")
    assert preimage(rect, Aff(2, 1), RectPoint(-1, Fraction(1, 4))) == RectPoint(-1, Fraction(1, 2))
    assert preimage(catalog.build("ex44_add_n"), Z(3), 1) is None
    assert preimage(rotation(3), Z(1), 0) == 2


def test_infinity_is_fixed():
    A = catalog.build("ex44_add_nstar")
    assert act(A, Z(5), INF) is INF
    assert act(A, Z(5), 2) == 7


def test_labels_outside_semigroup_rejected():
    with pytest.raises(NotInSemigroupError):
        act(catalog.build("ex44_add_nstar"), Z(-1), 3)
    with pytest.raises(PointError):
        act(catalog.build("ex44_add_nstar"), Z(1), 0)


@pytest.mark.parametrize("name", ["ex37_p1", "ex37_p2", "rot_finite(5)", "ex44_mult_nstar", "onepoint(posint)"])
def test_action_axioms_hold(name):
    rep = action_axioms_report(catalog.build(name))
    assert rep.exit_code == 0, rep.to_text()


def test_rectangle_axioms_on_fifty_rational_points():
    A = catalog.build("ex37_p1")
    pts = [RectPoint(Fraction(-i, 3), Fraction(j, 9)) for i in range(10) for j in range(5)]
    rep = action_axioms_report(A, samples=pts)
    assert rep.exit_code == 0 and rep.records[1].checked > 0


def test_collapsing_table_fails_injectivity():
    bad = assert_fails_with_witness(action_axioms_report(doubled_table()))
    w = bad[0].witness
    assert {w["x1"], w["x2"]} == {0, 1}


def test_openness_decisions():
    assert image_is_open(catalog.build("ex44_add_nstar"), Z(3)) is Tri.TRUE
    mult = catalog.build("ex44_mult_nstar")
    assert all(image_is_open(mult, g) is Tri.FALSE for g in mult.ctx.semigroup_generators())
    # a closed box in a connected space; only the identity has an open image
    rect = catalog.build("ex37_p1")
    assert image_is_open(rect, Aff(2)) is Tri.FALSE
    assert image_is_open(rect, Aff(1)) is Tri.TRUE


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.integers(1, 40))
def test_additive_right_action(a, b, x):
    A = catalog.build("ex44_add_nstar")
    assert act(A, Z(a), act(A, Z(b), x)) == act(A, Z(b + a), x)


def test_neg_inf_sorts_first():
    pts = sort_points({RectPoint(0, 0), RectPoint(NEG_INF, 0), RectPoint(-10**9, 0)})
    assert pts[0].x is NEG_INF
