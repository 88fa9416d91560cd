import pytest
from hypothesis import given, strategies as st

from goid import catalog
from goid.compactification import (
    IndicatorProfile, check_thm41, check_thm43, limit_functional, profile, shift, sigma_instance,
    verify_thm43_certificate,
)
from goid.dynamics import INF, ActionInstance, FiniteSpace, TableRule
from goid.errors import NotInSemigroupError
from goid.groups import INT, CustomSemigroup, OreContext, Z, word_ball
from goid.report import Status
from helpers import assert_no_vacuous_pass, nat_context


def test_profile_of_three(derived):
    want = derived["profile.nat.3"]
    p = profile(nat_context(), Z(3), [Z(k) for k in want["window"]])
    assert list(p.bits) == want["bits"]


def test_profile_of_trivial_semigroup_is_delta():
    ctx = OreContext(INT, "trivial", (Z(1),))
    win = word_ball(ctx, 3)
    p = profile(ctx, Z(0), win)
    assert p.as_dict() == {g: int(g == Z(0)) for g in win}
    assert limit_functional(p.as_dict(), win) == 0


def test_profile_needs_semigroup_element():
    with pytest.raises(NotInSemigroupError):
        profile(nat_context(), Z(-1), [Z(0)])


def test_shift(derived):
    ctx = nat_context()
    win = [Z(k) for k in range(-2, 6)]
    p = profile(ctx, Z(3), win)
    assert shift(Z(0), p).bits == p.bits
    want = derived["shift.nat.2.3"]
    s = shift(Z(2), p)
    assert [k.value for k in s.window] == want["window"] and list(s.bits) == want["bits"]
    assert s.agrees_with(profile(ctx, Z(5), win))


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 6))
def test_shift_is_a_right_action(g, h, n):
    win = [Z(k) for k in range(-12, 13)]
    p = profile(nat_context(), Z(n), win)
    twice = shift(Z(h), shift(Z(g), p))
    once = shift(Z(g + h), p)
    assert twice.as_dict().items() <= once.as_dict().items()


def test_empty_overlap_never_agrees():
    a = IndicatorProfile((Z(0),), (1,))
    b = IndicatorProfile((Z(1),), (1,))
    assert not a.agrees_with(b)


def test_thm41_on_integers():
    ctx = nat_context()
    rep = check_thm41(ctx, ctx, Z(2), radius=8)
    assert rep.exit_code == 0, rep.to_text()
    assert_no_vacuous_pass(rep)
    assert check_thm41(ctx, ctx, Z(0), radius=4).exit_code == 0


def test_thm41_hypothesis_failure_is_not_evaluated():
    ctx = nat_context()
    # S = {0, 2, 4, ...} does not contain P = N
    evens = OreContext(INT, CustomSemigroup("evens", (Z(2),), lambda g: g.value >= 0 and g.value % 2 == 0), (Z(1),))
    rep = check_thm41(ctx, evens, Z(2), radius=4)
    hyp = rep.records[0]
    assert hyp.hypothesis and hyp.status is Status.FAIL and hyp.witness
    assert rep.records[-1].status is Status.UNDETERMINED
    assert rep.exit_code == 2


def test_limit_functional():
    win = list(range(-10, 11))
    assert limit_functional(lambda k: 1, win) == 1
    assert limit_functional(lambda k: k % 2, win) is None


def test_self_conjugacy_of_sigma():
    A = sigma_instance(nat_context())
    rep, cert = check_thm43(A, INF, Z(0), radius=3)
    assert rep.exit_code == 0 and cert is not None
    assert all(cert.phi(m) == m for m in A.space.window(3))
    assert verify_thm43_certificate(A, cert, 3).exit_code == 0


def test_additive_conjugacy(derived):
    A = catalog.build("ex44_add_nstar")
    rep, cert = check_thm43(A, INF, 1, radius=3)
    assert rep.exit_code == 0, rep.to_text()
    for a, y in derived["lambda.add_nstar"].items():
        assert cert.phi(Z(int(a))) == y
    assert cert.phi(INF) is INF


def test_two_full_points_break_uniqueness():
    # on {0, 1} the generator fixes both points, so both have full Q-sets
    A = ActionInstance(FiniteSpace(2), nat_context(), TableRule(2, ((Z(1), (0, 1)),)), "doubled")
    rep, cert = check_thm43(A, 0, 1, radius=2)
    assert cert is None
    bad = [r for r in rep.records if r.hypothesis and r.status is Status.FAIL]
    assert any(r.witness == {"x_inf": 0, "also_full": 1} for r in bad)
    assert rep.records[-1].status is Status.UNDETERMINED
