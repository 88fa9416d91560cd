"""Shared fixtures-by-construction: small instances and deliberately broken ones."""

from dataclasses import dataclass

from goid.dynamics import INF, ActionInstance, FiniteSpace, RotationRule, TableRule
from goid.groups import INT, OreContext, Z, Zn, cyclic
from goid.report import Status


def nat_context():
    return OreContext(INT, "nat", (Z(1),))


def rotation(n, step=1):
    return ActionInstance(FiniteSpace(n), nat_context(), RotationRule(n, step), f"rot{n}")


def cyclic_rotation(n):
    return ActionInstance(FiniteSpace(n), OreContext(cyclic(n), "full", (Zn(n, 1),)), RotationRule(n), f"cyc{n}")


@dataclass(frozen=True)
class SquaredRotation(RotationRule):
    """Not an action: ``theta_m(x) = x + m^2``, so decompositions disagree."""

    name = "squared"

    def act(self, a, x):
        return (x + a.value ** 2) % self.n

    def preimage(self, a, y):
        return (y - a.value ** 2) % self.n

    def labels_between(self, family, x, y):
        return None


def broken_rotation(n=5):
    return ActionInstance(FiniteSpace(n), nat_context(), SquaredRotation(n), "broken")


def doubled_table():
    """Two points both fixed by the generator; not injective would need a merge."""
    return ActionInstance(FiniteSpace(3), nat_context(), TableRule(3, ((Z(1), (1, 1, 2)),)), "collapse")


def statuses(rep):
    return {r.claim: r.status for r in rep.records}


def assert_fails_with_witness(rep):
    bad = [r for r in rep.records if r.status is Status.FAIL]
    assert bad, rep.to_text()
    assert all(r.witness is not None and r.checked > 0 for r in bad)
    return bad


def assert_no_vacuous_pass(rep):
    for r in rep.records:
        if r.status is Status.PASS:
            assert r.checked > 0, r.claim


def point(s):
    return INF if s == "inf" else s
