"""Prebuilt instances and their batteries of expected results.

Every expected value carries an ``origin``:

``reference``       a value stated for the instance in the source literature
``trivial``         immediate from the construction
``oracle:<name>``   produced by the named independent computation and frozen
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .compactification import sigma_instance
from .dynamics import (
    INF,
    NEG_INF,
    ActionInstance,
    AddRule,
    AffineRectRule,
    FiniteSpace,
    MultRule,
    OnePointInts,
    RectPoint,
    RectSpace,
    RotationRule,
    default_samples,
    image_is_open,
)
from .equivalence import (
    ConjugacyCertificate,
    PointMap,
    coe_obstruction_scan,
    identity_coe,
    round_trip_report,
    verify_conjugacy,
    verify_coe,
    verify_orbit_equivalence,
)
from .groupoid import default_window, enumerate_groupoid, freeness, orbit, q_contains, q_set
from .groups import (
    AFFINE,
    INT,
    POSRAT,
    Aff,
    OreContext,
    Q,
    Z,
    Zn,
    cyclic,
    in_semigroup,
    word_ball,
)
from .report import Record, Report, Status, Tri

INSTANCE_NAMES = ("ex37_p1", "ex37_p2", "ex44_add_nstar", "ex44_mult_nstar", "ex44_add_n",
                  "ex44_mult_n", "rot_finite(n)", "rot_cyclic(n)", "onepoint(P)")
PAIR_NAMES = ("ex37_pair", "ex44_pair_nstar", "ex44_pair_n")

RECT_GENERATORS = (Aff(2), Aff(3), Aff(1, 1))
MULT_GENERATORS = (Q(2), Q(3), Q(5), Q(7))


def add_context() -> OreContext:
    return OreContext(INT, "nat", (Z(1),))


def mult_context() -> OreContext:
    return OreContext(POSRAT, "posint", MULT_GENERATORS)


def _parametrised(name: str):
    m = re.fullmatch(r"(\w+)\((\w+)\)", name.strip())
    return (m.group(1), m.group(2)) if m else (name.strip(), None)


def build(name: str) -> ActionInstance:
    base, arg = _parametrised(name)
    if base in ("ex37_p1", "ex37_p2"):
        ctx = OreContext(AFFINE, base[-2:], RECT_GENERATORS)
        return ActionInstance(RectSpace(), ctx, AffineRectRule(), base)
    if base in ("ex44_add_nstar", "ex44_add_n"):
        space = OnePointInts(1 if base.endswith("nstar") else 0)
        return ActionInstance(space, add_context(), AddRule(), base)
    if base in ("ex44_mult_nstar", "ex44_mult_n"):
        space = OnePointInts(1 if base.endswith("nstar") else 0)
        return ActionInstance(space, mult_context(), MultRule(), base)
    if base == "rot_finite" and arg is not None:
        n = int(arg)
        return ActionInstance(FiniteSpace(n), add_context(), RotationRule(n), f"rot_finite({n})")
    if base == "rot_cyclic" and arg is not None:
        n = int(arg)
        ctx = OreContext(cyclic(n), "full", (Zn(n, 1),))
        return ActionInstance(FiniteSpace(n), ctx, RotationRule(n), f"rot_cyclic({n})")
    if base == "onepoint" and arg in ("nat", "posint"):
        ctx = add_context() if arg == "nat" else mult_context()
        A = sigma_instance(ctx)
        return ActionInstance(A.space, A.ctx, A.rule, f"onepoint({arg})")
    raise KeyError(f"unknown catalog instance {name!r}; known: {', '.join(INSTANCE_NAMES)}")


def build_pair(name: str):
    pairs = {
        "ex37_pair": ("ex37_p1", "ex37_p2"),
        "ex44_pair_nstar": ("ex44_add_nstar", "ex44_mult_nstar"),
        "ex44_pair_n": ("ex44_add_n", "ex44_mult_n"),
    }
    if name not in pairs:
        raise KeyError(f"unknown catalog pair {name!r}; known: {', '.join(PAIR_NAMES)}")
    a, b = pairs[name]
    return build(a), build(b)


# ---------------------------------------------------------------------------
# expectations


@dataclass(frozen=True)
class Expectation:
    claim: str
    expected: object
    origin: str
    observe: Callable = field(compare=False, repr=False)


@dataclass
class CatalogEntry:
    name: str
    expectations: list


def _add_q(A, k, radius):
    ball = word_ball(A.ctx, radius)
    if k is INF:
        return list(ball)
    return [g for g in ball if g.value >= A.space.minimum - k]


def _mult_q(A, k, radius):
    ball = word_ball(A.ctx, radius)
    if k is INF:
        return list(ball)
    return [g for g in ball if (g.value * k).denominator == 1]


def _add_orbit(A, k, radius):
    if k is INF:
        return [INF]
    return [j for j in range(max(A.space.minimum, k - radius), k + radius + 1)]


def _mult_orbit(A, k, radius):
    if k is INF:
        return [INF]
    vals = {g.value * k for g in word_ball(A.ctx, radius)}
    return sorted(int(v) for v in vals if v.denominator == 1 and v >= 1)


def _etale(A) -> bool:
    return all(image_is_open(A, s) is Tri.TRUE for s in A.ctx.semigroup_generators())


def _free(A, radius) -> str:
    return freeness(A, radius)[0].value


def _data_expectations(A, radius, q_rule, orbit_rule, origin) -> list:
    """Q-sets and orbits of the window points against the listed formulas."""
    out = []
    for k in default_window(A, 6):
        out.append(Expectation(
            f"Q_{k} on the radius-{radius} ball", q_rule(A, k, radius), origin,
            lambda k=k: q_set(A, k, radius)))
        out.append(Expectation(
            f"orbit of {k} at radius {radius}", orbit_rule(A, k, radius), origin,
            lambda k=k: orbit(A, k, radius)))
    return out


def instance_entry(name: str, radius: int) -> CatalogEntry:
    A = build(name)
    base, _ = _parametrised(name)
    ex = []
    etale = Expectation("groupoid is etale", None, "", lambda: _etale(A))
    free = Expectation("topologically free", None, "", lambda: _free(A, radius))
    if base in ("ex44_add_nstar", "ex44_add_n"):
        ex.append(_with(etale, True, "reference"))
        ex.append(_with(free, "true", "reference" if base.endswith("nstar") else "oracle:freeness"))
        ex += _data_expectations(A, radius, _add_q, _add_orbit, "reference")
    elif base in ("ex44_mult_nstar", "ex44_mult_n"):
        ex.append(_with(etale, False, "reference"))
        if base.endswith("nstar"):
            ex.append(_with(free, "true", "reference"))
            ex += _data_expectations(A, radius, _mult_q, _mult_orbit, "reference")
        else:
            # 0 is fixed by every rho_m, so Q_0 = G and 0 has nontrivial isotropy
            ex.append(_with(free, "false", "oracle:freeness"))
            ex.append(Expectation("Q_0 is the whole ball", list(word_ball(A.ctx, radius)),
                                  "trivial", lambda: q_set(A, 0, radius)))
    elif base in ("ex37_p1", "ex37_p2"):
        ex.append(_with(etale, True, "reference"))
        ex.append(_with(free, "true", "reference"))
        special = RectPoint(0, 1)
        p1 = [g for g in word_ball(A.ctx, radius) if g.value[0] >= 1 and g.value[1] >= 0]
        ex.append(Expectation("Q_(0,1) equals P1 on the ball", p1, "reference",
                              lambda: q_set(A, special, radius)))
        pts = default_samples(A)
        ex.append(Expectation(
            "Q-sets are {a >= y, b >= x} at the sample points", True, "reference",
            lambda: all(q_contains(A, p, g) == (g.value[0] >= p.y and (p.x is NEG_INF or g.value[1] >= p.x))
                        for p in pts for g in word_ball(A.ctx, 2))))
    elif base in ("rot_finite", "rot_cyclic"):
        ex.append(_with(etale, True, "trivial"))
        # Z/n acts freely on itself; Z acting through Z/n has isotropy nZ
        ex.append(_with(free, "true" if base == "rot_cyclic" else "false", "trivial"))
        n = A.space.n
        ex.append(Expectation("one orbit", list(range(n)), "trivial",
                              lambda: orbit(A, 0, max(radius, n))))
    elif base == "onepoint":
        ex.append(_with(etale, A.ctx.semigroup == "nat", "reference"))
        ex.append(_with(free, "true", "oracle:freeness"))
        ex.append(Expectation("Q_inf is the whole ball", list(word_ball(A.ctx, radius)),
                              "trivial", lambda: q_set(A, INF, radius)))
    return CatalogEntry(name, ex)


def _with(e: Expectation, expected, origin) -> Expectation:
    return Expectation(e.claim, expected, origin, e.observe)


def _status(rep: Report) -> str:
    return rep.status.value


def _record_status(rep: Report, claim: str) -> str:
    return rep.find(claim).status.value


def pair_entry(name: str, radius: int) -> CatalogEntry:
    A, B = build_pair(name)
    ex = []
    if name == "ex37_pair":
        special = RectPoint(0, 1)
        window = default_samples(A)
        ex.append(Expectation("the two groupoids have the same arrows", True, "reference",
                              lambda: set(enumerate_groupoid(A, window[:12], radius).arrows)
                              == set(enumerate_groupoid(B, window[:12], radius).arrows)))
        ex.append(Expectation("identity certificate passes verify-coe", "pass", "reference",
                              lambda: _status(verify_coe(identity_coe(A), A, B, radius, window[:12]))))
        ex.append(Expectation("identity certificate survives the groupoid round trip", "pass",
                              "oracle:coe-bridge",
                              lambda: _status(round_trip_report(identity_coe(A), A, B, radius, window[:8]))))
        ident = ConjugacyCertificate(PointMap.identity(), lambda m: m, lambda m: m, "identity")
        ex.append(Expectation("identity conjugacy fails", "fail", "reference",
                              lambda: _status(verify_conjugacy(ident, A, B, radius=radius))))
        ex.append(Expectation("Q-set obstruction fails at (0,1)", "fail", "reference",
                              lambda: _record_status(verify_conjugacy(ident, A, B, radius=radius),
                                                     "Q-sets equal to P go to Q-sets equal to S")))
        w = Aff(Fraction(3, 2), 0)
        ex.append(Expectation(
            "Aff(3/2,0): in Q_(0,1), in P1, not in P2", (True, True, False), "oracle:membership",
            lambda: (q_contains(A, special, w), in_semigroup(A.ctx, w), in_semigroup(B.ctx, w))))
        h = Aff(Fraction(1, 2), 0)
        ex.append(Expectation(
            "Aff(1/2,0): in neither Q_(0,1), P1 nor P2", (False, False, False), "oracle:membership",
            lambda: (q_contains(A, special, h), in_semigroup(A.ctx, h), in_semigroup(B.ctx, h))))
    elif name == "ex44_pair_nstar":
        ex.append(Expectation("identity map is an orbit equivalence", "pass", "reference",
                              lambda: _status(verify_orbit_equivalence(PointMap.identity(), A, B, radius))))
        ex.append(Expectation("no COE candidate survives the bounded scan", "pass", "reference",
                              lambda: _status(coe_obstruction_scan(A, B, radius))))
    elif name == "ex44_pair_n":
        ex.append(Expectation("identity map is not an orbit equivalence", "fail", "reference",
                              lambda: _status(verify_orbit_equivalence(PointMap.identity(), A, B, radius))))
        ex.append(Expectation("the failing orbit is that of 0", 0, "reference",
                              lambda: verify_orbit_equivalence(PointMap.identity(), A, B, radius)
                              .records[0].witness["x"]))
    return CatalogEntry(name, ex)


def entry(name: str, radius: int) -> CatalogEntry:
    if name in PAIR_NAMES:
        return pair_entry(name, radius)
    return instance_entry(name, radius)


def run_battery(name: str, radius: int = 3) -> Report:
    """Evaluate every expectation of the entry and diff against the stored value."""
    rep = Report("battery")
    for e in entry(name, radius).expectations:
        observed = e.observe()
        ok = observed == e.expected
        rep.add(Record(
            e.claim, "stored expectation", Status.PASS if ok else Status.FAIL, 1,
            None if ok else {"expected": e.expected, "observed": observed},
            {"radius": radius}, {"origin": e.origin},
        ))
    return rep
