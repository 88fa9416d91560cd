"""The eleven acceptance criteria, each at its stated radius, instance and time budget.

Every test records one line in the terminal summary ("criterion N: PASS ...")
and then asserts on the same parts, so a failing part is visible in both.
"""

import time
from fractions import Fraction

from conftest import ACCEPTANCE_LINES
from goid import catalog
from goid.calg import calg_report, calg_truncation
from goid.compactification import check_thm41, check_thm43, limit_functional, profile, verify_thm43_certificate
from goid.dilation import reduction_report
from goid.dynamics import INF, ActionInstance, FiniteSpace, RectPoint, TableRule, Tri, default_samples, image_is_open
from goid.equivalence import (
    ConjugacyCertificate, PointMap, coe_from_conjugacy, coe_obstruction_scan, identity_coe, round_trip_report,
    verify_conjugacy, verify_orbit_equivalence,
)
from goid.groupoid import (
    decomposition_independence_report, default_window, enumerate_groupoid, groupoid_axioms_report, orbit,
    q_contains, q_set,
)
from goid.report import Report
from goid.groups import INT, Aff, CustomSemigroup, OreContext, Z, in_semigroup, word_ball
from goid.report import Status
from helpers import broken_rotation, cyclic_rotation, doubled_table, nat_context, rotation

CATALOG = ["ex37_p1", "ex37_p2", "ex44_add_nstar", "ex44_mult_nstar", "ex44_add_n", "ex44_mult_n",
           "rot_finite(5)", "rot_cyclic(5)", "onepoint(nat)", "onepoint(posint)"]


def verdict(n, title, parts, elapsed=None, budget=None):
    """Record the one-line result for criterion ``n`` and assert on it."""
    if budget is not None:
        parts = list(parts) + [(f"runtime {elapsed:.1f}s < {budget}s", elapsed < budget)]
    failed = [label for label, ok in parts if not ok]
    status = "FAIL" if failed else "PASS"
    line = f"criterion {n:>2}: {status}  {title}"
    if failed:
        line += "  [failing: " + "; ".join(failed) + "]"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert not failed, line


def window_points(A):
    return list(default_window(A))


# 1 -----------------------------------------------------------------------


def test_criterion_01_reference_data(derived):
    t0 = time.perf_counter()
    parts = []
    add = catalog.build("ex44_add_nstar")
    mult = catalog.build("ex44_mult_nstar")
    ks = list(range(1, 13))
    ok_add = ok_mult = ok_orbit = True
    for r in range(1, 9):
        ball = word_ball(add.ctx, r)
        for k in ks:
            ok_add &= q_set(add, k, r) == [g for g in ball if g.value >= -k + 1]
        ok_add &= q_set(add, INF, r) == list(ball)
    for r in range(1, 9):
        ball = word_ball(mult.ctx, r)
        for k in ks:
            want = [g for g in ball if (g.value * k).denominator == 1]
            ok_mult &= q_set(mult, k, r) == want
        ok_mult &= q_set(mult, INF, r) == list(ball)
    for r in (1, 2, 3, 8):
        for k in ks:
            ok_orbit &= orbit(add, k, r) == sorted({k + g for g in range(-r, r + 1) if k + g >= 1})
            mb = word_ball(mult.ctx, r)
            ok_orbit &= orbit(mult, k, r) == sorted({int(k * g.value) for g in mb if (k * g.value).denominator == 1})
        ok_orbit &= orbit(add, INF, r) == [INF] and orbit(mult, INF, r) == [INF]
    parts += [("additive Q_k = {-k+1, -k+2, ...} and Q_inf = Z, radius <= 8", ok_add),
              ("multiplicative Q_k = {1/k, 2/k, ...}, radius <= 8", ok_mult),
              ("orbits [k] = truncated N*, [inf] = {inf}", ok_orbit)]
    # the frozen oracle values agree as well
    frozen = derived["qsets"]
    ok_frozen = True
    for key, want in frozen.items():
        name, k, r = key.split(".")
        A = catalog.build("ex44_" + name)
        x = INF if k == "inf" else int(k)
        got = sorted(g.value for g in q_set(A, x, int(r[1:])))
        ok_frozen &= got == sorted(Fraction(v) if isinstance(v, str) else v for v in want)
    parts.append((f"frozen oracle Q-sets ({len(frozen)} entries)", ok_frozen and len(frozen) > 0))
    verdict(1, "reference Q-set and orbit data", parts, time.perf_counter() - t0, 5)


# 2, 3 ----------------------------------------------------------------------


def test_criterion_02_decomposition_independence():
    t0 = time.perf_counter()
    parts = []
    for name in CATALOG:
        A = catalog.build(name)
        T = enumerate_groupoid(A, window_points(A), 3)
        rep = decomposition_independence_report(T)
        parts.append((f"{name} ({rep.records[0].checked} comparisons)", rep.exit_code == 0))
    verdict(2, "transfer independent of the decomposition, radius 3, all catalog instances",
            parts, time.perf_counter() - t0, 30)


def test_criterion_03_groupoid_axioms():
    parts = []
    for name in CATALOG:
        A = catalog.build(name)
        T = enumerate_groupoid(A, window_points(A), 3)
        rep = groupoid_axioms_report(T)
        names = {r.claim for r in rep.records}
        parts.append((name, rep.exit_code == 0 and "cocycle identity" in names
                      and all(r.checked > 0 for r in rep.records)))
    verdict(3, "associativity, inverse laws and cocycle identity at radius 3", parts)


# 4 -----------------------------------------------------------------------


def test_criterion_04_etale():
    parts = []
    for name in ("ex44_add_nstar", "ex44_add_n", "ex37_p1", "ex37_p2"):
        A = catalog.build(name)
        gens = A.ctx.semigroup_generators()
        got = {str(g): image_is_open(A, g).value for g in gens}
        parts.append((f"{name}: open images expected, got {got}", all(v == "true" for v in got.values())))
    for name in ("ex44_mult_nstar", "ex44_mult_n"):
        A = catalog.build(name)
        gens = [g for g in A.ctx.semigroup_generators() if g.value >= 2]
        parts.append((f"{name}: non-open images for generators >= 2",
                      bool(gens) and all(image_is_open(A, g) is Tri.FALSE for g in gens)))
    verdict(4, "image_is_open on the catalog generators", parts)


# 5 -----------------------------------------------------------------------


def test_criterion_05_reduction():
    parts = []
    for name in ("ex44_add_nstar", "rot_finite(5)"):
        A = catalog.build(name)
        rep = reduction_report(enumerate_groupoid(A, window_points(A), 3))
        parts.append((name, rep.exit_code == 0 and len(rep.records) == 4))
    verdict(5, "reduction map is a bijective label-preserving homomorphism", parts)


# 6 -----------------------------------------------------------------------


def test_criterion_06_round_trip():
    parts = []
    A, B = catalog.build_pair("ex37_pair")
    window = default_samples(A)
    rep = round_trip_report(identity_coe(A), A, B, 3, window)
    parts.append(("ex37_pair identity certificate", rep.exit_code == 0))
    R = catalog.build("rot_finite(5)")
    conj = ConjugacyCertificate(PointMap.from_table({x: (x + 2) % 5 for x in range(5)}),
                                lambda m: m, lambda m: m, "x+2")
    parts.append(("rot_finite(5) conjugacy x -> x+2 verifies", verify_conjugacy(conj, R, R, radius=3).exit_code == 0))
    rep = round_trip_report(coe_from_conjugacy(conj, R, R), R, R, 3, range(5))
    parts.append(("rot_finite(5) conjugacy-induced certificate", rep.exit_code == 0))
    verdict(6, "certificate -> groupoid isomorphism -> certificate reproduces the input", parts)


# 7 -----------------------------------------------------------------------


def test_criterion_07_rectangle_matrix():
    parts = []
    rep = catalog.run_battery("ex37_pair", 3)
    claims = {r.claim: r for r in rep.records}
    parts.append(("battery: identity COE passes", claims["identity certificate passes verify-coe"].passed))
    parts.append(("battery: identity conjugacy fails", claims["identity conjugacy fails"].passed))
    parts.append(("battery: Q-set witness at (0,1)", claims["Q-set obstruction fails at (0,1)"].passed))
    A, B = catalog.build_pair("ex37_pair")
    ball = word_ball(A.ctx, 3)
    q = [g for g in ball if q_contains(A, RectPoint(0, 1), g)]
    p1 = [g for g in ball if in_semigroup(A.ctx, g)]
    p2 = [g for g in ball if in_semigroup(B.ctx, g)]
    parts.append(("Q_(0,1) = P1 != P2 on the radius-3 ball", q == p1 and p1 != p2))
    # the distinguishing matrix as stated; Aff(3/2,0) is the element that separates them
    half = Aff(Fraction(1, 2), 0)
    m1, m2 = in_semigroup(A.ctx, half), in_semigroup(B.ctx, half)
    parts.append((f"membership of [[1/2,0],[0,1]] differs between P1 and P2 (P1: {m1}, P2: {m2})", m1 != m2))
    verdict(7, "COE pass, conjugacy fail, distinguishing matrix", parts)


# 8 -----------------------------------------------------------------------


def test_criterion_08_add_vs_mult():
    t0 = time.perf_counter()
    parts = []
    add, mult = catalog.build("ex44_add_nstar"), catalog.build("ex44_mult_nstar")
    rep = verify_orbit_equivalence(PointMap.identity(), add, mult, 6)
    parts.append(("(a) identity is an orbit equivalence at radius 6", rep.exit_code == 0))

    scan = coe_obstruction_scan(add, mult, candidate_bound=12)
    main = scan.find("no increasing table is both stabilized and onto")
    d = main.detail
    parts.append(("(b) zero surviving candidates", main.passed and d["survivors"] == 0 and d["tables_scanned"] > 0))
    parts.append(("(b) psi(n) = psi(1)^n exhibited for every stabilized candidate",
                  d["stabilized_tables"] > 0 and d["relation_exhibited"] == d["stabilized_tables"]))

    add0, mult0 = catalog.build("ex44_add_n"), catalog.build("ex44_mult_n")
    rep = verify_orbit_equivalence(PointMap.identity(), add0, mult0, 6)
    w = rep.records[0].witness
    parts.append((f"(c) fails with witness x = 0 (got {w})", rep.exit_code == 1 and isinstance(w, dict) and w.get("x") == 0))
    verdict(8, "additive vs multiplicative on the compactified integers", parts, time.perf_counter() - t0, 60)


# 9 -----------------------------------------------------------------------


def test_criterion_09_operator_identities():
    t0 = time.perf_counter()
    parts = []
    # G = Z/5 acting on itself is the exactly finite form of the rotation
    Tc = enumerate_groupoid(catalog.build("rot_cyclic(5)"), range(5), 2)
    rep = calg_report(Tc, margin=2, backend="exact")
    span = rep.find("span of f u_g has dimension equal to the arrow count")
    parts.append(("Z/5 full group: all identities exact", rep.exit_code == 0))
    parts.append(("Z/5 full group: span dimension 25", span.passed and span.detail["span_dimension"] == 25))

    R = catalog.build("rot_finite(5)")
    rep = calg_report(calg_truncation(R, range(5), 2), margin=2, backend="exact")
    parts.append(("rot_finite(5): all identities exact on margin-safe vectors", rep.exit_code == 0))

    A = catalog.build("ex44_add_nstar")
    T = calg_truncation(A, A.space.window(20), 4)
    rep = calg_report(T, margin=4, backend="exact")
    corner = rep.find("the corner restricts to the semigroup model")
    parts.append(("ex44_add_nstar, 20 points, margin 4: all identities exact", rep.exit_code == 0))
    parts.append(("corner identity checked", corner is not None and corner.passed and corner.checked > 0))
    verdict(9, "indicator, corner and covariant relations in exact arithmetic", parts,
            time.perf_counter() - t0, 60)


# 10 ----------------------------------------------------------------------


def test_criterion_10_compactifications():
    parts = []
    ctx = nat_context()
    parts.append(("shift image is cut out by the bit at a, (Z, N, N), radius 8",
                  check_thm41(ctx, ctx, Z(2), radius=8).exit_code == 0))
    A = catalog.build("ex44_add_nstar")
    rep, cert = check_thm43(A, INF, 1, radius=3)
    parts.append(("conjugacy certificate produced for x0 = 1, x_inf = inf", rep.exit_code == 0 and cert is not None))
    parts.append(("certificate passes verify_conjugacy",
                  cert is not None and verify_thm43_certificate(A, cert, 3).exit_code == 0))
    triv = OreContext(INT, "trivial", (Z(1),))
    win = word_ball(triv, 8)
    parts.append(("limit of delta_e is 0", limit_functional(profile(triv, Z(0), win).as_dict(), win) == 0))
    verdict(10, "profiles, shifts and the one-point compactification", parts)


# 11 ----------------------------------------------------------------------


def _corrupted_runs():
    """Each verifier paired with its documented corrupted input."""
    from goid.calg import calg_report as calg
    from goid.calg import partial_action_report
    from goid.dilation import homeomorphism_dilation_report, relation_report
    from goid.dynamics import action_axioms_report
    from goid.equivalence import (
        CoeCertificate, GroupoidIsoCertificate, cocycle_check, verify_coe, verify_groupoid_iso,
    )
    from goid.groupoid import Arrow, cocycle_identity_report, etale_report, freeness
    from goid.groups import Zn

    broken = broken_rotation()
    Tb = enumerate_groupoid(broken, range(5), 2)
    rot = rotation(5)

    def tampered(A, window, radius):
        T = enumerate_groupoid(A, window, radius)
        p = T.arrows[len(T.arrows) // 2]
        T.sources[p] = (T.sources[p] + 1) % 5
        return T

    ident = identity_coe(rot)
    bad_coe = CoeCertificate(ident.phi, ident.a.with_entry(0, Z(2), Z(3)), ident.b, "one bad entry")
    cyc = cyclic_rotation(5)
    Tc = enumerate_groupoid(cyc, range(5), 2)
    swap = {1: 2, 2: 1}
    relabel = lambda p: Arrow(p.base, Zn(5, swap.get(p.label.value, p.label.value)))  # noqa: E731
    doubling = ConjugacyCertificate(PointMap.identity(), lambda m: Z(2 * m.value), lambda s: Z(s.value // 2))
    swaps = ActionInstance(FiniteSpace(4), nat_context(), TableRule(4, ((Z(1), (1, 0, 3, 2)),)))
    mixer = PointMap.from_table({0: 0, 1: 2, 2: 1, 3: 3})
    add = catalog.build("ex44_add_nstar")
    _, good = check_thm43(add, INF, 1, 3)
    shifted = ConjugacyCertificate(PointMap(lambda m: 2 if m is not INF and m.value == 0 else good.phi(m),
                                            good.phi.inverse), good.alpha, good.alpha_inv)
    evens = OreContext(INT, CustomSemigroup("evens", (Z(2),), lambda g: g.value >= 0 and g.value % 2 == 0),
                       (Z(1),))
    two_fixed = ActionInstance(FiniteSpace(2), nat_context(), TableRule(2, ((Z(1), (0, 1)),)))

    return [
        ("action_axioms_report: non-injective table", lambda: action_axioms_report(doubled_table())),
        ("etale_report: multiplicative generators", lambda: etale_report(catalog.build("ex44_mult_nstar"))),
        ("decomposition_independence_report: squared rotation", lambda: decomposition_independence_report(Tb)),
        ("groupoid_axioms_report: squared rotation", lambda: groupoid_axioms_report(Tb)),
        ("cocycle_identity_report: squared rotation", lambda: cocycle_identity_report(Tb)),
        ("freeness: rotation with isotropy", lambda: _wrap("freeness", freeness(rot, 3)[1])),
        ("reduction_report: tampered source", lambda: reduction_report(tampered(rot, range(5), 2))),
        ("relation_report: squared rotation",
         lambda: relation_report(broken, [(x, Z(g)) for x in range(5) for g in range(-2, 3)])),
        ("homeomorphism_dilation_report: squared rotation", lambda: homeomorphism_dilation_report(broken, range(5), 2)),
        ("partial_action_report: squared rotation", lambda: partial_action_report(Tb, 2)),
        ("verify_conjugacy: doubled alpha", lambda: verify_conjugacy(doubling, rot, rotation(5, 2), radius=3)),
        ("verify_orbit_equivalence: orbit-mixing permutation",
         lambda: verify_orbit_equivalence(mixer, swaps, swaps, 3)),
        ("verify_coe: one corrupted cocycle entry", lambda: verify_coe(bad_coe, rot, rot, 2)),
        ("cocycle_check: one corrupted cocycle entry", lambda: cocycle_check(bad_coe, rot, rot, 2)),
        ("verify_groupoid_iso: label-permuting map",
         lambda: verify_groupoid_iso(GroupoidIsoCertificate(relabel, relabel), Tc, Tc)),
        ("round_trip_report: one corrupted cocycle entry", lambda: round_trip_report(bad_coe, rot, rot, 2, range(5))),
        ("calg_report: tampered source", lambda: calg(tampered(cyc, range(5), 2), 2)),
        ("check_thm41: semigroup without P", lambda: check_thm41(nat_context(), evens, Z(2), 4)),
        ("check_thm43: two points with full Q-sets",
         lambda: check_thm43(two_fixed, 0, 1, 2)[0]),
        ("verify_thm43_certificate: moved image of e", lambda: verify_thm43_certificate(add, shifted, 3)),
        ("coe_obstruction_scan: additive against itself",
         lambda: coe_obstruction_scan(add, add, candidate_bound=6)),
    ]


def _wrap(name, record):
    rep = Report(name)
    rep.add(record)
    return rep


def _empty_runs():
    """The same verifiers with nothing to check."""
    from goid.calg import calg_report as calg
    from goid.dynamics import action_axioms_report
    from goid.equivalence import cocycle_check, verify_coe

    rot = rotation(5)
    empty = enumerate_groupoid(rot, [], 2)
    ident = identity_coe(rot)
    return [
        ("action_axioms_report", lambda: action_axioms_report(rot, samples=[], labels=[])),
        ("decomposition_independence_report", lambda: decomposition_independence_report(empty)),
        ("groupoid_axioms_report", lambda: groupoid_axioms_report(empty)),
        ("reduction_report", lambda: reduction_report(empty)),
        ("verify_conjugacy", lambda: verify_conjugacy(
            ConjugacyCertificate(PointMap.identity(), lambda m: m, lambda m: m), rot, rot, samples=[], radius=0)),
        ("verify_orbit_equivalence", lambda: verify_orbit_equivalence(PointMap.identity(), rot, rot, 2, window=[])),
        ("verify_coe", lambda: verify_coe(ident, rot, rot, 2, window=[])),
        ("cocycle_check", lambda: cocycle_check(ident, rot, rot, 2, window=[])),
        ("round_trip_report", lambda: round_trip_report(ident, rot, rot, 2, window=[])),
        ("calg_report", lambda: calg(empty, 2)),
    ]


def test_criterion_11_negative_controls():
    parts = []
    for label, run in _corrupted_runs():
        rep = run()
        bad = [r for r in rep.records if r.status is Status.FAIL]
        parts.append((label, bool(bad) and all(r.witness not in (None, "") and r.checked > 0 for r in bad)))
    for label, run in _empty_runs():
        try:
            rep = run()
        except Exception as exc:  # an explicit refusal is not a pass either
            parts.append((f"{label} with nothing to check ({type(exc).__name__})", True))
            continue
        vacuous = [r.claim for r in rep.records if r.status is Status.PASS and r.checked == 0]
        parts.append((f"{label} with nothing to check never passes", not vacuous and rep.exit_code != 0))
    verdict(11, "corrupted inputs fail with witnesses; nothing passes vacuously", parts)
