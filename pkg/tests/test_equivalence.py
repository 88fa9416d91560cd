import pytest

from goid import catalog
from goid.dynamics import ActionInstance, FiniteSpace, TableRule
from goid.equivalence import (
    ConjugacyCertificate, GroupoidIsoCertificate, PointMap, alpha_from_generators, coe_from_conjugacy,
    coe_obstruction_scan, coe_to_groupoid_iso, cocycle_check, groupoid_iso_to_coe, identity_coe,
    round_trip_report, verify_coe, verify_conjugacy, verify_groupoid_iso, verify_orbit_equivalence,
)
from goid.errors import CertificateError, CoverageError
from goid.groupoid import Arrow, enumerate_groupoid
from goid.groups import Q, Z, Zn, compose
from helpers import assert_fails_with_witness, assert_no_vacuous_pass, cyclic_rotation, nat_context, rotation

ID = lambda m: m  # noqa: E731


def identity_conjugacy():
    return ConjugacyCertificate(PointMap.identity(), ID, ID, "identity")


def shift_conjugacy(n=5, k=2):
    return ConjugacyCertificate(PointMap.from_table({x: (x + k) % n for x in range(n)}), ID, ID, "shift")


@pytest.mark.parametrize("name", ["rot_finite(5)", "ex44_add_nstar", "ex37_p1"])
def test_identity_conjugacy_passes(name):
    A = catalog.build(name)
    rep = verify_conjugacy(identity_conjugacy(), A, A)
    assert rep.exit_code == 0, rep.to_text()
    assert_no_vacuous_pass(rep)


def test_rotation_speeds_are_not_intertwined_by_doubling():
    A, B = rotation(5, 1), rotation(5, 2)
    cert = ConjugacyCertificate(PointMap.identity(), alpha_from_generators(A, {Z(1): Z(2)}),
                                lambda s: Z(s.value // 2), "double")
    bad = assert_fails_with_witness(verify_conjugacy(cert, A, B, radius=3))
    assert bad[0].claim == "phi intertwines the actions"


def test_additive_and_multiplicative_are_not_conjugate_by_identity():
    A, B = catalog.build("ex44_add_nstar"), catalog.build("ex44_mult_nstar")
    cert = ConjugacyCertificate(PointMap.identity(), lambda m: Q(2 ** m.value),
                                lambda s: Z(s.value.numerator.bit_length() - 1), "powers of two")
    bad = assert_fails_with_witness(verify_conjugacy(cert, A, B))
    assert "m" in bad[0].witness or "m1" in bad[0].witness


def two_orbit_instance():
    """N acting on {0,1,2,3} through the permutation (0 1)(2 3)."""
    return ActionInstance(FiniteSpace(4), nat_context(), TableRule(4, ((Z(1), (1, 0, 3, 2)),)), "swaps")


def test_orbit_preserving_and_breaking_maps():
    A = two_orbit_instance()
    good = PointMap.from_table({0: 2, 1: 3, 2: 0, 3: 1})
    assert verify_orbit_equivalence(good, A, A, 3).exit_code == 0
    bad = PointMap.from_table({0: 0, 1: 2, 2: 1, 3: 3})
    rec = assert_fails_with_witness(verify_orbit_equivalence(bad, A, A, 3))[0]
    assert rec.witness["x"] in range(4)


def test_point_tables_must_be_injective():
    with pytest.raises(CertificateError):
        PointMap.from_table({0: 1, 1: 1})


@pytest.mark.parametrize("name", ["rot_finite(5)", "ex44_mult_n"])
def test_identity_coe(name):
    A = catalog.build(name)
    assert verify_coe(identity_coe(A), A, A, 2).exit_code == 0
    assert cocycle_check(identity_coe(A), A, A, 2).exit_code == 0


def test_rectangle_identity_certificate():
    A, B = catalog.build_pair("ex37_pair")
    from goid.dynamics import default_samples
    window = default_samples(A)[:12]
    cert = identity_coe(A)
    assert verify_coe(cert, A, B, 2, window).exit_code == 0
    assert cocycle_check(cert, A, B, 2, window).exit_code == 0
    iso = coe_to_groupoid_iso(cert)
    TA, TB = enumerate_groupoid(A, window, 2), enumerate_groupoid(B, window, 2)
    assert TA.arrows == TB.arrows
    assert all(iso.forward(p) == p for p in TA.arrows)
    assert verify_groupoid_iso(iso, TA, TB).exit_code == 0


def test_conjugacy_induced_coe_on_rotations():
    A = rotation(5)
    cert = coe_from_conjugacy(shift_conjugacy(), A, A)
    assert verify_coe(cert, A, A, 3).exit_code == 0
    iso = coe_to_groupoid_iso(cert)
    T = enumerate_groupoid(A, range(5), 3)
    for p in T.arrows:
        assert iso.forward(p) == Arrow((p.base + 2) % 5, p.label)
    assert verify_groupoid_iso(iso, T, T).exit_code == 0


def test_corrupted_cocycle_entry():
    A = rotation(5)
    cert = identity_coe(A)
    bad_a = cert.a.with_entry(0, Z(2), Z(3))
    corrupted = type(cert)(cert.phi, bad_a, cert.b, "corrupted")
    rec = assert_fails_with_witness(cocycle_check(corrupted, A, A, 2))[0]
    assert {"first", "second"} <= set(rec.witness)
    first, second = rec.witness["first"], rec.witness["second"]
    assert first.base == 0 and compose(first.label, second.label) == Z(2)


def test_coverage_errors_are_explicit():
    from goid.equivalence import CocycleTable, CocyclePiece, CoeCertificate, Points
    A = rotation(3)
    partial = CocycleTable((CocyclePiece(Points(frozenset([0])), ID),))
    cert = CoeCertificate(PointMap.identity(), partial, partial, "partial")
    with pytest.raises(CoverageError):
        verify_coe(cert, A, A, 1)


def test_iso_read_off():
    A = rotation(5)
    back = groupoid_iso_to_coe(coe_to_groupoid_iso(identity_coe(A)), A, A, range(5))
    T = enumerate_groupoid(A, range(5), 2)
    assert all(back.a(p.base, p.label) == p.label and back.phi(p.base) == p.base for p in T.arrows)
    assert round_trip_report(coe_from_conjugacy(shift_conjugacy(), A, A), A, A, 3, range(5)).exit_code == 0


def test_non_unit_preserving_iso_rejected():
    A = rotation(3)
    iso = GroupoidIsoCertificate(lambda p: Arrow(p.base, compose(p.label, Z(1))), lambda q: q)
    with pytest.raises(CertificateError):
        groupoid_iso_to_coe(iso, A, A, range(3))


def test_label_permuting_map_is_not_a_homomorphism():
    A = cyclic_rotation(5)
    swap = {1: 2, 2: 1}

    def relabel(p):
        return Arrow(p.base, Zn(5, swap.get(p.label.value, p.label.value)))

    T = enumerate_groupoid(A, range(5), 3)
    rep = verify_groupoid_iso(GroupoidIsoCertificate(relabel, relabel, "swap"), T, T)
    rec = assert_fails_with_witness(rep)[0]
    assert {"p", "q"} <= set(rec.witness)


def test_obstruction_candidates():
    A, B = catalog.build_pair("ex44_pair_nstar")
    rep = coe_obstruction_scan(A, B, candidate_bound=8)
    assert rep.exit_code == 0, rep.to_text()
    ident = rep.find("identity candidate is rejected").detail
    assert ident["rejected"] and not ident["stabilized"]
    pow2 = rep.find("2^k candidate is rejected").detail
    assert pow2["psi(n) = psi(1)^n"] and not pow2["surjective"]
