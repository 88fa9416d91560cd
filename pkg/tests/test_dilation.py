from goid import catalog
from goid.dilation import (
    DilationClass, canonicalize, dilated_act, group_dilation_act, homeomorphism_dilation_report,
    reduction_inverse, reduction_iso, reduction_report, relation_report, unit_class,
)
from goid.dynamics import INF
from goid.errors import NotHomeomorphismError
from goid.groupoid import Arrow, enumerate_groupoid
from goid.groups import Z
from helpers import assert_fails_with_witness, rotation

import pytest


def test_canonical_forms(derived):
    A = catalog.build("ex44_add_nstar")
    x, g = derived["canonical.add.3.2"]
    assert canonicalize(A, (3, Z(2))) == DilationClass(x, Z(g))
    assert canonicalize(A, (4, Z(0))) == DilationClass(4, Z(0))


def test_dilated_action(derived):
    A = catalog.build("ex44_add_nstar")
    c = DilationClass(3, Z(0))
    assert dilated_act(A, c, Z(0)) == c
    x, g = derived["dilated.add.3.0.-2"]
    assert dilated_act(A, c, Z(-2)) == DilationClass(x, Z(g))
    assert dilated_act(A, dilated_act(A, c, Z(4)), Z(-6)) == dilated_act(A, c, Z(-2))


def test_reduction_map(derived):
    A = catalog.build("ex44_add_nstar")
    want = derived["reduction.add.3.-2"]
    cls, g = reduction_iso(A, Arrow(3, Z(-2)))
    assert (cls.point, cls.label.value, g.value) == tuple(want["image"])
    sx, sg = want["source_class"]
    assert dilated_act(A, cls, g) == DilationClass(sx, Z(sg))
    assert reduction_iso(A, Arrow(INF, Z(0))) == (unit_class(A, INF), Z(0))
    T = enumerate_groupoid(A, [1, 2, 3, INF], 2)
    assert all(reduction_inverse(A, reduction_iso(A, p)) == p for p in T.arrows)


def test_group_dilation(derived):
    A = rotation(5)
    assert group_dilation_act(A, Z(-3), 1) == derived["dilation.rot5.-3.1"]
    assert group_dilation_act(A, Z(0), 4) == 4
    assert homeomorphism_dilation_report(A, range(5), 3).exit_code == 0
    with pytest.raises(NotHomeomorphismError):
        group_dilation_act(catalog.build("ex44_add_nstar"), Z(1), 2)


def test_relation_report():
    A = catalog.build("ex44_add_n")
    pairs = [(x, Z(g)) for x in range(4) for g in range(-2, 3)]
    assert relation_report(A, pairs).exit_code == 0


def test_reduction_with_tampered_sources_fails():
    T = enumerate_groupoid(rotation(5), range(5), 2)
    p = T.arrows[3]
    T.sources[p] = (T.sources[p] + 1) % 5
    bad = assert_fails_with_witness(reduction_report(T))
    assert bad[0].witness["arrow"] == p
    assert reduction_report(enumerate_groupoid(rotation(5), range(5), 2)).exit_code == 0
