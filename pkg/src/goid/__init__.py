"""Transformation groupoids of injective Ore semigroup actions, checked on finite truncations."""

from .groups import *  # noqa: F401,F403
from .report import Record, Report, Status, Tri, digest
from .errors import (
    CertificateError,
    GoidError,
    NotComposableError,
    NotInQError,
    NotInSemigroupError,
    ParseError,
    UndeterminedError,
)
from .dynamics import (
    INF,
    NEG_INF,
    ActionInstance,
    FiniteSpace,
    OnePointInts,
    OnePointSemigroup,
    RectPoint,
    RectSpace,
    act,
    action_axioms_report,
    image_is_open,
    preimage,
)
from .groupoid import (
    Arrow,
    TruncatedGroupoid,
    compose_arrows,
    enumerate_groupoid,
    etale_report,
    freeness,
    groupoid_axioms_report,
    invert_arrow,
    isotropy,
    orbit,
    q_set,
    transfer,
)
from .dilation import canonicalize, dilated_act, reduction_iso, reduction_report
from .equivalence import (
    CoeCertificate,
    ConjugacyCertificate,
    PointMap,
    coe_from_conjugacy,
    coe_obstruction_scan,
    coe_to_groupoid_iso,
    groupoid_iso_to_coe,
    identity_coe,
    round_trip_report,
    verify_coe,
    verify_conjugacy,
    verify_groupoid_iso,
    verify_orbit_equivalence,
)
from .calg import calg_report, calg_truncation
from .compactification import (
    IndicatorProfile,
    check_thm41,
    check_thm43,
    limit_functional,
    profile,
    shift,
)
from .kernels import BACKEND
from . import catalog

__version__ = "0.1.0"
