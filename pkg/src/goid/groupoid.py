"""The transformation groupoid of an injective right Ore-semigroup action.

An arrow ``(x, g)`` exists when ``g`` lies in ``Q_x``: writing ``g = a b^-1``
with ``a, b`` in P, the point ``theta_a(x)`` must lie in the image of
``theta_b``.  Its source is the transfer ``u(x, g)``, the unique ``y`` with
``theta_a(x) = theta_b(y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .dynamics import (
    NEG_INF,
    ActionInstance,
    OnePointInts,
    OnePointSemigroup,
    act,
    default_samples,
    image_open_record,
    preimage,
    sort_points,
)
from .errors import NotComposableError, NotInQError
from .groups import (
    GroupElement,
    ball_saturated,
    brute_force_decompositions,
    compose,
    in_semigroup,
    invert,
    ore_decompose,
    word_ball,
)
from .report import Record, Report, Status, Tri


@dataclass(frozen=True)
class Arrow:
    base: object
    label: GroupElement

    def __repr__(self):
        return f"({self.base!r}, {self.label!r})"


def _transfer_via(A: ActionInstance, x, a, b) -> Optional[object]:
    return preimage(A, b, act(A, a, x))


def q_contains(A: ActionInstance, x, g: GroupElement) -> bool:
    """Whether ``g`` lies in ``Q_x``."""
    a, b = ore_decompose(A.ctx, g)
    return _transfer_via(A, x, a, b) is not None


def transfer(A: ActionInstance, x, g: GroupElement):
    """The transfer ``u(x, g)``; raises :class:`NotInQError` when ``g`` is not in ``Q_x``."""
    a, b = ore_decompose(A.ctx, g)
    y = _transfer_via(A, x, a, b)
    if y is None:
        raise NotInQError(f"{g!r} is not in Q_{x!r}")
    return y


def try_transfer(A: ActionInstance, x, g: GroupElement):
    a, b = ore_decompose(A.ctx, g)
    return _transfer_via(A, x, a, b)


def source(A: ActionInstance, p: Arrow):
    return transfer(A, p.base, p.label)


def arrow(A: ActionInstance, x, g: GroupElement) -> Arrow:
    if not q_contains(A, x, g):
        raise NotInQError(f"{g!r} is not in Q_{x!r}")
    return Arrow(x, g)


def compose_arrows(A: ActionInstance, p: Arrow, q: Arrow) -> Arrow:
    s = source(A, p)
    if s != q.base:
        raise NotComposableError(f"{p} and {q} are not composable: u = {s!r} != {q.base!r}")
    return Arrow(p.base, compose(p.label, q.label))


def invert_arrow(A: ActionInstance, p: Arrow) -> Arrow:
    return Arrow(source(A, p), invert(p.label))


def label_cocycle(p: Arrow) -> GroupElement:
    """The canonical cocycle ``c(x, g) = g``."""
    return p.label


def orbit(A: ActionInstance, x, radius: int) -> list:
    pts = set()
    for g in word_ball(A.ctx, radius):
        y = try_transfer(A, x, g)
        if y is not None:
            pts.add(y)
    return sort_points(pts)


def isotropy(A: ActionInstance, x, radius: int) -> list:
    return [g for g in word_ball(A.ctx, radius) if try_transfer(A, x, g) == x]


def q_set(A: ActionInstance, x, radius: int) -> list:
    """``Q_x`` intersected with the word ball, in canonical order."""
    return [g for g in word_ball(A.ctx, radius) if try_transfer(A, x, g) is not None]


def _finite_orbit(A: ActionInstance, x) -> set:
    """The orbit of ``x`` in a finite space: the class of ``x`` under
    ``y ~ theta_s(y)`` for semigroup generators ``s``."""
    gens = A.ctx.semigroup_generators()
    pts = A.space.points()
    parent = {p: p for p in pts}

    def root(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for s in gens:
        for p in pts:
            parent[root(p)] = root(act(A, s, p))
    rx = root(x)
    return {p for p in pts if root(p) == rx}


def find_label(A: ActionInstance, x, y, radius: int, cap: Optional[int] = None):
    """Search for ``g`` with ``u(x, g) = y``.

    Returns ``(Tri, label, how)``.  Closed-form labels are tried first; then
    word balls from ``radius`` up to ``cap``.  FALSE is only returned when a
    closed form, the orbit closure of a finite space or a saturated ball
    proves that no label exists.
    """
    hint = A.rule.labels_between(A.ctx.family, x, y)
    if hint is not None:
        cands, complete = hint
        for g in cands:
            if try_transfer(A, x, g) == y:
                return Tri.TRUE, g, "closed form"
        if complete:
            return Tri.FALSE, None, "closed form"
    if A.space.kind == "finite" and y not in _finite_orbit(A, x):
        return Tri.FALSE, None, "orbit closure"
    cap = radius if cap is None else max(cap, radius)
    r = radius
    while True:
        for g in word_ball(A.ctx, r):
            if try_transfer(A, x, g) == y:
                return Tri.TRUE, g, f"ball radius {r}"
        if r >= cap or ball_saturated(A.ctx, r):
            break
        r = min(cap, r + 1)
    if ball_saturated(A.ctx, r):
        return Tri.FALSE, None, "saturated ball"
    return Tri.UNDETERMINED, None, f"ball radius {r}"


# ---------------------------------------------------------------------------
# truncations


@dataclass
class TruncatedGroupoid:
    action: ActionInstance
    window: tuple
    radius: int
    arrows: tuple
    index: dict = field(default_factory=dict, repr=False)
    sources: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = {p: i for i, p in enumerate(self.arrows)}
        self._window_set = frozenset(self.window)

    def __len__(self):
        return len(self.arrows)

    def __contains__(self, p):
        return p in self.index

    def in_window(self, x) -> bool:
        return x in self._window_set

    def source_of(self, p: Arrow):
        s = self.sources.get(p)
        if s is None:
            s = self.sources[p] = source(self.action, p)
        return s

    def at(self, x) -> list:
        return [p for p in self.arrows if p.base == x]

    @property
    def ball(self) -> tuple:
        return word_ball(self.action.ctx, self.radius)

    def exactly_finite(self) -> bool:
        """True when the window is the whole (finite) space and the ball is all of G."""
        A = self.action
        return (
            A.space.kind == "finite"
            and len(self.window) == A.space.n
            and ball_saturated(A.ctx, self.radius)
        )


def enumerate_groupoid(A: ActionInstance, window, radius: int) -> TruncatedGroupoid:
    """All arrows based in ``window`` with labels in the radius ball."""
    win = tuple(sort_points(set(window)))
    ball = word_ball(A.ctx, radius)
    arrows = []
    sources = {}
    for x in win:
        for g in ball:
            y = try_transfer(A, x, g)
            if y is not None:
                p = Arrow(x, g)
                arrows.append(p)
                sources[p] = y
    T = TruncatedGroupoid(A, win, radius, tuple(arrows))
    T.sources.update(sources)
    return T


def default_window(A: ActionInstance, size: int = 6) -> list:
    sp = A.space
    if sp.kind == "finite":
        return sp.points()
    if isinstance(sp, OnePointInts):
        return sp.window(size)
    if isinstance(sp, OnePointSemigroup):
        return sp.window(1)
    return default_samples(A)


# ---------------------------------------------------------------------------
# reports


def etale_report(A: ActionInstance, labels=None) -> Report:
    """One openness record per semigroup generator (or per given label)."""
    rep = Report("check-etale")
    labels = list(labels) if labels is not None else list(A.ctx.semigroup_generators())
    for a in labels:
        rep.add(image_open_record(A, a))
    return rep


def decomposition_independence_report(T: TruncatedGroupoid, search_radius: Optional[int] = None) -> Report:
    """Compare the canonical transfer against every brute-force decomposition.

    Both membership in ``Q_x`` and the transfer itself are compared, for
    every ``(x, g)`` with ``x`` in the window and ``g`` in the ball.
    """
    A = T.action
    sr = search_radius if search_radius is not None else T.radius + 1
    rep = Report("decomposition-independence")
    checked, fails, missing = 0, [], []
    for x in T.window:
        for g in T.ball:
            canon = try_transfer(A, x, g)
            pairs = brute_force_decompositions(A.ctx, g, sr)
            if not pairs:
                missing.append(g)
                continue
            for m, n in pairs:
                checked += 1
                other = _transfer_via(A, x, m, n)
                if other != canon:
                    fails.append({"x": x, "g": g, "decomposition": (m, n),
                                  "canonical": canon, "independent": other})
    rep.add(Record.tally(
        "transfer is independent of the decomposition",
        "u(x,g) well defined", checked, fails, bound={"search_radius": sr},
        detail={"labels_without_independent_decomposition": len(set(missing))},
    ))
    return rep


def _safe(fn, *args):
    """``fn(*args)``, or the error text when the groupoid laws break down."""
    try:
        return fn(*args)
    except (NotComposableError, NotInQError) as exc:
        return f"error: {exc}"


class _Composer:
    """Memoized composition on arrows with points and labels interned as integers.

    Triples revisit the same few points and labels many times over, and hashing
    rational data dominates a naive sweep; interned ids keep it cheap while
    every composite is still derived from the transfer and the group product.
    """

    def __init__(self, A: ActionInstance):
        self.A = A
        self.points: list = []
        self.labels: list = []
        self._pid: dict = {}
        self._lid: dict = {}
        self._src: dict = {}
        self._prod: dict = {}
        self._inv: dict = {}

    @staticmethod
    def _intern(table, items, v) -> int:
        i = table.get(v)
        if i is None:
            i = table[v] = len(items)
            items.append(v)
        return i

    def point(self, x) -> int:
        return self._intern(self._pid, self.points, x)

    def label(self, g) -> int:
        return self._intern(self._lid, self.labels, g)

    def key(self, p: Arrow):
        return (self.point(p.base), self.label(p.label))

    def arrow(self, k) -> Arrow:
        return Arrow(self.points[k[0]], self.labels[k[1]])

    def try_source(self, k):
        """Interned ``u(x, g)``, or -1 when ``g`` is not in ``Q_x``."""
        s = self._src.get(k)
        if s is None:
            y = try_transfer(self.A, self.points[k[0]], self.labels[k[1]])
            s = self._src[k] = -1 if y is None else self.point(y)
        return s

    def source(self, k) -> int:
        s = self.try_source(k)
        if s < 0:
            raise NotInQError(f"{self.labels[k[1]]!r} is not in Q_{self.points[k[0]]!r}")
        return s

    def product(self, i: int, j: int) -> int:
        pair = (i, j)
        r = self._prod.get(pair)
        if r is None:
            r = self._prod[pair] = self.label(compose(self.labels[i], self.labels[j]))
        return r

    def invert(self, k):
        j = self._inv.get(k[1])
        if j is None:
            j = self._inv[k[1]] = self.label(invert(self.labels[k[1]]))
        return (self.source(k), j)

    def compose(self, k, m):
        if self.source(k) != m[0]:
            raise NotComposableError(f"{self.arrow(k)} and {self.arrow(m)} are not composable")
        return (k[0], self.product(k[1], m[1]))


def groupoid_axioms_report(T: TruncatedGroupoid) -> Report:
    A = T.action
    rep = Report("groupoid-axioms")
    C = _Composer(A)
    by_base: dict = {}
    for p in T.arrows:
        by_base.setdefault(p.base, []).append(p)

    # composable pairs with both factors in the truncation
    pairs = []
    for p in T.arrows:
        s = T.source_of(p)
        for q in by_base.get(s, ()):
            pairs.append((p, q))

    keyed = {b: [C.key(p) for p in ps] for b, ps in by_base.items()}
    fails, checked = [], 0
    for p in T.arrows:
        kp = C.key(p)
        for q in by_base.get(T.source_of(p), ()):
            kq = C.key(q)
            for kr in keyed.get(T.source_of(q), ()):
                checked += 1
                try:
                    lhs = C.compose(C.compose(kp, kq), kr)
                except (NotComposableError, NotInQError) as exc:
                    lhs = f"error: {exc}"
                try:
                    rhs = C.compose(kp, C.compose(kq, kr))
                except (NotComposableError, NotInQError) as exc:
                    rhs = f"error: {exc}"
                if lhs != rhs:
                    fails.append({"p": p, "q": q, "r": C.arrow(kr)})
    rep.add(Record.tally("composition is associative", "groupoid associativity", checked, fails))

    fails, checked = [], 0
    for p in T.arrows:
        checked += 1
        inv = invert_arrow(A, p)
        if not q_contains(A, inv.base, inv.label):
            fails.append({"arrow": p, "inverse": inv, "problem": "inverse label not in Q"})
            continue
        if _safe(invert_arrow, A, inv) != p:
            fails.append({"arrow": p, "problem": "double inverse"})
            continue
        left = _safe(compose_arrows, A, p, inv)
        right = _safe(compose_arrows, A, inv, p)
        if left != Arrow(p.base, A.ctx.e) or right != Arrow(T.source_of(p), A.ctx.e):
            fails.append({"arrow": p, "p p^-1": left, "p^-1 p": right})
    rep.add(Record.tally("inverse laws", "(x,g)^-1 = (u(x,g), g^-1)", checked, fails))

    fails, checked = [], 0
    for p, q in pairs:
        checked += 1
        kp, kq = C.key(p), C.key(q)
        lhs = _safe(lambda: C.invert(C.compose(kp, kq)))
        rhs = _safe(lambda: C.compose(C.invert(kq), C.invert(kp)))
        if lhs != rhs:
            show = lambda v: v if isinstance(v, str) else C.arrow(v)  # noqa: E731
            fails.append({"p": p, "q": q, "(pq)^-1": show(lhs), "q^-1 p^-1": show(rhs)})
    rep.add(Record.tally("inverse of a product", "(pq)^-1 = q^-1 p^-1", checked, fails))

    fails, checked = [], 0
    for p, q in pairs:
        checked += 1
        pq = _safe(compose_arrows, A, p, q)
        if isinstance(pq, str) or label_cocycle(pq) != compose(label_cocycle(p), label_cocycle(q)):
            fails.append({"p": p, "q": q})
    rep.add(Record.tally("label map is a homomorphism", "c(x,g) = g", checked, fails))

    rep.extend(cocycle_identity_report(T))
    return rep


def cocycle_identity_report(T: TruncatedGroupoid) -> Report:
    """``u(u(x,g),h) = u(x,gh)`` for window ``x`` and ball labels ``g, h``.

    Also checks the membership direction: with ``g`` in ``Q_x``, ``h`` lies in
    ``Q_{u(x,g)}`` exactly when ``gh`` lies in ``Q_x``.
    """
    A = T.action
    rep = Report("cocycle-identity")
    C = _Composer(A)
    ball = [C.label(h) for h in T.ball]
    fails, checked = [], 0
    for p in T.arrows:
        kp = C.key(p)
        y = C.point(T.source_of(p))
        for h in ball:
            checked += 1
            lhs = C.try_source((y, h))
            rhs = C.try_source((kp[0], C.product(kp[1], h)))
            if lhs != rhs:
                show = lambda i: None if i < 0 else C.points[i]  # noqa: E731
                fails.append({"x": p.base, "g": p.label, "h": C.labels[h],
                              "u(u(x,g),h)": show(lhs), "u(x,gh)": show(rhs)})
    rep.add(Record.tally("cocycle identity", "u(u(x,g),h) = u(x,gh)", checked, fails))
    return rep


def freeness(A: ActionInstance, radius: int, window=None) -> tuple:
    """Topological freeness as ``(Tri, Record)``.

    Finite spaces are decided point by point.  On one-point compactifications
    the isolated points are dense, so freeness of every isolated window point
    certifies density.  On the rectangle the non-free points form a closed
    nowhere dense set, checked here against the sample window.
    """
    sp = A.space
    claim = "topologically free"
    anchor = "free points are dense"
    if sp.kind == "finite":
        return _finite_freeness(A, radius, claim, anchor)
    if sp.kind == "onepoint":
        pts = [x for x in (window or default_window(A, 11)) if sp.is_isolated(x)]
        witnesses = []
        for x in pts:
            for g in isotropy(A, x, radius):
                if not g.is_identity():
                    witnesses.append({"x": x, "g": g})
                    break
        rec = Record.tally(claim, anchor, len(pts), witnesses, bound={"radius": radius},
                           detail={"method": "isolated points are dense"})
        return (Tri.FALSE if witnesses else Tri.TRUE), rec
    if sp.kind == "rect":
        pts = list(window or default_samples(A))
        free_pts, fixed = 0, []
        bad = []
        for x in pts:
            nontriv = [g for g in isotropy(A, x, radius) if not g.is_identity()]
            on_locus = x.x is NEG_INF or x.y == 0
            if nontriv and not on_locus:
                bad.append({"x": x, "g": nontriv[0]})
            elif nontriv:
                fixed.append(x)
            else:
                free_pts += 1
        rec = Record.tally(
            claim, anchor, len(pts), bad, bound={"radius": radius},
            detail={
                "method": "non-free points lie in {y = 0} U {x = -inf}, a closed nowhere dense set",
                "free_samples": free_pts,
                "non_free_samples": len(fixed),
                "continuum": "sample-verified only",
            },
        )
        return (Tri.FALSE if bad else Tri.TRUE), rec
    raise ValueError(f"unsupported space {sp!r}")


def _finite_freeness(A, radius, claim, anchor):
    r = radius
    n = A.space.n
    cap = max(radius, 2 * n + 2)
    while True:
        for x in A.space.points():
            # report a semigroup element when one fixes x
            nontrivial = [g for g in isotropy(A, x, r) if not g.is_identity()]
            nontrivial.sort(key=lambda g: not in_semigroup(A.ctx, g))
            if nontrivial:
                rec = Record.tally(claim, anchor, 1, [{"x": x, "g": nontrivial[0]}], bound={"radius": r})
                return Tri.FALSE, rec
        if ball_saturated(A.ctx, r):
            rec = Record.tally(claim, anchor, n, [], bound={"radius": r},
                               detail={"exhaustive": True})
            return Tri.TRUE, rec
        if r >= cap:
            rec = Record(claim, anchor, Status.UNDETERMINED, n, "no nontrivial isotropy found", {"radius": r})
            return Tri.UNDETERMINED, rec
        r = min(cap, r * 2 if r else 1)


def is_topologically_free(A: ActionInstance, radius: int) -> Tri:
    return freeness(A, radius)[0]
