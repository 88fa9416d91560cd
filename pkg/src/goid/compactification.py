"""Indicator profiles of translated semigroups and actions on compactifications.

A profile records, on a finite window ``W`` of G, the bits of the indicator
of ``S^-1 h``: ``k`` is in ``S^-1 h`` exactly when ``h k^-1`` lies in S.  The
shift ``beta_g(xi)(k) = xi(k g^-1)`` acts on profiles; shifted profiles are
only known on the part of the window whose translate stays inside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .dynamics import INF, ActionInstance, OnePointSemigroup, SigmaRule, act, image_is_open
from .equivalence import ConjugacyCertificate, PointMap, verify_conjugacy
from .errors import NotInSemigroupError, UndeterminedError
from .groupoid import default_window, q_contains
from .groups import OreContext, compose, in_semigroup, invert, word_ball, word_length
from .report import Record, Report, Status, Tri


@dataclass(frozen=True)
class IndicatorProfile:
    window: tuple
    bits: tuple
    origin: str = ""

    def __post_init__(self):
        if len(self.window) != len(self.bits):
            raise ValueError("window and bits differ in length")

    def as_dict(self) -> dict:
        return dict(zip(self.window, self.bits))

    def __getitem__(self, k):
        return self.as_dict()[k]

    def agrees_with(self, other: "IndicatorProfile") -> bool:
        """Equality on the common window (an empty overlap never agrees)."""
        mine, theirs = self.as_dict(), other.as_dict()
        common = mine.keys() & theirs.keys()
        return bool(common) and all(mine[k] == theirs[k] for k in common)

    def first_disagreement(self, other: "IndicatorProfile"):
        mine, theirs = self.as_dict(), other.as_dict()
        for k in self.window:
            if k in theirs and mine[k] != theirs[k]:
                return k
        return None


def profile(S: OreContext, h, window) -> IndicatorProfile:
    """Bits of ``S^-1 h`` on ``window``; needs ``h`` in S."""
    if not in_semigroup(S, h):
        raise NotInSemigroupError(f"{h!r} is not in {S}")
    win = tuple(window)
    bits = tuple(int(in_semigroup(S, compose(h, invert(k)))) for k in win)
    return IndicatorProfile(win, bits, f"S^-1 {h!r}")


def shift(g, p: IndicatorProfile) -> IndicatorProfile:
    """``beta_g(p)(k) = p(k g^-1)`` on window points whose translate stays in the window."""
    table = p.as_dict()
    gi = invert(g)
    win, bits = [], []
    for k in p.window:
        src = compose(k, gi)
        if src in table:
            win.append(k)
            bits.append(table[src])
    return IndicatorProfile(tuple(win), tuple(bits), f"beta_{g!r}({p.origin})")


def _length(ctx, g) -> int:
    n = word_length(ctx, g)
    return n if n is not None else 10**9


def _members(S: OreContext, ball) -> list:
    out = []
    for g in ball:
        try:
            if in_semigroup(S, g):
                out.append(g)
        except UndeterminedError:
            pass
    return out


def check_thm41(ctx: OreContext, S: OreContext, a, radius: int = 8, sample_count: int = 40) -> Report:
    """The image of the shift by ``a`` is cut out by the bit at ``a``.

    ``ctx`` carries G, P and the word metric; ``S`` is the second semigroup
    of the same group.  Profiles are compared on the word ball of ``radius``.
    """
    rep = Report("compactify-check")
    window = word_ball(ctx, radius)

    # hypotheses, on generators and a sample of S
    p_gens = list(ctx.semigroup_generators())
    s_near = _members(S, word_ball(ctx, 2))
    fails = [{"p": p, "problem": "p not in S"} for p in p_gens if not in_semigroup(S, p)]
    checked = len(p_gens)
    for s in list(S.semigroup_generators()) + s_near:
        for p in p_gens:
            checked += 1
            if not in_semigroup(S, compose(s, p)):
                fails.append({"s": s, "p": p, "problem": "s p not in S"})
    hyp = Record.tally("P is inside S and S P is inside S", "P <= S, S P <= S", checked, fails,
                       hypothesis=True)
    rep.add(hyp)
    if not hyp.passed:
        rep.add(Record("image of beta_a is {xi : xi(a) = 1}", "beta_a(Y~) = {xi in Y~ : xi(a) = 1}",
                       Status.UNDETERMINED, 0,
                       "claim not evaluated: hypothesis failed", {"radius": radius}))
        return rep
    if not in_semigroup(ctx, a):
        raise NotInSemigroupError(f"{a!r} is not in P")

    # sampled h include elements well outside the window, whose profiles
    # approximate limit points of the closure
    far = radius + _length(ctx, a) + 2
    hs = _members(S, word_ball(ctx, far))[:sample_count] + _members(S, word_ball(ctx, far))[-4:]
    hs = list(dict.fromkeys(hs))

    fails, checked = [], 0
    for h in hs:
        shifted = shift(a, profile(S, h, window))
        checked += 1
        table = shifted.as_dict()
        if a in table and table[a] != 1:
            fails.append({"h": h, "problem": "bit at a is 0"})
        if not shifted.agrees_with(profile(S, compose(h, a), window)):
            fails.append({"h": h, "problem": "beta_a(S^-1 h) differs from S^-1 ha"})
    rep.add(Record.tally("shifted profiles carry the bit at a", "beta_a(xi)(a) = xi(e) = 1",
                         checked, fails, bound={"radius": radius}))

    # converse: profiles with bit 1 at a are shifts of scanned profiles
    scan = _members(S, word_ball(ctx, far + _length(ctx, a)))
    fails, misses, checked = [], [], 0
    for h in hs:
        target = profile(S, h, window)
        if target[a] != 1:
            continue
        checked += 1
        hit = next((k for k in scan if shift(a, profile(S, k, window)).agrees_with(target)), None)
        if hit is None:
            misses.append({"h": h})
    rec = Record.tally("profiles with bit 1 at a lie in the image of beta_a",
                       "{xi in Y~ : xi(a) = 1} <= beta_a(Y~)", checked, fails,
                       bound={"radius": radius, "scan_radius": far + _length(ctx, a)})
    if misses and not fails:
        rec.status = Status.UNDETERMINED
        rec.witness = misses[0]
        rec.detail["unmatched"] = len(misses)
    rep.add(rec)
    return rep


def limit_functional(xi, window) -> Optional[object]:
    """The eventual value of ``xi`` along a window in word-length order.

    The second half of the window serves as the tail; the finite exceptional
    set is everything before it.  Returns None when the tail is not constant.
    """
    win = list(window)
    table = xi if isinstance(xi, dict) else {k: xi(k) for k in win}
    tail = win[len(win) // 2:]
    values = {table[k] for k in tail}
    if len(values) != 1:
        return None
    return values.pop()


# ---------------------------------------------------------------------------
# conjugacy with the one-point compactification


def sigma_instance(ctx: OreContext) -> ActionInstance:
    """``P`` acting on ``P U {inf}`` by right multiplication."""
    return ActionInstance(OnePointSemigroup(ctx), ctx, SigmaRule(ctx), f"sigma{ctx}")


def _lambda_map(A: ActionInstance, x_inf, x0, scan) -> PointMap:
    table = {}
    for m in scan:
        table.setdefault(act(A, m, x0), m)

    def forward(m):
        return x_inf if m is INF else act(A, m, x0)

    def inverse(y):
        if y == x_inf:
            return INF
        if y not in table:
            raise KeyError(f"{y!r} is not rho_a(x0) for a scanned a")
        return table[y]

    return PointMap(forward, inverse, "Lambda")


def check_thm43(A: ActionInstance, x_inf, x0, radius: int = 3, window=None):
    """Evidence that ``a -> rho_a(x0)``, ``inf -> x_inf`` conjugates sigma with rho.

    Returns the report and the conjugacy certificate ``(Lambda, id_P)``.
    """
    ctx = A.ctx
    rep = Report("compactify-check")
    ball = word_ball(ctx, radius)
    P = _members(ctx, ball)
    window = list(window) if window is not None else default_window(A)

    gens = list(ctx.semigroup_generators())
    fails = []
    for s in gens:
        status = image_is_open(A, s)
        if status is not Tri.TRUE:
            fails.append({"generator": s, "image_open": status.value})
    rep.add(Record.tally("every rho_a has open image", "P \\ P a finite", len(gens), fails,
                         hypothesis=True))

    fails = [{"g": g} for g in ball if not q_contains(A, x_inf, g)]
    rep.add(Record.tally("x_inf has full Q-set on the ball", "Q_{x_inf} = G", len(ball), fails,
                         bound={"radius": radius}, hypothesis=True))

    # every other window point must miss some label; search further out for it
    cap = max(4 * radius, 32)
    deep = word_ball(ctx, cap)
    others = [x for x in window if x != x_inf and all(q_contains(A, x, g) for g in deep)]
    rep.add(Record.tally("x_inf is the only window point with full Q-set", "unique x_inf",
                         len(window), [{"x_inf": x_inf, "also_full": x} for x in others],
                         bound={"radius": cap}, hypothesis=True))

    images = {}
    fails = []
    for m in P:
        y = act(A, m, x0)
        if y in images:
            fails.append({"m1": images[y], "m2": m, "rho(x0)": y})
        images[y] = m
    rep.add(Record.tally("a -> rho_a(x0) is injective", "injective orbit map", len(P), fails,
                         hypothesis=True))

    # dense range: isolated window points missed by the orbit map, at two radii
    def missed(r):
        hit = {act(A, m, x0) for m in _members(ctx, word_ball(ctx, r))}
        return [x for x in window if A.space.is_isolated(x) and x not in hit]

    small, large = missed(radius), missed(2 * radius)
    shrinks = set(large) <= set(small) and (len(large) < len(small) or not large)
    rep.add(Record.tally("orbit of x0 exhausts the isolated window points", "dense range",
                         len(window), [] if shrinks else [{"missed": small, "missed_at_2r": large}],
                         detail={"missed": small, "missed_at_2r": large}, hypothesis=True))

    if any(r.hypothesis and not r.passed for r in rep.records):
        rep.add(Record("Lambda conjugates sigma with rho", "rho_a Lambda = Lambda sigma_a",
                       Status.UNDETERMINED, 0, "claim not evaluated: hypothesis failed"))
        return rep, None

    fails = [{"a": a} for a in P if act(A, a, x_inf) != x_inf]
    rep.add(Record.tally("rho_a fixes x_inf", "rho_a(x_inf) = x_inf", len(P), fails))

    Lam = _lambda_map(A, x_inf, x0, _members(ctx, word_ball(ctx, 4 * radius)))
    fails, checked = [], 0
    for a in P:
        for m in P + [INF]:
            checked += 1
            sig = INF if m is INF else compose(m, a)
            if act(A, a, Lam(m)) != Lam(sig):
                fails.append({"a": a, "m": m})
    rep.add(Record.tally("Lambda intertwines sigma and rho", "rho_a Lambda(m) = Lambda(m a)",
                         checked, fails))

    # Q-sets along powers of a generator grow towards G
    chain, fails = [], []
    if gens:
        s = gens[0]
        m = ctx.e
        prev = None
        for _ in range(radius + 1):
            q = frozenset(g for g in ball if q_contains(A, act(A, m, x0), g))
            chain.append(len(q))
            if prev is not None and not prev <= q:
                fails.append({"power_of": s, "lost": sorted(prev - q, key=lambda g: g.sort_key())})
            prev = q
            m = compose(m, s)
    rep.add(Record.tally("Q-sets increase along the orbit of x0", "Q_{rho_a x0} -> G",
                         len(chain), fails, detail={"sizes": chain}, hypothesis=True))

    ident = lambda m: m  # noqa: E731
    cert = ConjugacyCertificate(Lam, ident, ident, "Lambda")
    return rep, cert


def verify_thm43_certificate(A: ActionInstance, cert: ConjugacyCertificate, radius: int = 3) -> Report:
    sigma = sigma_instance(A.ctx)
    return verify_conjugacy(cert, sigma, A, radius=radius)
