"""Spaces, points and injective right semigroup actions.

Points are plain hashable values:

* finite spaces use ``int`` indices ``0..n-1``;
* one-point compactifications of integer carriers use ``int`` and :data:`INF`;
* one-point compactifications of a semigroup use :class:`GroupElement` and :data:`INF`;
* the rectangle ``[-inf, 0] x [0, 1]`` uses :class:`RectPoint`.

An :class:`ActionInstance` bundles a space, an :class:`OreContext` and a rule.
Rules satisfy ``act(a, act(b, x)) == act(b * a, x)``, i.e. they are right actions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import NotInSemigroupError, PointError, UndeterminedError
from .groups import (
    GroupElement,
    OreContext,
    compose,
    identity,
    in_semigroup,
    invert,
    word_ball,
)
from .report import Record, Report, Tri


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


class _NegInf:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "-inf"

    def __reduce__(self):
        return (_NegInf, ())


INF = _Infinity()
NEG_INF = _NegInf()


@dataclass(frozen=True)
class RectPoint:
    x: object
    y: Fraction

    def __post_init__(self):
        x = self.x if self.x is NEG_INF else Fraction(self.x)
        y = Fraction(self.y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __repr__(self):
        return f"({self.x}, {self.y})"


def point_key(p):
    """Total order on points of any kind, used for every canonical sort."""
    if p is INF:
        return (3,)
    if isinstance(p, bool):
        raise TypeError("bool is not a point")
    if isinstance(p, int):
        return (0, p)
    if isinstance(p, GroupElement):
        return (1, p.sort_key())
    if isinstance(p, RectPoint):
        return (2, (0,) if p.x is NEG_INF else (1, p.x), p.y)
    raise TypeError(f"not a point: {p!r}")


def sort_points(points):
    return sorted(points, key=point_key)


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class FiniteSpace:
    n: int
    labels: tuple = ()
    kind: str = field(default="finite", init=False)

    def contains(self, p) -> bool:
        return isinstance(p, int) and not isinstance(p, bool) and 0 <= p < self.n

    def points(self):
        return list(range(self.n))

    def is_isolated(self, p) -> bool:
        return True


@dataclass(frozen=True)
class OnePointInts:
    """``{minimum, minimum+1, ...} U {inf}`` with cofinite neighbourhoods of inf."""

    minimum: int = 0
    kind: str = field(default="onepoint", init=False)

    def contains(self, p) -> bool:
        if p is INF:
            return True
        return isinstance(p, int) and not isinstance(p, bool) and p >= self.minimum

    def window(self, size: int):
        return list(range(self.minimum, self.minimum + size)) + [INF]

    def is_isolated(self, p) -> bool:
        return p is not INF


@dataclass(frozen=True)
class OnePointSemigroup:
    """``P U {inf}`` for a semigroup P of an Ore context."""

    ctx: OreContext
    kind: str = field(default="onepoint", init=False)

    def contains(self, p) -> bool:
        if p is INF:
            return True
        return isinstance(p, GroupElement) and p.family == self.ctx.family and in_semigroup(self.ctx, p)

    def window(self, radius: int):
        pts = [g for g in word_ball(self.ctx, radius) if in_semigroup(self.ctx, g)]
        return pts + [INF]

    def is_isolated(self, p) -> bool:
        return p is not INF


@dataclass(frozen=True)
class RectSpace:
    """``[-inf, 0] x [0, 1]``; opens are generated by rational boxes."""

    kind: str = field(default="rect", init=False)

    def contains(self, p) -> bool:
        if not isinstance(p, RectPoint):
            return False
        return (p.x is NEG_INF or p.x <= 0) and 0 <= p.y <= 1

    def is_isolated(self, p) -> bool:
        return False


# ---------------------------------------------------------------------------
# action rules


def _as_int(m: GroupElement) -> int:
    v = m.value
    if isinstance(v, Fraction):
        if v.denominator != 1:
            raise NotInSemigroupError(f"{m!r} is not an integer")
        return v.numerator
    return v


class Rule:
    """Interface for built-in action rules."""

    name = "rule"

    def act(self, a, x):
        raise NotImplementedError

    def preimage(self, a, y):
        raise NotImplementedError

    def image_open(self, a):
        """``(Tri, note)`` deciding whether the image of ``theta_a`` is open."""
        raise NotImplementedError

    def bijective(self, ctx) -> bool:
        return False

    def labels_between(self, family, x, y):
        """Closed-form labels g with ``u(x, g) = y``.

        Returns ``(candidates, complete)`` or None when no closed form is
        known.  Candidates still need validating; ``complete`` means no other
        label can work, so an empty complete list rules ``y`` out of the orbit.
        """
        return None

    def describe(self) -> dict:
        return {"rule": self.name}


@dataclass(frozen=True)
class RotationRule(Rule):
    """``theta_m(x) = x + step*m mod n`` on the finite space ``Z/n``."""

    n: int
    step: int = 1
    name = "rotation"

    def act(self, a, x):
        return (x + self.step * a.value) % self.n

    def preimage(self, a, y):
        return (y - self.step * a.value) % self.n

    def image_open(self, a):
        return Tri.TRUE, "finite discrete space"

    def bijective(self, ctx) -> bool:
        return True

    def labels_between(self, family, x, y):
        from math import gcd

        if gcd(self.step, self.n) != 1:
            return None
        r = ((y - x) * pow(self.step, -1, self.n)) % self.n
        if family.kind == "cyclic" and family.n == self.n:
            return [GroupElement(family, r)], True
        return [GroupElement(family, r), GroupElement(family, r - self.n)], False

    def describe(self):
        return {"rule": self.name, "n": self.n, "step": self.step}


@dataclass(frozen=True)
class TableRule(Rule):
    """Finite-space action given by one image table per semigroup generator.

    ``theta_a`` for a general ``a`` is obtained by factoring ``a`` into the
    table generators (first factor applied first).
    """

    n: int
    tables: tuple  # ((generator, (images...)), ...)
    max_word: int = 64
    name = "table"

    def _factor(self, a):
        return _factor_word(tuple(g for g, _ in self.tables), a, self.max_word)

    def act(self, a, x):
        table = dict(self.tables)
        for s in self._factor(a):
            x = table[s][x]
        return x

    def preimage(self, a, y):
        hits = [x for x in range(self.n) if self.act(a, x) == y]
        return hits[0] if hits else None

    def image_open(self, a):
        return Tri.TRUE, "finite discrete space"

    def bijective(self, ctx) -> bool:
        return all(sorted(t) == list(range(self.n)) for _, t in self.tables)

    def describe(self):
        return {
            "rule": self.name,
            "tables": {str(g): list(t) for g, t in self.tables},
        }


_FACTOR_CACHE: dict = {}


def _factor_word(gens: tuple, a: GroupElement, max_word: int) -> tuple:
    key = (gens, a)
    hit = _FACTOR_CACHE.get(key)
    if hit is not None:
        return hit
    e = identity(a.family)
    if a == e:
        return ()
    if len(gens) == 1 and a.family.kind in ("int", "cyclic"):
        g = gens[0].value
        v = a.value
        if a.family.kind == "int" and g != 0 and v % g == 0 and v // g >= 0:
            word = (gens[0],) * (v // g)
            _FACTOR_CACHE[key] = word
            return word
    seen = {e: ()}
    frontier = [e]
    for _ in range(max_word):
        nxt = []
        for x in frontier:
            for s in gens:
                y = compose(x, s)
                if y not in seen:
                    seen[y] = seen[x] + (s,)
                    if y == a:
                        _FACTOR_CACHE[key] = seen[y]
                        return seen[y]
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    raise UndeterminedError(f"{a!r} is not a word of length <= {max_word} in {gens}", bound=max_word)


@dataclass(frozen=True)
class AddRule(Rule):
    """``theta_m(n) = n + m`` on an integer carrier, ``inf`` fixed."""

    name = "add"

    def act(self, a, x):
        return INF if x is INF else x + a.value

    def preimage(self, a, y, minimum=0):
        if y is INF:
            return INF
        return y - a.value

    def image_open(self, a):
        return Tri.TRUE, f"complement of the image is finite ({a.value} points)"

    def labels_between(self, family, x, y):
        if x is INF and y is INF:
            return [identity(family)], False
        if x is INF or y is INF:
            return [], True
        return [GroupElement(family, y - x)], True


@dataclass(frozen=True)
class MultRule(Rule):
    """``theta_m(n) = n m`` on an integer carrier, ``inf`` fixed."""

    name = "mult"

    def act(self, a, x):
        return INF if x is INF else x * _as_int(a)

    def preimage(self, a, y, minimum=0):
        if y is INF:
            return INF
        m = _as_int(a)
        return y // m if y % m == 0 else None

    def image_open(self, a):
        m = _as_int(a)
        if m == 1:
            return Tri.TRUE, "theta_e is the identity"
        return Tri.FALSE, (
            f"the image misses every non-multiple of {m}, an infinite set of isolated"
            " points, so it is not a neighbourhood of inf"
        )

    def labels_between(self, family, x, y):
        if x is INF and y is INF:
            return [identity(family)], False
        if x is INF or y is INF:
            return [], True
        if x == 0 or y == 0:
            if x == y:
                return [identity(family)], False
            return [], True
        return [GroupElement(family, Fraction(y, x))], True


@dataclass(frozen=True)
class SigmaRule(Rule):
    """``sigma_a(b) = b a`` on ``P U {inf}``, ``inf`` fixed."""

    ctx: OreContext
    name = "sigma"

    def act(self, a, x):
        return INF if x is INF else compose(x, a)

    def preimage(self, a, y):
        if y is INF:
            return INF
        x = compose(y, invert(a))
        return x if in_semigroup(self.ctx, x) else None

    def image_open(self, a):
        sg = self.ctx.semigroup
        if a.is_identity() or sg == "full":
            return Tri.TRUE, "P a = P"
        if sg == "nat":
            return Tri.TRUE, f"P \\ P a has {a.value} elements"
        if sg == "posint":
            return Tri.FALSE, "P \\ P a contains every non-multiple, an infinite set"
        return Tri.UNDETERMINED, "no closed form for finiteness of P \\ P a"

    def bijective(self, ctx) -> bool:
        return self.ctx.semigroup == "full"

    def labels_between(self, family, x, y):
        if x is INF and y is INF:
            return [identity(family)], False
        if x is INF or y is INF:
            return [], True
        return [compose(invert(x), y)], True


@dataclass(frozen=True)
class AffineRectRule(Rule):
    """``(x, y) * [[a, b], [0, 1]] = ((x - b)/a, y/a)`` on the rectangle."""

    name = "affine-rect"

    def act(self, g, p):
        a, b = g.value
        x = NEG_INF if p.x is NEG_INF else (p.x - b) / a
        return RectPoint(x, p.y / a)

    def preimage(self, g, q):
        a, b = g.value
        x = NEG_INF if q.x is NEG_INF else a * q.x + b
        y = a * q.y
        if (x is not NEG_INF and x > 0) or y > 1:
            return None
        return RectPoint(x, y)

    def image_box(self, g):
        """The image of ``theta_g``: ``[-inf, -b/a] x [0, 1/a]``."""
        a, b = g.value
        return (-b / a, 1 / a)

    def image_open(self, g):
        a, b = g.value
        xmax, ymax = self.image_box(g)
        if a == 1 and b == 0:
            return Tri.TRUE, "theta_e is the identity"
        if b != 0:
            corner = RectPoint(xmax, 0)
            return Tri.FALSE, (
                f"image [-inf, {xmax}] x [0, {ymax}] contains {corner} but no box around it"
            )
        corner = RectPoint(0, ymax)
        return Tri.FALSE, (
            f"image [-inf, {xmax}] x [0, {ymax}] contains {corner} but no box around it"
        )


# ---------------------------------------------------------------------------
# action instances


@dataclass(frozen=True, eq=False)
class ActionInstance:
    space: object
    ctx: OreContext
    rule: Rule
    name: str = "custom"

    def __repr__(self):
        return f"ActionInstance({self.name})"

    def describe(self) -> dict:
        d = {"name": self.name, "context": str(self.ctx), "space": self.space.kind}
        d.update(self.rule.describe())
        return d


def _check_label(A: ActionInstance, a: GroupElement):
    if not in_semigroup(A.ctx, a):
        raise NotInSemigroupError(f"{a!r} is not in the semigroup of {A.ctx}")


def act(A: ActionInstance, a: GroupElement, x):
    """The image ``theta_a(x)``."""
    _check_label(A, a)
    if not A.space.contains(x):
        raise PointError(f"{x!r} is not a point of {A.name}")
    return A.rule.act(a, x)


def preimage(A: ActionInstance, a: GroupElement, y) -> Optional[object]:
    """The unique ``x`` with ``theta_a(x) = y``, or None when y is not in the image."""
    _check_label(A, a)
    if not A.space.contains(y):
        return None
    x = A.rule.preimage(a, y)
    if x is None or not A.space.contains(x):
        return None
    return x


def image_is_open(A: ActionInstance, a: GroupElement) -> Tri:
    _check_label(A, a)
    return A.rule.image_open(a)[0]


def image_open_record(A: ActionInstance, a: GroupElement) -> Record:
    _check_label(A, a)
    tri, note = A.rule.image_open(a)
    rec = Record.tally(
        f"image of theta_{a} is open",
        "theta_a(X) open in X",
        1,
        [] if tri is Tri.TRUE else [note],
        detail={"decision": tri.value, "reason": note},
    )
    if tri is Tri.UNDETERMINED:
        rec.status = rec.status.UNDETERMINED
        rec.witness = note
    return rec


def is_homeomorphism_action(A: ActionInstance) -> bool:
    return A.rule.bijective(A.ctx)


def semigroup_sample(A: ActionInstance, radius: int = 2) -> list:
    """P-elements of the word ball, in canonical order."""
    out = []
    for g in word_ball(A.ctx, radius):
        try:
            if in_semigroup(A.ctx, g):
                out.append(g)
        except UndeterminedError:
            pass
    return out


RECT_XS = (NEG_INF, Fraction(-3), Fraction(-2), Fraction(-3, 2), Fraction(-1),
           Fraction(-1, 2), Fraction(-1, 4), Fraction(0))
RECT_YS = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


def rect_grid() -> list:
    """The fixed 40-point grid; it contains the special point (0, 1)."""
    return [RectPoint(x, y) for x in RECT_XS for y in RECT_YS]


def default_samples(A: ActionInstance, seed: int = 0, extra: int = 20) -> list:
    """Deterministic sample points: a structured base set plus seeded extras."""
    rng = random.Random(seed)
    sp = A.space
    if sp.kind == "finite":
        return sp.points()
    if isinstance(sp, OnePointInts):
        base = sp.window(11)
        more = [rng.randint(sp.minimum, 1000) for _ in range(extra)]
        return sort_points(set(base) | set(more))
    if isinstance(sp, OnePointSemigroup):
        return sp.window(2)
    if sp.kind == "rect":
        pts = set(rect_grid())
        for _ in range(extra):
            x = Fraction(-rng.randint(0, 40), rng.randint(1, 8))
            y = Fraction(rng.randint(0, 8), 8)
            pts.add(RectPoint(x, y))
        return sort_points(pts)
    raise ValueError(f"no default samples for {sp!r}")


def action_axioms_report(A: ActionInstance, samples=None, labels=None) -> Report:
    """Identity, right-composition and injectivity checks with witnesses."""
    samples = default_samples(A) if samples is None else list(samples)
    labels = semigroup_sample(A) if labels is None else list(labels)
    rep = Report("action-axioms")
    e = A.ctx.e

    fails = [(x, act(A, e, x)) for x in samples if act(A, e, x) != x]
    rep.add(Record.tally("theta_e is the identity", "theta_e = id_X", len(samples), fails))

    checked, fails = 0, []
    for a in labels:
        for b in labels:
            ba = compose(b, a)
            for x in samples:
                checked += 1
                lhs = act(A, a, act(A, b, x))
                rhs = act(A, ba, x)
                if lhs != rhs:
                    fails.append({"a": a, "b": b, "x": x, "theta_a theta_b": lhs, "theta_ba": rhs})
    rep.add(Record.tally("right action law", "theta_a theta_b = theta_ba", checked, fails))

    if A.space.kind == "finite":
        pts = A.space.points()
        exhaustive = True
    else:
        pts = samples
        exhaustive = False
    checked, fails = 0, []
    for a in labels:
        seen = {}
        for x in pts:
            checked += 1
            y = act(A, a, x)
            if y in seen and seen[y] != x:
                fails.append({"a": a, "x1": seen[y], "x2": x, "image": y})
            seen.setdefault(y, x)
    rep.add(Record.tally(
        "each theta_a is injective", "theta_a injective", checked, fails,
        detail={"exhaustive": exhaustive},
    ))
    return rep
