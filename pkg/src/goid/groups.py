"""Exact arithmetic for the supported ambient groups and their Ore semigroups.

Four group families are supported:

``int``     the additive integers
``posrat``  the multiplicative positive rationals
``affine``  matrices ``[[a, b], [0, 1]]`` with ``a`` a positive rational
``cyclic``  the integers modulo ``n``

Every element is immutable and normalised on construction, so equality and
hashing are plain value comparisons.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import FamilyMismatchError, ResourceLimitError, UndeterminedError


@dataclass(frozen=True)
class Family:
    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("int", "posrat", "affine", "cyclic"):
            raise ValueError(f"unknown group family {self.kind!r}")
        if self.kind == "cyclic" and self.n < 1:
            raise ValueError("cyclic family needs n >= 1")

    def __str__(self):
        return f"cyclic({self.n})" if self.kind == "cyclic" else self.kind


INT = Family("int")
POSRAT = Family("posrat")
AFFINE = Family("affine")


def cyclic(n: int) -> Family:
    return Family("cyclic", n)


@dataclass(frozen=True)
class GroupElement:
    family: Family
    value: object

    def __post_init__(self):
        kind = self.family.kind
        v = self.value
        if kind == "int":
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"integer payload expected, got {v!r}")
        elif kind == "posrat":
            v = Fraction(v)
            if v <= 0:
                raise ValueError(f"positive rational expected, got {v}")
            object.__setattr__(self, "value", v)
        elif kind == "affine":
            a, b = Fraction(v[0]), Fraction(v[1])
            if a <= 0:
                raise ValueError(f"affine scale must be positive, got {a}")
            object.__setattr__(self, "value", (a, b))
        else:
            object.__setattr__(self, "value", int(v) % self.family.n)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def inverse(self) -> "GroupElement":
        return invert(self)

    def is_identity(self) -> bool:
        return self == identity(self.family)

    def sort_key(self):
        if self.family.kind == "affine":
            return self.value
        return (self.value,)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        kind = self.family.kind
        v = self.value
        if kind == "int":
            return f"Z({v})"
        if kind == "posrat":
            return f"Q({v})"
        if kind == "affine":
            return f"Aff({v[0]},{v[1]})"
        return f"Zn{self.family.n}({v})"

    __str__ = __repr__


def Z(n: int) -> GroupElement:
    return GroupElement(INT, n)


def Q(p, q=1) -> GroupElement:
    return GroupElement(POSRAT, Fraction(p, q))


def Aff(a, b=0) -> GroupElement:
    return GroupElement(AFFINE, (a, b))


def Zn(n: int, r: int) -> GroupElement:
    return GroupElement(cyclic(n), r)


def identity(family: Family) -> GroupElement:
    kind = family.kind
    if kind == "int":
        return GroupElement(family, 0)
    if kind == "posrat":
        return GroupElement(family, 1)
    if kind == "affine":
        return GroupElement(family, (1, 0))
    return GroupElement(family, 0)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """The exact group product ``g h``."""
    if g.family != h.family:
        raise FamilyMismatchError(f"cannot compose {g!r} with {h!r}")
    kind = g.family.kind
    if kind == "int" or kind == "cyclic":
        return GroupElement(g.family, g.value + h.value)
    if kind == "posrat":
        return GroupElement(g.family, g.value * h.value)
    (a1, b1), (a2, b2) = g.value, h.value
    return GroupElement(g.family, (a1 * a2, a1 * b2 + b1))


def invert(g: GroupElement) -> GroupElement:
    kind = g.family.kind
    if kind == "int" or kind == "cyclic":
        return GroupElement(g.family, -g.value)
    if kind == "posrat":
        return GroupElement(g.family, 1 / g.value)
    a, b = g.value
    return GroupElement(g.family, (1 / a, -b / a))


def parse_element(family: Family, text: str) -> GroupElement:
    """Parse ``"3"``, ``"3/4"`` or ``"2,1/3"`` (affine ``a,b``) into an element."""
    text = text.strip()
    if family.kind == "affine":
        parts = [p.strip() for p in text.strip("()[]").split(",")]
        if len(parts) != 2:
            raise ValueError(f"affine element needs 'a,b', got {text!r}")
        return GroupElement(family, (Fraction(parts[0]), Fraction(parts[1])))
    if family.kind == "posrat":
        return GroupElement(family, Fraction(text))
    return GroupElement(family, int(text))


# ---------------------------------------------------------------------------
# semigroups


SEMIGROUP_IDS = ("nat", "posint", "p1", "p2", "full", "trivial")

_ALLOWED = {
    "nat": ("int",),
    "posint": ("posrat",),
    "p1": ("affine",),
    "p2": ("affine",),
    "full": ("int", "posrat", "affine", "cyclic"),
    "trivial": ("int", "posrat", "affine", "cyclic"),
}


@dataclass(frozen=True)
class CustomSemigroup:
    """A semigroup given by a membership predicate or by generators.

    Without a predicate, membership means "is a product of at most
    ``search_bound`` generators"; a miss on an unsaturated search is
    reported as :class:`UndeterminedError` rather than ``False``.
    """

    name: str
    generators: tuple = ()
    predicate: Optional[Callable[[GroupElement], bool]] = None
    search_bound: int = 12


@dataclass(frozen=True)
class OreContext:
    """An ambient group family, a sub-semigroup and word-ball generators."""

    family: Family
    semigroup: object
    generators: tuple = field(default=())

    def __post_init__(self):
        sg = self.semigroup
        if isinstance(sg, str):
            if sg not in SEMIGROUP_IDS:
                raise ValueError(f"unknown semigroup id {sg!r}")
            if self.family.kind not in _ALLOWED[sg]:
                raise ValueError(f"semigroup {sg} is not defined on {self.family}")
        elif not isinstance(sg, CustomSemigroup):
            raise TypeError("semigroup must be an id string or CustomSemigroup")
        gens = tuple(self.generators)
        for g in gens:
            if g.family != self.family:
                raise FamilyMismatchError(f"generator {g!r} not in {self.family}")
        object.__setattr__(self, "generators", gens)

    @property
    def e(self) -> GroupElement:
        return identity(self.family)

    def contains(self, g: GroupElement) -> bool:
        return in_semigroup(self, g)

    def semigroup_generators(self) -> tuple:
        """Generators of P as a semigroup, where the family makes this finite."""
        sg = self.semigroup
        if isinstance(sg, CustomSemigroup):
            return tuple(sg.generators)
        if sg == "nat":
            return (Z(1),)
        if sg == "full" and self.family.kind == "cyclic":
            return (Zn(self.family.n, 1),)
        if sg == "full":
            return tuple(self.generators) + tuple(invert(g) for g in self.generators)
        if sg == "trivial":
            return ()
        return tuple(g for g in self.generators if in_semigroup(self, g))

    def __str__(self):
        sg = self.semigroup
        name = sg.name if isinstance(sg, CustomSemigroup) else sg
        return f"({self.family}, {name})"


def in_semigroup(ctx: OreContext, g: GroupElement) -> bool:
    if g.family != ctx.family:
        raise FamilyMismatchError(f"{g!r} is not an element of {ctx.family}")
    sg = ctx.semigroup
    if isinstance(sg, CustomSemigroup):
        return _custom_member(ctx, g)
    if sg == "full":
        return True
    if sg == "trivial":
        return g.is_identity()
    if sg == "nat":
        return g.value >= 0
    if sg == "posint":
        return g.value.denominator == 1
    a, b = g.value
    if sg == "p1":
        return a >= 1 and b >= 0
    return a.denominator == 1 and a >= 1 and b >= 0  # p2


def _custom_member(ctx: OreContext, g: GroupElement) -> bool:
    sg = ctx.semigroup
    if sg.predicate is not None:
        return bool(sg.predicate(g))
    if g.is_identity():
        return True
    members, saturated = _generated(ctx.family, sg.generators, sg.search_bound)
    if g in members:
        return True
    if saturated:
        return False
    raise UndeterminedError(
        f"membership of {g!r} in {sg.name} not decided", bound=sg.search_bound
    )


_GENERATED_CACHE: dict = {}


def _generated(family: Family, gens: tuple, bound: int):
    key = (family, gens, bound)
    hit = _GENERATED_CACHE.get(key)
    if hit is not None:
        return hit
    e = identity(family)
    members = {e}
    frontier = [e]
    for _ in range(bound):
        nxt = []
        for x in frontier:
            for s in gens:
                y = compose(x, s)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    result = (frozenset(members), not frontier)
    _GENERATED_CACHE[key] = result
    return result


_DECOMPOSE_CACHE: dict = {}


def ore_decompose(ctx: OreContext, g: GroupElement):
    """Canonical ``(a, b)`` with ``a, b`` in P and ``a b^-1 = g``."""
    key = (ctx, g)
    hit = _DECOMPOSE_CACHE.get(key)
    if hit is None:
        if len(_DECOMPOSE_CACHE) > 200_000:
            _DECOMPOSE_CACHE.clear()
        hit = _DECOMPOSE_CACHE[key] = _decompose(ctx, g)
    return hit


def _decompose(ctx: OreContext, g: GroupElement):
    if g.family != ctx.family:
        raise FamilyMismatchError(f"{g!r} is not an element of {ctx.family}")
    sg = ctx.semigroup
    e = ctx.e
    if isinstance(sg, CustomSemigroup):
        return _search_decomposition(ctx, g)
    if sg == "full":
        return g, e
    if sg == "trivial":
        if g == e:
            return e, e
        raise ValueError("the trivial semigroup is not an Ore semigroup of a nontrivial group")
    if sg == "nat":
        return (Z(0), Z(-g.value)) if g.value < 0 else (g, Z(0))
    if sg == "posint":
        return Q(g.value.numerator), Q(g.value.denominator)
    alpha, beta = g.value
    if sg == "p1":
        a2 = max(Fraction(1), 1 / alpha)
    else:
        a2 = Fraction(alpha.denominator)
    b2 = max(Fraction(0), -beta / alpha)
    b = Aff(a2, b2)
    return compose(g, b), b


def _search_decomposition(ctx: OreContext, g: GroupElement):
    sg = ctx.semigroup
    bound = sg.search_bound
    gens = ctx.generators or tuple(sg.generators)
    ball = word_ball(OreContext(ctx.family, "full", gens), bound)
    members = []
    for h in ball:
        try:
            if in_semigroup(ctx, h):
                members.append(h)
        except UndeterminedError:
            pass
    member_set = set(members)
    for b in members:
        a = compose(g, b)
        if a in member_set:
            return a, b
    raise UndeterminedError(f"no decomposition of {g!r} found", bound=bound)


# ---------------------------------------------------------------------------
# word balls


def max_ball_size() -> int:
    return int(os.environ.get("GOID_MAX_BALL", "200000"))


class _Layers:
    """Breadth-first shells of the Cayley graph, grown on demand."""

    def __init__(self, ctx: OreContext):
        if not ctx.generators:
            raise ValueError(f"context {ctx} has no word-ball generators")
        self.steps = tuple(ctx.generators) + tuple(invert(g) for g in ctx.generators)
        e = ctx.e
        self.length = {e: 0}
        self.shells = [[e]]
        self.saturated = False

    def grow_to(self, radius: int):
        cap = max_ball_size()
        while len(self.shells) <= radius and not self.saturated:
            nxt = set()
            for x in self.shells[-1]:
                for s in self.steps:
                    y = compose(x, s)
                    if y not in self.length:
                        nxt.add(y)
            if not nxt:
                self.saturated = True
                break
            if len(self.length) + len(nxt) > cap:
                raise ResourceLimitError(
                    f"word ball of radius {len(self.shells)} exceeds {cap} elements"
                    " (raise GOID_MAX_BALL to allow more)"
                )
            depth = len(self.shells)
            for y in nxt:
                self.length[y] = depth
            self.shells.append(sorted(nxt, key=GroupElement.sort_key))


_LAYERS: dict = {}


def _layers(ctx: OreContext) -> _Layers:
    key = (ctx.family, ctx.generators)
    lay = _LAYERS.get(key)
    if lay is None:
        lay = _LAYERS[key] = _Layers(ctx)
    return lay


def word_ball(ctx: OreContext, radius: int) -> tuple:
    """Elements of word length at most ``radius``, in canonical order."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    lay = _layers(ctx)
    lay.grow_to(radius)
    out = []
    for shell in lay.shells[: radius + 1]:
        out.extend(shell)
    return tuple(out)


def ball_saturated(ctx: OreContext, radius: int) -> bool:
    """True when the ball of this radius is already the whole group."""
    lay = _layers(ctx)
    lay.grow_to(radius + 1)
    return lay.saturated and len(lay.shells) <= radius + 1


def word_length(ctx: OreContext, g: GroupElement, cap: int = 64) -> Optional[int]:
    """Word length of ``g`` over the context generators, or None beyond ``cap``."""
    gens = ctx.generators
    kind = ctx.family.kind
    if kind == "int" and gens and {abs(x.value) for x in gens} == {1}:
        n = abs(g.value)
        return n if n <= cap else None
    if kind == "cyclic" and gens and {x.value for x in gens} <= {1, ctx.family.n - 1}:
        r = g.value
        return min(r, ctx.family.n - r)
    if kind == "posrat" and gens and _prime_generated(gens):
        return _prime_length(gens, g.value, cap)
    lay = _layers(ctx)
    hit = lay.length.get(g)
    while hit is None and not lay.saturated and len(lay.shells) <= cap:
        lay.grow_to(len(lay.shells))
        hit = lay.length.get(g)
    if hit is None or hit > cap:
        return None
    return hit


def _prime_generated(gens) -> bool:
    vals = [x.value for x in gens]
    if any(v.denominator != 1 for v in vals):
        return False
    ints = [v.numerator for v in vals]
    return all(p > 1 and all(p % d for d in range(2, int(p ** 0.5) + 1)) for p in ints)


def _prime_length(gens, q: Fraction, cap: int) -> Optional[int]:
    primes = [x.value.numerator for x in gens]
    total = 0
    for part in (q.numerator, q.denominator):
        for p in primes:
            while part % p == 0:
                part //= p
                total += 1
        if part != 1:
            return None
    return total if total <= cap else None


def canonical_sorted(elements: Iterable[GroupElement], ctx: OreContext) -> list:
    """Sort by (word length, payload); elements must have a finite length."""
    def key(g):
        n = word_length(ctx, g)
        return (n if n is not None else float("inf"), g.sort_key())

    return sorted(elements, key=key)


_DECOMP_CACHE: dict = {}


def brute_force_decompositions(ctx: OreContext, g: GroupElement, search_radius: int) -> list:
    """All pairs ``(m, n)`` of P-elements in a word ball with ``m n^-1 = g``.

    The search never calls :func:`ore_decompose`, so it can serve as an
    independent check of results derived from canonical decompositions.
    """
    key = (ctx, search_radius)
    table = _DECOMP_CACHE.get(key)
    if table is None:
        members = [h for h in word_ball(ctx, search_radius) if in_semigroup(ctx, h)]
        table = {}
        for m in members:
            for n in members:
                table.setdefault(compose(m, invert(n)), []).append((m, n))
        _DECOMP_CACHE[key] = table
    return list(table.get(g, ()))
