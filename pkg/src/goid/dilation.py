"""Dilation of an injective semigroup action to a group action.

Pairs ``(x, g)`` in ``X x G`` are identified when ``g h^-1 = a b^-1`` and
``theta_a(x) = theta_b(y)``, i.e. when ``g h^-1`` lies in ``Q_x`` with transfer
``y``.  The class of ``(x, g)`` is ``{(u(x,k), k^-1 g) : k in Q_x}``; its
canonical representative has the word-length-minimal label.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dynamics import ActionInstance, act, is_homeomorphism_action, preimage
from .errors import NotHomeomorphismError, ResourceLimitError, UndeterminedError
from .groupoid import Arrow, TruncatedGroupoid, try_transfer
from .groups import (
    GroupElement,
    brute_force_decompositions,
    compose,
    invert,
    ore_decompose,
    word_ball,
    word_length,
)
from .report import Record, Report, Tri


@dataclass(frozen=True)
class DilationClass:
    point: object
    label: GroupElement

    @property
    def in_reduction(self) -> bool:
        """Whether the class lies in ``X' = {[x, e]}``."""
        return self.label.is_identity()

    def __repr__(self):
        return f"[{self.point!r}, {self.label!r}]"


def equivalent(A: ActionInstance, p, q) -> Tri:
    (x, g), (y, h) = p, q
    try:
        a, b = ore_decompose(A.ctx, compose(g, invert(h)))
    except UndeterminedError:
        return Tri.UNDETERMINED
    return Tri.of(act(A, a, x) == act(A, b, y))


def canonicalize(A: ActionInstance, p) -> DilationClass:
    """The representative of ``[x, g]`` with the smallest label.

    Labels are scanned in canonical ball order; the scan stops at ``g`` itself
    at the latest, so the result is exact.
    """
    x, g = p
    n = word_length(A.ctx, g)
    if n is None:
        raise ResourceLimitError(f"word length of {g!r} exceeds the scan cap")
    for ell in word_ball(A.ctx, n):
        y = try_transfer(A, x, compose(g, invert(ell)))
        if y is not None:
            return DilationClass(y, ell)
    raise AssertionError("unreachable: the label itself is always admissible")


def dilated_act(A: ActionInstance, cls: DilationClass, h: GroupElement) -> DilationClass:
    """``[x, g] . h = [x, g h]``."""
    return canonicalize(A, (cls.point, compose(cls.label, h)))


def unit_class(A: ActionInstance, x) -> DilationClass:
    """``x -> [x, e]``; ``(x, e)`` is always canonical."""
    return DilationClass(x, A.ctx.e)


def reduction_iso(A: ActionInstance, p: Arrow):
    """``(x, g) -> ([x, e], g)``."""
    return unit_class(A, p.base), p.label


def reduction_inverse(A: ActionInstance, image) -> Arrow:
    cls, g = image
    if not cls.in_reduction:
        raise ValueError(f"{cls} is not in the reduction")
    return Arrow(cls.point, g)


def reduction_report(T: TruncatedGroupoid) -> Report:
    """The reduction map on a truncation: bijective, label preserving, multiplicative."""
    A = T.action
    rep = Report("reduction-iso")
    images = {}
    fails = []
    for p in T.arrows:
        img = reduction_iso(A, p)
        if img in images:
            fails.append({"arrow": p, "collides_with": images[img]})
        images[img] = p
        if img[1] != p.label:
            fails.append({"arrow": p, "problem": "label changed"})
        if reduction_inverse(A, img) != p:
            fails.append({"arrow": p, "problem": "round trip"})
    rep.add(Record.tally("reduction map is injective and label preserving",
                         "(x,g) -> ([x,e],g)", len(T.arrows), fails))

    # source of ([x,e], g) is [x,g]; it must be the unit class of u(x,g)
    fails = []
    for p in T.arrows:
        cls, g = reduction_iso(A, p)
        src = dilated_act(A, cls, g)
        if src != unit_class(A, T.source_of(p)):
            fails.append({"arrow": p, "[x,g]": src, "expected": unit_class(A, T.source_of(p))})
    rep.add(Record.tally("source lands in the reduction", "[x,g] = [u(x,g),e]",
                         len(T.arrows), fails))

    # every reduction arrow over the window with a ball label is hit
    fails, checked = [], 0
    for x in T.window:
        c = unit_class(A, x)
        for g in T.ball:
            checked += 1
            lands = dilated_act(A, c, g).in_reduction
            hit = (c, g) in images
            if lands != hit:
                fails.append({"class": c, "g": g, "lands_in_reduction": lands, "hit": hit})
    rep.add(Record.tally("reduction map is onto the reduction arrows",
                         "X' reduction of the dilated groupoid", checked, fails))

    fails, checked = [], 0
    by_base = {}
    for p in T.arrows:
        by_base.setdefault(p.base, []).append(p)
    for p in T.arrows:
        for q in by_base.get(T.source_of(p), ()):
            checked += 1
            (c1, g1), (c2, g2) = reduction_iso(A, p), reduction_iso(A, q)
            composable = dilated_act(A, c1, g1) == c2
            prod = Arrow(p.base, compose(p.label, q.label))
            if not composable or (c1, compose(g1, g2)) != reduction_iso(A, prod):
                fails.append({"p": p, "q": q})
    rep.add(Record.tally("reduction map is multiplicative", "groupoid homomorphism",
                         checked, fails))
    return rep


def group_dilation_act(A: ActionInstance, g: GroupElement, x):
    """``theta_n^-1 theta_m (x)`` for ``g = m n^-1``; needs every theta_m bijective."""
    if not is_homeomorphism_action(A):
        raise NotHomeomorphismError(f"{A.name} is not an action by homeomorphisms")
    m, n = ore_decompose(A.ctx, g)
    y = preimage(A, n, act(A, m, x))
    if y is None:
        raise NotHomeomorphismError(f"theta_{n} is not onto at {act(A, m, x)!r}")
    return y


def homeomorphism_dilation_report(A: ActionInstance, points, radius: int) -> Report:
    """Checks on the group action obtained from an action by homeomorphisms.

    Independent decompositions agree, the result is a right action of G, and
    ``x -> [x, e]`` intertwines it with the dilated action.
    """
    rep = Report("group-dilation")
    ball = word_ball(A.ctx, radius)
    pts = list(points)

    fails, checked = [], 0
    for g in ball:
        for m, n in brute_force_decompositions(A.ctx, g, radius + 1):
            for x in pts:
                checked += 1
                other = preimage(A, n, act(A, m, x))
                if other != group_dilation_act(A, g, x):
                    fails.append({"g": g, "x": x, "decomposition": (m, n)})
    rep.add(Record.tally("group dilation is decomposition independent",
                         "theta_n^-1 theta_m", checked, fails))

    fails, checked = [], 0
    for g in ball:
        for h in ball:
            for x in pts:
                checked += 1
                lhs = group_dilation_act(A, h, group_dilation_act(A, g, x))
                rhs = group_dilation_act(A, compose(g, h), x)
                if lhs != rhs:
                    fails.append({"g": g, "h": h, "x": x})
    rep.add(Record.tally("group dilation is a right action", "hat theta_h hat theta_g = hat theta_gh",
                         checked, fails))

    fails, checked = [], 0
    for g in ball:
        for x in pts:
            checked += 1
            lhs = unit_class(A, group_dilation_act(A, g, x))
            rhs = dilated_act(A, unit_class(A, x), g)
            if lhs != rhs:
                fails.append({"g": g, "x": x, "[hat theta_g x, e]": lhs, "[x,g]": rhs})
    rep.add(Record.tally("x -> [x,e] intertwines the two group actions",
                         "[hat theta_g(x), e] = [x, g]", checked, fails))
    return rep


def relation_report(A: ActionInstance, pairs) -> Report:
    """Reflexivity, symmetry and transitivity on the given pairs, and
    agreement of the relation with equality of canonical forms."""
    rep = Report("dilation-relation")
    pairs = list(pairs)
    canon = {p: canonicalize(A, p) for p in pairs}
    fails = [p for p in pairs if equivalent(A, p, p) is not Tri.TRUE]
    rep.add(Record.tally("relation is reflexive", "(x,g) ~ (x,g)", len(pairs), fails))

    fails, checked = [], 0
    for p in pairs:
        for q in pairs:
            checked += 1
            e1, e2 = equivalent(A, p, q), equivalent(A, q, p)
            if e1 != e2:
                fails.append({"p": p, "q": q})
            elif (e1 is Tri.TRUE) != (canon[p] == canon[q]):
                fails.append({"p": p, "q": q, "problem": "canonical forms disagree"})
    rep.add(Record.tally("relation is symmetric and matches canonical forms",
                         "[x,g] = [y,h]", checked, fails))

    fails, checked = [], 0
    for p in pairs:
        for q in pairs:
            if equivalent(A, p, q) is not Tri.TRUE:
                continue
            for r in pairs:
                if equivalent(A, q, r) is Tri.TRUE:
                    checked += 1
                    if equivalent(A, p, r) is not Tri.TRUE:
                        fails.append({"p": p, "q": q, "r": r})
    rep.add(Record.tally("relation is transitive", "equivalence relation", checked, fails))
    return rep
