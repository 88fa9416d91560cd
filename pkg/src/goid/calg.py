"""Finite matrix models of the regular representation and its relations.

Operators act on the span of the arrows of a truncation.  The representation
never moves the base point of an arrow, so every matrix is block diagonal
over the window points (the fibers).  A truncation drops labels of word
length above its radius ``R``; an identity whose factors have total label
length ``L`` is therefore only asserted on basis vectors ``(x, h)`` with
``|h| <= R - max(margin, L)``.  On exactly finite truncations nothing is
dropped and every column is checked.

Two backends: ``exact`` (int64 with overflow fallback to Python integers, or
Fractions when a test function takes rational values) and ``float``
(complex128 compared within ``tol``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy import sparse

from .dynamics import INF, ActionInstance, OnePointInts, OnePointSemigroup, act
from .groupoid import Arrow, TruncatedGroupoid, enumerate_groupoid, q_contains, try_transfer
from .groups import compose, in_semigroup, invert, ore_decompose, word_ball, word_length
from .kernels import exact_matmul
from .report import Record, Report

BACKENDS = ("exact", "float")


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class PointFunction:
    """A continuous function on the unit space, given by a rule on points."""

    rule: Callable
    name: str = "f"

    def __call__(self, x):
        return self.rule(x)

    def times(self, other: "PointFunction") -> "PointFunction":
        return PointFunction(lambda x: self(x) * other(x), f"{self.name}*{other.name}")


def constant(c) -> PointFunction:
    return PointFunction(lambda x: c, f"const{c}")


def delta(point) -> PointFunction:
    """Indicator of one isolated point."""
    return PointFunction(lambda x: 1 if x == point else 0, f"delta({point!r})")


def indicator_of_domain(A: ActionInstance, g) -> PointFunction:
    """``chi_{X_g}`` with ``X_g = {x : g in Q_x}``; clopen in every catalog space."""
    return PointFunction(lambda x: 1 if q_contains(A, x, g) else 0, f"chi(X_{g!r})")


def random_function(A: ActionInstance, seed: int, cutoff: int = 12) -> PointFunction:
    """A seeded continuous integer-valued function (rational on the rectangle).

    On one-point spaces the function is constant beyond ``cutoff`` and equal
    there to its value at infinity, which makes it continuous at infinity.
    """
    rng = random.Random(seed)
    sp = A.space
    if sp.kind == "finite":
        vals = [rng.randint(-3, 3) for _ in range(sp.n)]
        return PointFunction(lambda x: vals[x], f"rand{seed}")
    if isinstance(sp, OnePointInts):
        head = {k: rng.randint(-3, 3) for k in range(sp.minimum, sp.minimum + cutoff)}
        tail = rng.randint(-3, 3)
        return PointFunction(lambda x: tail if x is INF else head.get(x, tail), f"rand{seed}")
    if isinstance(sp, OnePointSemigroup):
        near = [g for g in word_ball(sp.ctx, 2) if in_semigroup(sp.ctx, g)]
        head = {g: rng.randint(-3, 3) for g in near}
        tail = rng.randint(-3, 3)
        return PointFunction(lambda x: tail if x is INF else head.get(x, tail), f"rand{seed}")
    if sp.kind == "rect":
        c0, c1 = rng.randint(-3, 3), rng.randint(-3, 3)
        return PointFunction(lambda p: c0 + c1 * p.y, f"rand{seed}")
    raise ValueError(f"no test functions for {sp!r}")


def test_functions(A: ActionInstance, seed: int = 0, count: int = 3) -> list:
    return [constant(1)] + [random_function(A, seed + i) for i in range(count)]


# ---------------------------------------------------------------------------
# bases and operators


@dataclass
class ArrowBasis:
    """Ordered basis vectors with the word length that governs safety.

    ``keys`` are arrows for the regular representation and ``(g, x)`` pairs
    for the covariant representation.
    """

    keys: tuple
    lengths: tuple
    radius: int
    exact_finite: bool

    def __post_init__(self):
        self.index = {k: i for i, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def safe_columns(self, margin: int, used: int) -> np.ndarray:
        if self.exact_finite:
            return np.arange(len(self.keys))
        slack = self.radius - max(margin, used)
        return np.array([i for i, n in enumerate(self.lengths) if n <= slack], dtype=np.intp)


@dataclass
class WindowedOperator:
    matrix: np.ndarray
    basis: ArrowBasis
    backend: str = "exact"

    def __matmul__(self, other: "WindowedOperator") -> "WindowedOperator":
        return WindowedOperator(_mul(self.matrix, other.matrix, self.backend), self.basis, self.backend)

    def __add__(self, other):
        return WindowedOperator(self.matrix + other.matrix, self.basis, self.backend)

    def __sub__(self, other):
        return WindowedOperator(self.matrix - other.matrix, self.basis, self.backend)

    def adjoint(self) -> "WindowedOperator":
        m = self.matrix.T
        if self.backend == "float":
            m = m.conj()
        return WindowedOperator(np.ascontiguousarray(m), self.basis, self.backend)


def _mul(a, b, backend):
    if backend == "float":
        # the operators are permutation-like; sparse products keep large windows cheap
        return (sparse.csr_matrix(a) @ sparse.csr_matrix(b)).toarray()
    return exact_matmul(a, b)


def _fill(n, entries, backend):
    """A square matrix from ``{(row, col): value}``."""
    vals = list(entries.values())
    if backend == "float":
        m = np.zeros((n, n), dtype=np.complex128)
    elif all(isinstance(v, int) for v in vals):
        m = np.zeros((n, n), dtype=np.int64)
    else:
        m = np.zeros((n, n), dtype=object)
        m[:] = 0
    for (i, j), v in entries.items():
        m[i, j] = complex(v) if backend == "float" else v
    return m


def _lengths(ctx, labels):
    out = []
    for g in labels:
        n = word_length(ctx, g)
        out.append(n if n is not None else 10**9)
    return tuple(out)


def arrow_basis(T: TruncatedGroupoid, only_p: bool = False) -> ArrowBasis:
    """Arrows in fiber order; ``only_p`` keeps the P-labelled ones."""
    ctx = T.action.ctx
    keys = tuple(p for p in T.arrows if not only_p or in_semigroup(ctx, p.label))
    return ArrowBasis(keys, _lengths(ctx, [p.label for p in keys]), T.radius, T.exactly_finite())


def calg_truncation(A: ActionInstance, window, margin: int) -> TruncatedGroupoid:
    """A truncation deep enough that margin-safe columns exist: radius ``3 * margin``."""
    return enumerate_groupoid(A, window, 3 * max(margin, 1))


# ---------------------------------------------------------------------------
# the regular representation


def rep_cc(T: TruncatedGroupoid, F: Callable, basis: Optional[ArrowBasis] = None,
           backend: str = "exact") -> WindowedOperator:
    """``(pi(F) xi)(x, g) = sum_h F(u(x,g), g^-1 h) xi(x, h)`` for F in C_c.

    ``F(y, k)`` must vanish off a compact set; here it is only evaluated on
    pairs coming from arrows in the same fiber.
    """
    basis = basis or arrow_basis(T)
    entries = {}
    fibers: dict = {}
    for p in basis.keys:
        fibers.setdefault(p.base, []).append(p)
    for x, arrows in fibers.items():
        for r in arrows:
            y = T.source_of(r)
            gi = invert(r.label)
            for c in arrows:
                v = F(y, compose(gi, c.label))
                if v:
                    entries[basis.index[r], basis.index[c]] = v
    return WindowedOperator(_fill(len(basis), entries, backend), basis, backend)


def rep_function(T: TruncatedGroupoid, f: PointFunction, basis: Optional[ArrowBasis] = None,
                 backend: str = "exact") -> WindowedOperator:
    """Diagonal ``(x, g) -> f(u(x, g))``: the formula above for F supported on units."""
    basis = basis or arrow_basis(T)
    entries = {}
    for i, p in enumerate(basis.keys):
        v = f(T.source_of(p))
        if v:
            entries[i, i] = v
    return WindowedOperator(_fill(len(basis), entries, backend), basis, backend)


def rep_indicator(T: TruncatedGroupoid, g, basis: Optional[ArrowBasis] = None,
                  backend: str = "exact") -> WindowedOperator:
    """``u_g`` sends ``e_(x,h)`` to ``e_(x, h g^-1)`` when ``h g^-1`` is in ``Q_x``."""
    basis = basis or arrow_basis(T)
    entries = {}
    for i, p in enumerate(basis.keys):
        j = basis.index.get(Arrow(p.base, compose(p.label, g)))
        if j is not None:
            entries[i, j] = 1
    return WindowedOperator(_fill(len(basis), entries, backend), basis, backend)


def bisection_indicator(A: ActionInstance, g) -> Callable:
    """The C_c function ``chi_{X_g x {g}}``."""
    def F(y, k):
        return 1 if k == g and q_contains(A, y, g) else 0
    return F


def domain_function(A: ActionInstance, g, f: PointFunction) -> PointFunction:
    """``V_g(f)``: ``f(u(x, g))`` on ``X_g`` and 0 elsewhere."""
    def rule(x):
        y = try_transfer(A, x, g)
        return 0 if y is None else f(y)
    return PointFunction(rule, f"V_{g!r}({f.name})")


# ---------------------------------------------------------------------------
# comparisons


def _differences(lhs: np.ndarray, rhs: np.ndarray, cols, backend: str, tol: float):
    if len(cols) == 0:
        return []
    a, b = lhs[:, cols], rhs[:, cols]
    if backend == "float":
        bad = np.argwhere(np.abs(a - b) > tol)
    else:
        bad = np.argwhere(a != b)
    return [(int(r), int(cols[c])) for r, c in bad[:3]]


class _Tally:
    """Accumulates column counts and witnesses for one identity family."""

    def __init__(self, basis: ArrowBasis, margin: int, backend: str, tol: float):
        self.basis, self.margin, self.backend, self.tol = basis, margin, backend, tol
        self.checked = 0
        self.fails = []

    def compare(self, lhs, rhs, used: int, **context):
        cols = self.basis.safe_columns(self.margin, used)
        self.checked += len(cols)
        L = lhs.matrix if isinstance(lhs, WindowedOperator) else lhs
        R = rhs.matrix if isinstance(rhs, WindowedOperator) else rhs
        for r, c in _differences(L, R, cols, self.backend, self.tol):
            self.fails.append(dict(context, row=self.basis.keys[r], column=self.basis.keys[c],
                                   lhs=L[r, c], rhs=R[r, c]))

    def record(self, claim, anchor, **kw) -> Record:
        return Record.tally(claim, anchor, self.checked, self.fails, bound=self.bound(), **kw)

    def bound(self):
        return {"radius": self.basis.radius, "margin": self.margin}


def _length(ctx, g) -> int:
    n = word_length(ctx, g)
    return n if n is not None else 10**9


def _tested_labels(T: TruncatedGroupoid, margin: int) -> tuple:
    return word_ball(T.action.ctx, min(margin, T.radius))


# ---------------------------------------------------------------------------
# indicator relations


def check_lemma28(T: TruncatedGroupoid, margin: int = 2, tol: float = 1e-10,
                  backend: str = "exact", seed: int = 0) -> Report:
    """The relations satisfied by the indicator elements ``u_g``.

    ``u_e = 1``, ``u_a u_b = u_ab`` and ``u_a u_a^* = 1`` on P; ``u_g = u_a u_b^*``
    for ``g = a b^-1``; ``u_g^* = u_{g^-1}``; ``u_g f = V_g(f) u_g``;
    ``u_g u_{g^-1} = chi_{X_g}``.  On exactly finite truncations the span of
    ``{f u_g}`` is also compared with the number of arrows.
    """
    A = T.action
    ctx = A.ctx
    basis = arrow_basis(T)
    rep = Report("calg-check")
    labels = _tested_labels(T, margin)
    P = [g for g in labels if in_semigroup(ctx, g)]
    fns = test_functions(A, seed)
    u = {}

    def U(g):
        if g not in u:
            u[g] = rep_indicator(T, g, basis, backend)
        return u[g]

    # two constructions of u_g: the convolution formula and the direct rule
    t = _Tally(basis, margin, backend, tol)
    for g in labels:
        t.compare(rep_cc(T, bisection_indicator(A, g), basis, backend), U(g), 0, g=g)
    rep.add(t.record("indicator matrix agrees with the convolution formula",
                     "pi(chi_{X_g x {g}}) = u_g"))

    t = _Tally(basis, margin, backend, tol)
    for f in fns:
        for h in fns:
            lhs = rep_function(T, f, basis, backend) @ rep_function(T, h, basis, backend)
            t.compare(lhs, rep_function(T, f.times(h), basis, backend), 0, f=f.name, h=h.name)
    rep.add(t.record("functions act multiplicatively", "pi(f) pi(h) = pi(fh)"))

    t = _Tally(basis, margin, backend, tol)
    t.compare(U(ctx.e), np.eye(len(basis), dtype=U(ctx.e).matrix.dtype), 0)
    rep.add(t.record("u_e is the identity", "u_e = 1"))

    t = _Tally(basis, margin, backend, tol)
    for a in P:
        for b in P:
            t.compare(U(a) @ U(b), U(compose(a, b)), _length(ctx, a) + _length(ctx, b), a=a, b=b)
    rep.add(t.record("indicators multiply on the semigroup", "u_a u_b = u_ab"))

    t = _Tally(basis, margin, backend, tol)
    eye = np.eye(len(basis), dtype=np.int64 if backend == "exact" else np.complex128)
    for a in P:
        t.compare(U(a) @ U(a).adjoint(), eye, 2 * _length(ctx, a), a=a)
    rep.add(t.record("u_a^* is an isometry", "u_a u_a^* = 1"))

    t = _Tally(basis, margin, backend, tol)
    for g in labels:
        a, b = ore_decompose(ctx, g)
        t.compare(U(a) @ U(b).adjoint(), U(g), _length(ctx, a) + _length(ctx, b), g=g, a=a, b=b)
    rep.add(t.record("u_g factors through a decomposition", "u_g = u_a u_b^*"))

    t = _Tally(basis, margin, backend, tol)
    for g in labels:
        t.compare(U(g).adjoint(), U(invert(g)), _length(ctx, g), g=g)
    rep.add(t.record("adjoint of u_g is u_{g^-1}", "u_g^* = u_{g^-1}"))

    t = _Tally(basis, margin, backend, tol)
    for g in labels:
        for f in fns:
            lhs = U(g) @ rep_function(T, f, basis, backend)
            rhs = rep_function(T, domain_function(A, g, f), basis, backend) @ U(g)
            t.compare(lhs, rhs, _length(ctx, g), g=g, f=f.name)
    rep.add(t.record("u_g intertwines f with V_g(f)", "u_g f = V_g(f) u_g"))

    t = _Tally(basis, margin, backend, tol)
    for g in labels:
        chi = rep_function(T, indicator_of_domain(A, g), basis, backend)
        t.compare(U(g) @ U(invert(g)), chi, 2 * _length(ctx, g), g=g)
    rep.add(t.record("u_g u_{g^-1} is the indicator of X_g", "u_g u_{g^-1} = chi_{X_g}"))

    if T.exactly_finite():
        rep.add(span_dimension_record(T, backend))
    return rep


def _rank(rows) -> int:
    """Rank over the rationals of sparse rows ``{column: value}``."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        while row:
            col = min(row)
            if col not in pivots:
                pivots[col] = row
                rank += 1
                break
            piv = pivots[col]
            factor = row[col] / piv[col]
            for k, v in piv.items():
                nv = row.get(k, 0) - factor * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return rank


def _flat(m: np.ndarray) -> dict:
    n = m.shape[1]
    return {int(i) * n + int(j): m[i, j] for i, j in np.argwhere(m != 0)}


def _unit_functions(A: ActionInstance) -> list:
    return [delta(x) for x in A.space.points()]


def span_dimension_record(T: TruncatedGroupoid, backend: str = "exact") -> Record:
    A = T.action
    basis = arrow_basis(T)
    rows = []
    for f in _unit_functions(A):
        F = rep_function(T, f, basis, "exact")
        for g in T.ball:
            rows.append(_flat((F @ rep_indicator(T, g, basis, "exact")).matrix))
    dim = _rank(rows)
    fails = [] if dim == len(T.arrows) else [{"span_dimension": dim, "arrows": len(T.arrows)}]
    return Record.tally("span of f u_g has dimension equal to the arrow count",
                        "C_c = span{f u_g}", len(rows), fails,
                        detail={"span_dimension": dim, "arrows": len(T.arrows)})


# ---------------------------------------------------------------------------
# the corner by the semigroup projection


def _corner_ops(T: TruncatedGroupoid, E: ArrowBasis, backend: str):
    """Isometries ``v_m`` and functions ``pi(f)`` on the P-labelled space.

    ``v_m delta_(x,p) = delta_(x,pm)`` and ``pi(f)`` multiplies
    ``delta_(x,p)`` by ``f(theta_p(x))``; neither uses the transfer map.
    """
    A = T.action

    def v(m):
        entries = {}
        for j, p in enumerate(E.keys):
            i = E.index.get(Arrow(p.base, compose(p.label, m)))
            if i is not None:
                entries[i, j] = 1
        return WindowedOperator(_fill(len(E), entries, backend), E, backend)

    def pi(f):
        entries = {}
        for i, p in enumerate(E.keys):
            val = f(act(A, p.label, p.base))
            if val:
                entries[i, i] = val
        return WindowedOperator(_fill(len(E), entries, backend), E, backend)

    return v, pi


def _embedding(basis: ArrowBasis, E: ArrowBasis, backend: str) -> np.ndarray:
    dtype = np.complex128 if backend == "float" else np.int64
    m = np.zeros((len(basis), len(E)), dtype=dtype)
    for j, p in enumerate(E.keys):
        m[basis.index[p], j] = 1
    return m


def alpha(A: ActionInstance, m, f: PointFunction) -> PointFunction:
    """``alpha_m(f) = f o theta_m``."""
    return PointFunction(lambda x: f(act(A, m, x)), f"alpha_{m!r}({f.name})")


def corner_checks(T: TruncatedGroupoid, margin: int = 2, tol: float = 1e-10,
                  backend: str = "exact", seed: int = 0) -> Report:
    """The semigroup model compared with the compression by ``Q``.

    ``Q`` projects onto the P-labelled arrows and ``U`` is the inclusion of
    that subspace.  Checked: ``U* U = 1``, ``U pi(f) = pi~(f) U``,
    ``U v_m = pi~(u_m^*) U``, the isometry relations, covariance, the
    semigroup law for ``alpha`` and the two compression identities.
    """
    A = T.action
    ctx = A.ctx
    basis = arrow_basis(T)
    E = arrow_basis(T, only_p=True)
    rep = Report("calg-check")
    labels = _tested_labels(T, margin)
    P = [g for g in labels if in_semigroup(ctx, g)]
    fns = test_functions(A, seed)
    v, pi = _corner_ops(T, E, backend)
    Um = _embedding(basis, E, backend)
    Qm = _mul(Um, Um.T, backend)
    Q = WindowedOperator(Qm, basis, backend)
    proper = len(E) < len(basis)
    note = {} if proper else {"note": "P = G on this truncation, so Q is the identity"}

    def UE(op):
        return _mul(Um, op.matrix, backend)

    def tildeU(op):
        return _mul(op.matrix, Um, backend)

    u = {}

    def ug(g):
        if g not in u:
            u[g] = rep_indicator(T, g, basis, backend)
        return u[g]

    eyeE = np.eye(len(E), dtype=np.complex128 if backend == "float" else np.int64)

    t = _Tally(E, margin, backend, tol)
    t.compare(_mul(Um.T, Um, backend), eyeE, 0)
    rep.add(t.record("U is an isometry", "U* U = 1", detail=note))

    t = _Tally(E, margin, backend, tol)
    for f in fns:
        t.compare(UE(pi(f)), tildeU(rep_function(T, f, basis, backend)), 0, f=f.name)
    rep.add(t.record("U intertwines the function actions", "U pi(f) = pi~(f) U"))

    t = _Tally(E, margin, backend, tol)
    for m in P:
        t.compare(UE(v(m)), tildeU(ug(m).adjoint()), _length(ctx, m), m=m)
    rep.add(t.record("U intertwines v_m with u_m^*", "U v_m = pi~(u_m^*) U"))

    t = _Tally(E, margin, backend, tol)
    for m in P:
        t.compare(v(m).adjoint() @ v(m), eyeE, _length(ctx, m), m=m)
    rep.add(t.record("v_m is an isometry", "v_m^* v_m = 1"))

    t = _Tally(E, margin, backend, tol)
    for m in P:
        for n in P:
            t.compare(v(m) @ v(n), v(compose(n, m)), _length(ctx, m) + _length(ctx, n), m=m, n=n)
    rep.add(t.record("v is anti-multiplicative", "v_m v_n = v_nm"))

    t = _Tally(E, margin, backend, tol)
    for m in P:
        for f in fns:
            t.compare(pi(f) @ v(m), v(m) @ pi(alpha(A, m, f)), _length(ctx, m), m=m, f=f.name)
    rep.add(t.record("covariance of the semigroup model", "pi(f) v_m = v_m pi(alpha_m f)"))

    t = _Tally(E, margin, backend, tol)
    for a in P:
        for b in P:
            L = _length(ctx, a) + _length(ctx, b)
            if L > margin:
                continue
            ab = compose(a, b)
            for f in fns:
                lhs = v(ab).adjoint() @ pi(f) @ v(ab)
                inner = v(b).adjoint() @ pi(f) @ v(b)
                rhs = v(a).adjoint() @ inner @ v(a)
                t.compare(lhs, pi(alpha(A, ab, f)), 2 * L, a=a, b=b, f=f.name)
                t.compare(lhs, rhs, 2 * L, a=a, b=b, f=f.name, side="composite")
    rep.add(t.record("alpha is multiplicative under conjugation", "alpha_ab = alpha_a alpha_b"))

    t = _Tally(basis, margin, backend, tol)
    for m in P:
        for n in P:
            lhs = Q @ ug(m) @ ug(n).adjoint() @ Q
            rhs = Q @ ug(m) @ Q @ ug(n).adjoint() @ Q
            t.compare(lhs, rhs, _length(ctx, m) + _length(ctx, n), m=m, n=n)
    rep.add(t.record("compression splits u_m u_n^*", "Q u_m u_n^* Q = Q u_m Q u_n^* Q", detail=note))

    t = _Tally(basis, margin, backend, tol)
    for g in labels:
        for f in fns:
            F = rep_function(T, f, basis, backend)
            lhs = Q @ F @ ug(g) @ Q
            rhs = Q @ F @ Q @ ug(g) @ Q
            t.compare(lhs, rhs, _length(ctx, g), g=g, f=f.name)
    rep.add(t.record("compression splits f u_g", "Q f u_g Q = Q f Q u_g Q", detail=note))

    t = _Tally(E, margin, backend, tol)
    for f in fns:
        lhs = _mul(Um.T, (Q @ rep_function(T, f, basis, backend) @ Q).matrix, backend)
        t.compare(_mul(lhs, Um, backend), pi(f), 0, f=f.name)
    for m in P:
        lhs = _mul(Um.T, (Q @ ug(m).adjoint() @ Q).matrix, backend)
        t.compare(_mul(lhs, Um, backend), v(m), _length(ctx, m), m=m)
    rep.add(t.record("the corner restricts to the semigroup model",
                     "U* Q pi~(f) Q U = pi(f), U* Q u_m^* Q U = v_m"))
    return rep


# ---------------------------------------------------------------------------
# partial action and covariant representation


def partial_action_apply(T: TruncatedGroupoid, g, f) -> dict:
    """``alpha^_g(f)(x) = f(u(x, g))`` on ``X_g`` within the window.

    ``f`` may be a callable or a table on ``X_{g^-1}``.
    """
    A = T.action
    out = {}
    for x in T.window:
        y = try_transfer(A, x, g)
        if y is not None:
            out[x] = f(y) if callable(f) else f[y]
    return out


def partial_action_report(T: TruncatedGroupoid, margin: int = 2, seed: int = 0) -> Report:
    """``alpha^_{g^-1} alpha^_g`` is the identity on tables over ``X_{g^-1}``."""
    A = T.action
    rep = Report("calg-check")
    fails, checked = [], 0
    for g in _tested_labels(T, margin):
        for f in test_functions(A, seed):
            # the table alpha^_g(f) on X_g is only known at window points
            forward = partial_action_apply(T, g, f)
            for x in T.window:
                y = try_transfer(A, x, invert(g))
                if y is None or y not in forward:
                    continue
                checked += 1
                if forward[y] != f(x):
                    fails.append({"g": g, "x": x, "f": f.name})
    rep.add(Record.tally("partial action is invertible on window tables",
                         "alpha^_{g^-1} alpha^_g = id", checked, fails))

    # alpha^_g alpha^_h f (x) = f(u(u(x,g),h)) must equal alpha^_gh f (x) = f(u(x,gh))
    fails, checked = [], 0
    labels = _tested_labels(T, margin)
    for f in test_functions(A, seed):
        for g in labels:
            for h in labels:
                for x in T.window:
                    y = try_transfer(A, x, g)
                    z = None if y is None else try_transfer(A, y, h)
                    if z is None:
                        continue
                    checked += 1
                    w = try_transfer(A, x, compose(g, h))
                    if w is None or f(z) != f(w):
                        fails.append({"g": g, "h": h, "x": x, "f": f.name})
    rep.add(Record.tally("partial action composes where defined",
                         "alpha^_g alpha^_h = alpha^_gh on the common domain", checked, fails))
    return rep


def covariant_basis(T: TruncatedGroupoid) -> ArrowBasis:
    """Pairs ``(g, x)`` with ``x`` in ``X_g``, listed by group element first."""
    A = T.action
    keys = []
    for g in T.ball:
        for x in T.window:
            if q_contains(A, x, g):
                keys.append((g, x))
    ctx = A.ctx
    return ArrowBasis(tuple(keys), _lengths(ctx, [k[0] for k in keys]), T.radius, T.exactly_finite())


def tau(T: TruncatedGroupoid, F: ArrowBasis, f, backend: str = "exact") -> WindowedOperator:
    """``(tau(f) xi)(g) = alpha^_g(f) xi(g)``."""
    A = T.action
    entries = {}
    for i, (g, x) in enumerate(F.keys):
        val = f(try_transfer(A, x, g))
        if val:
            entries[i, i] = val
    return WindowedOperator(_fill(len(F), entries, backend), F, backend)


def v_cov(T: TruncatedGroupoid, F: ArrowBasis, h, backend: str = "exact") -> WindowedOperator:
    """``(v_h xi)(g) = xi(g h)`` restricted to ``X_g`` and ``X_gh``."""
    entries = {}
    for i, (g, x) in enumerate(F.keys):
        j = F.index.get((compose(g, h), x))
        if j is not None:
            entries[i, j] = 1
    return WindowedOperator(_fill(len(F), entries, backend), F, backend)


def _alpha_hat(A: ActionInstance, g, f: PointFunction) -> PointFunction:
    return domain_function(A, g, f)


def covariant_checks(T: TruncatedGroupoid, margin: int = 2, tol: float = 1e-10,
                     backend: str = "exact", seed: int = 0) -> Report:
    """Relations of the covariant pair ``(tau, v)`` and its link to ``pi~``.

    (i) ``v_g tau(f) v_{g^-1} = tau(alpha^_g f)`` for f supported in ``X_{g^-1}``;
    (ii) ``tau(f)(v_g v_h - v_gh) = 0`` for f supported in ``X_g`` and ``X_gh``;
    (iii) ``v_g^* = v_{g^-1}``.  The permutation ``(x, g) <-> (g, x)`` carries
    ``pi~(f)`` to ``tau(f)`` and ``u_g`` to ``v_g``; on exactly finite
    truncations both spans are compared by rank.
    """
    A = T.action
    ctx = A.ctx
    F = covariant_basis(T)
    rep = Report("calg-check")
    labels = _tested_labels(T, margin)
    fns = test_functions(A, seed)
    rep.extend(partial_action_report(T, margin, seed))

    vc = {}

    def V(g):
        if g not in vc:
            vc[g] = v_cov(T, F, g, backend)
        return vc[g]

    t = _Tally(F, margin, backend, tol)
    for g in labels:
        gi = invert(g)
        chi = indicator_of_domain(A, gi)
        for f in fns:
            f0 = f.times(chi)
            lhs = V(g) @ tau(T, F, f0, backend) @ V(gi)
            rhs = tau(T, F, _alpha_hat(A, g, f0), backend)
            t.compare(lhs, rhs, 2 * _length(ctx, g), g=g, f=f.name)
    rep.add(t.record("v_g conjugates tau by the partial action",
                     "v_g tau(f) v_{g^-1} = tau(alpha^_g f)"))

    t = _Tally(F, margin, backend, tol)
    for g in labels:
        for h in labels:
            gh = compose(g, h)
            chi = indicator_of_domain(A, g).times(indicator_of_domain(A, gh))
            diff = V(g) @ V(h) - V(gh)
            zero = np.zeros_like(diff.matrix)
            for f in fns:
                T_f = tau(T, F, f.times(chi), backend)
                t.compare(T_f @ diff, zero, _length(ctx, g) + _length(ctx, h), g=g, h=h, f=f.name)
    rep.add(t.record("v is multiplicative on supports", "tau(f)(v_g v_h - v_gh) = 0"))

    t = _Tally(F, margin, backend, tol)
    for g in labels:
        t.compare(V(g).adjoint(), V(invert(g)), _length(ctx, g), g=g)
    rep.add(t.record("v_g^* = v_{g^-1}", "v_g^* = v_{g^-1}"))

    # the permutation (x, g) -> (g, x) carries pi~ onto (tau, v)
    basis = arrow_basis(T)
    perm = np.zeros((len(F), len(basis)), dtype=np.int64 if backend == "exact" else np.complex128)
    for j, p in enumerate(basis.keys):
        perm[F.index[(p.label, p.base)], j] = 1

    def carry(op):
        return _mul(_mul(perm, op.matrix, backend), perm.T, backend)

    t = _Tally(F, margin, backend, tol)
    for f in fns:
        t.compare(carry(rep_function(T, f, basis, backend)), tau(T, F, f, backend), 0, f=f.name)
    for g in labels:
        t.compare(carry(rep_indicator(T, g, basis, backend)), V(g),
                  _length(ctx, g), g=g)
    rep.add(t.record("the regular and covariant pictures correspond",
                     "Psi(pi~(f)) = tau(f), Psi(u_g) = v_g"))

    if T.exactly_finite():
        rep.add(_span_comparison(T, F, basis))
    return rep


def _span_comparison(T: TruncatedGroupoid, F: ArrowBasis, basis: ArrowBasis) -> Record:
    """Rank of each span and of the paired span: equal iff the linear map is
    well defined and injective on the span."""
    A = T.action
    left, right, both = [], [], []
    n = len(basis) ** 2
    for f in _unit_functions(A):
        Rf = rep_function(T, f, basis, "exact")
        Tf = tau(T, F, f, "exact")
        for g in T.ball:
            a = _flat((Rf @ rep_indicator(T, g, basis, "exact")).matrix)
            b = _flat((Tf @ v_cov(T, F, g, "exact")).matrix)
            left.append(a)
            right.append(b)
            both.append({**a, **{k + n: val for k, val in b.items()}})
    dims = {"regular": _rank(left), "covariant": _rank(right), "paired": _rank(both),
            "arrows": len(T.arrows)}
    ok = len(set(dims.values())) == 1
    return Record.tally("span dimension is preserved by the correspondence",
                        "dim span{f u_g} = dim span{tau(f) v_g} = #arrows",
                        len(left), [] if ok else [dims], detail=dims)


def calg_report(T: TruncatedGroupoid, margin: int = 2, tol: float = 1e-10,
                backend: str = "exact", seed: int = 0) -> Report:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    rep = Report("calg-check")
    rep.extend(check_lemma28(T, margin, tol, backend, seed))
    rep.extend(corner_checks(T, margin, tol, backend, seed))
    rep.extend(covariant_checks(T, margin, tol, backend, seed))
    return rep
