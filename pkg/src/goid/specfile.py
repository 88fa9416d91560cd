"""Action spec files.

An INI-style document with five sections (``[options]`` may be omitted)::

    [group]
    family = int            # int | posrat | affine | cyclic
    n = 5                   # cyclic only
    generators = 1          # word-metric generators, separated by ';'

    [semigroup]
    id = nat                # nat | posint | p1 | p2 | full | trivial | custom
    generators = 1          # custom only
    search_bound = 12       # custom only

    [space]
    kind = onepoint_ints    # finite | onepoint_ints | onepoint_semigroup | rect
    n = 5                   # finite
    minimum = 1             # onepoint_ints

    [action]
    rule = add              # rotation | add | mult | sigma | affine_rect | table
    step = 1                # rotation
    image 1 = 1, 2, 0       # table: one line per semigroup generator

    [options]
    radius = 3
    margin = 2
    backend = exact
    tolerance = 1e-10
    seed = 0

Group elements are written ``3``, ``3/4`` or ``a,b`` for affine maps, so
lists of them are separated by ``;`` and comments start with ``#``.  Loading
runs the action axioms as a gate and raises :class:`AxiomError` with the
failing witness.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

from .dynamics import (
    ActionInstance,
    AddRule,
    AffineRectRule,
    FiniteSpace,
    MultRule,
    OnePointInts,
    OnePointSemigroup,
    RectSpace,
    RotationRule,
    SigmaRule,
    TableRule,
    action_axioms_report,
)
from .errors import GoidError, ParseError
from .groups import CustomSemigroup, Family, OreContext, parse_element

SECTIONS = ("group", "semigroup", "space", "action")
OPTION_DEFAULTS = {"radius": 3, "margin": 2, "backend": "exact", "tolerance": 1e-10, "seed": 0}


class AxiomError(GoidError):
    """The loaded action violates an action axiom."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass
class SpecDocument:
    instance: ActionInstance
    options: dict = field(default_factory=dict)
    text: str = ""
    path: str = ""


class _Locator:
    """Line and column of section headers and keys in the raw text."""

    def __init__(self, text: str):
        self.headers, self.keys = {}, {}
        self.order = []
        self.last_line = len(text.splitlines())
        section = None
        for n, line in enumerate(text.splitlines(), 1):
            m = re.match(r"\s*\[([^\]]+)\]", line)
            if m:
                section = m.group(1).strip().lower()
                self.headers[section] = n
                self.order.append(section)
                continue
            m = re.match(r"\s*([^=:;#\s][^=:]*?)\s*[=:]\s*", line)
            if m and section is not None:
                self.keys[(section, m.group(1).strip().lower())] = (n, m.end() + 1)

    def key(self, section, key):
        return self.keys.get((section, key), (self.headers.get(section), 1))

    def missing_section(self, name):
        """Where a missing section was expected: the next header in order, or the end."""
        later = SECTIONS[SECTIONS.index(name) + 1:] + ("options",)
        lines = [self.headers[s] for s in later if s in self.headers]
        return (min(lines) if lines else self.last_line + 1), 1


def _elements(family, text, where, path):
    try:
        return tuple(parse_element(family, t) for t in text.split(";") if t.strip())
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError(f"bad group element list {text!r}: {exc}", *where, path) from None


def _int(text, where, path):
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer, got {text!r}", *where, path) from None


def parse_text(text: str, path: str = "<string>", gate: bool = True) -> SpecDocument:
    loc = _Locator(text)
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",), interpolation=None)
    try:
        cp.read_string(text, source=path)
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError("content before the first section header", exc.lineno, 1, path) from None
    except configparser.DuplicateSectionError as exc:
        raise ParseError(f"duplicate section [{exc.section}]", exc.lineno, 1, path) from None
    except configparser.DuplicateOptionError as exc:
        raise ParseError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno, 1, path) from None
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ParseError("malformed line", line, 1, path) from None

    for name in SECTIONS:
        if not cp.has_section(name):
            raise ParseError(f"missing [{name}] section", *loc.missing_section(name), path)
    unknown = [s for s in cp.sections() if s not in SECTIONS + ("options",)]
    if unknown:
        raise ParseError(f"unknown section [{unknown[0]}]", loc.headers.get(unknown[0]), 1, path)

    def need(section, key):
        if not cp.has_option(section, key):
            raise ParseError(f"[{section}] needs '{key}'", loc.headers.get(section), 1, path)
        return cp.get(section, key).strip()

    # group
    kind = need("group", "family")
    try:
        family = Family(kind, _int(cp.get("group", "n", fallback="0"), loc.key("group", "n"), path))
    except ValueError as exc:
        raise ParseError(str(exc), *loc.key("group", "family"), path) from None
    gens = _elements(family, cp.get("group", "generators", fallback=""), loc.key("group", "generators"), path)

    # semigroup
    sid = need("semigroup", "id")
    if sid == "custom":
        sgens = _elements(family, need("semigroup", "generators"), loc.key("semigroup", "generators"), path)
        bound = _int(cp.get("semigroup", "search_bound", fallback="12"),
                     loc.key("semigroup", "search_bound"), path)
        semigroup = CustomSemigroup("custom", sgens, None, bound)
    else:
        semigroup = sid
    try:
        ctx = OreContext(family, semigroup, gens)
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc), *loc.key("semigroup", "id"), path) from None

    # space
    skind = need("space", "kind")
    if skind == "finite":
        space = FiniteSpace(_int(need("space", "n"), loc.key("space", "n"), path))
    elif skind == "onepoint_ints":
        space = OnePointInts(_int(cp.get("space", "minimum", fallback="0"), loc.key("space", "minimum"), path))
    elif skind == "onepoint_semigroup":
        space = OnePointSemigroup(ctx)
    elif skind == "rect":
        space = RectSpace()
    else:
        raise ParseError(f"unknown space kind {skind!r}", *loc.key("space", "kind"), path)

    # action
    rname = need("action", "rule")
    if rname == "rotation":
        if skind != "finite":
            raise ParseError("rotation needs a finite space", *loc.key("action", "rule"), path)
        step = _int(cp.get("action", "step", fallback="1"), loc.key("action", "step"), path)
        rule = RotationRule(space.n, step)
    elif rname == "add":
        rule = AddRule()
    elif rname == "mult":
        rule = MultRule()
    elif rname == "sigma":
        rule = SigmaRule(ctx)
    elif rname == "affine_rect":
        rule = AffineRectRule()
    elif rname == "table":
        if skind != "finite":
            raise ParseError("table actions need a finite space", *loc.key("action", "rule"), path)
        tables = []
        for key, value in cp.items("action"):
            if not key.startswith("image "):
                continue
            where = loc.key("action", key)
            (g,) = _elements(family, key[len("image "):], where, path)
            images = tuple(_int(v.strip(), where, path) for v in value.split(","))
            if len(images) != space.n or not all(0 <= v < space.n for v in images):
                raise ParseError(f"table for {g!r} must list {space.n} points of the space", *where, path)
            tables.append((g, images))
        if not tables:
            raise ParseError("table action without any 'image <generator>' line",
                             *loc.key("action", "rule"), path)
        rule = TableRule(space.n, tuple(tables))
    else:
        raise ParseError(f"unknown rule {rname!r}", *loc.key("action", "rule"), path)

    options = dict(OPTION_DEFAULTS)
    if cp.has_section("options"):
        for key, value in cp.items("options"):
            if key not in OPTION_DEFAULTS:
                raise ParseError(f"unknown option {key!r}", *loc.key("options", key), path)
            caster = type(OPTION_DEFAULTS[key])
            try:
                options[key] = caster(value)
            except ValueError:
                raise ParseError(f"bad value {value!r} for {key}", *loc.key("options", key), path) from None

    name = Path(path).stem if path and not path.startswith("<") else "spec"
    A = ActionInstance(space, ctx, rule, name)
    if gate:
        rep = action_axioms_report(A)
        if rep.failed:
            bad = rep.failed[0]
            raise AxiomError(f"action axiom fails: {bad.claim}; witness {bad.witness}", rep)
    return SpecDocument(A, options, text, path)


def load_spec(path) -> SpecDocument:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read spec: {exc.strerror}", path=str(p)) from None
    return parse_text(text, str(p))


def parse_spec(path) -> ActionInstance:
    return load_spec(path).instance


def same_instance(A: ActionInstance, B: ActionInstance) -> bool:
    """Structural equality: space, context and rule agree."""
    return A.space == B.space and A.ctx == B.ctx and A.rule == B.rule


def _fmt(g) -> str:
    v = g.value
    if g.family.kind == "affine":
        return f"{v[0]},{v[1]}"
    return str(v)


def export_spec(A: ActionInstance, options=None) -> str:
    """Spec text that loads back to a structurally equal instance."""
    ctx, sp, rule = A.ctx, A.space, A.rule
    fam = ctx.family
    lines = ["[group]", f"family = {fam.kind}"]
    if fam.kind == "cyclic":
        lines.append(f"n = {fam.n}")
    if ctx.generators:
        lines.append("generators = " + "; ".join(_fmt(g) for g in ctx.generators))
    lines += ["", "[semigroup]"]
    sg = ctx.semigroup
    if isinstance(sg, CustomSemigroup):
        if sg.predicate is not None:
            raise ValueError("predicate semigroups cannot be exported")
        lines += ["id = custom", "generators = " + "; ".join(_fmt(g) for g in sg.generators),
                  f"search_bound = {sg.search_bound}"]
    else:
        lines.append(f"id = {sg}")
    lines += ["", "[space]"]
    if isinstance(sp, FiniteSpace):
        lines += ["kind = finite", f"n = {sp.n}"]
    elif isinstance(sp, OnePointInts):
        lines += ["kind = onepoint_ints", f"minimum = {sp.minimum}"]
    elif isinstance(sp, OnePointSemigroup):
        lines.append("kind = onepoint_semigroup")
    else:
        lines.append("kind = rect")
    lines += ["", "[action]"]
    if isinstance(rule, RotationRule):
        lines += ["rule = rotation", f"step = {rule.step}"]
    elif isinstance(rule, TableRule):
        lines.append("rule = table")
        for g, images in rule.tables:
            lines.append(f"image {_fmt(g)} = " + ", ".join(map(str, images)))
    else:
        names = {AddRule: "add", MultRule: "mult", SigmaRule: "sigma", AffineRectRule: "affine_rect"}
        lines.append(f"rule = {names[type(rule)]}")
    if options:
        lines += ["", "[options]"] + [f"{k} = {v}" for k, v in options.items()]
    return "\n".join(lines) + "\n"
