"""Command-line front end: ``goid <command> [flags]``.

Exit status: 0 when every record passes, 1 when any record fails, 2 when
nothing failed but something was left undetermined (or the input could not
be loaded).
"""

from __future__ import annotations

import argparse
import configparser
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .calg import BACKENDS, calg_report, calg_truncation
from .compactification import check_thm41, check_thm43, verify_thm43_certificate
from .dilation import homeomorphism_dilation_report, reduction_report, relation_report
from .dynamics import INF, NEG_INF, RectPoint, default_samples, is_homeomorphism_action
from .equivalence import (
    ConjugacyCertificate,
    PointMap,
    alpha_from_generators,
    coe_from_conjugacy,
    identity_coe,
    round_trip_report,
    verify_coe,
    verify_conjugacy,
    verify_orbit_equivalence,
)
from .errors import GoidError, ParseError
from .groupoid import (
    decomposition_independence_report,
    default_window,
    enumerate_groupoid,
    etale_report,
    freeness,
    groupoid_axioms_report,
    isotropy,
    orbit,
    q_set,
)
from .groups import parse_element, word_ball
from .report import Record, Report, digest
from .specfile import OPTION_DEFAULTS, SpecDocument, export_spec, load_spec, parse_text

COMMANDS = ("check-etale", "orbit", "freeness", "enumerate", "dilate", "verify-conjugacy",
            "verify-oe", "verify-coe", "coe-bridge", "calg-check", "compactify-check", "battery")
TWO_SPEC = ("verify-conjugacy", "verify-oe", "verify-coe", "coe-bridge")


# ---------------------------------------------------------------------------
# inputs


def load(ref: str) -> SpecDocument:
    """A spec path, or ``catalog:NAME`` for a catalog instance."""
    if ref.startswith("catalog:"):
        name = ref[len("catalog:"):]
        text = export_spec(catalog.build(name))
        doc = parse_text(text, f"<catalog:{name}>")
        doc.instance = catalog.build(name)
        return doc
    return load_spec(ref)


def parse_point(A, text: str):
    t = text.strip()
    if t in ("inf", "oo"):
        return INF
    kind = A.space.kind
    if kind == "rect":
        xs, ys = (s.strip() for s in t.strip("()").split(","))
        x = NEG_INF if xs in ("-inf", "-oo") else Fraction(xs)
        return RectPoint(x, Fraction(ys))
    if hasattr(A.space, "ctx"):
        return parse_element(A.ctx.family, t)
    return int(t)


def _map_table(text: str, parse_left, parse_right) -> dict:
    out = {}
    for item in text.split(";"):
        if item.strip():
            left, right = item.split("->")
            out[parse_left(left)] = parse_right(right)
    return out


def load_certificate(path, A, B):
    """Certificate files have one ``[certificate]`` section.

    ``kind = identity`` needs nothing else; ``kind = table`` lists
    ``phi = x->y; ...`` on a finite space and ``alpha = gen->element; ...``.
    """
    if path is None:
        return "identity", None
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(Path(path).read_text(), source=str(path))
    except (OSError, configparser.Error) as exc:
        raise ParseError(f"cannot read certificate: {exc}", path=str(path)) from None
    if not cp.has_section("certificate"):
        raise ParseError("missing [certificate] section", 1, 1, str(path))
    kind = cp.get("certificate", "kind", fallback="identity").strip()
    if kind == "identity":
        return "identity", None
    if kind != "table":
        raise ParseError(f"unknown certificate kind {kind!r}", path=str(path))
    phi_t = _map_table(cp.get("certificate", "phi"), lambda s: parse_point(A, s), lambda s: parse_point(B, s))
    inv_t = {v: k for k, v in phi_t.items()}
    phi = PointMap(lambda x: phi_t[x], lambda y: inv_t[y], "phi")
    images = _map_table(cp.get("certificate", "alpha", fallback=""),
                        lambda s: parse_element(A.ctx.family, s), lambda s: parse_element(B.ctx.family, s))
    if not images:
        return "table", ConjugacyCertificate(phi, lambda m: m, lambda m: m, "table")
    inverse = {v: k for k, v in images.items()}
    return "table", ConjugacyCertificate(
        phi, alpha_from_generators(A, images), alpha_from_generators(B, inverse), "table")


# ---------------------------------------------------------------------------
# commands


def _radius(args, doc):
    return args.radius if args.radius is not None else doc.options.get("radius", OPTION_DEFAULTS["radius"])


def _opt(args, doc, name):
    v = getattr(args, name)
    if v is not None:
        return v
    key = "tolerance" if name == "tol" else name
    return doc.options.get(key, OPTION_DEFAULTS[key]) if doc else OPTION_DEFAULTS[key]


def cmd_check_etale(args, doc, _):
    return etale_report(doc.instance)


def cmd_orbit(args, doc, _):
    A = doc.instance
    r = _radius(args, doc)
    x = parse_point(A, args.point) if args.point else default_window(A)[0]
    rep = Report("orbit")
    orb = orbit(A, x, r)
    rep.add(Record.tally(f"orbit of {x!r}", "[x] truncated to the word ball", len(orb), [],
                         bound={"radius": r},
                         detail={"orbit": orb, "Q_x": q_set(A, x, r), "isotropy": isotropy(A, x, r)}))
    return rep


def cmd_freeness(args, doc, _):
    rep = Report("freeness")
    rep.add(freeness(doc.instance, _radius(args, doc))[1])
    return rep


def cmd_enumerate(args, doc, _):
    A = doc.instance
    T = enumerate_groupoid(A, default_window(A, args.window), _radius(args, doc))
    rep = Report("enumerate")
    rep.extend(groupoid_axioms_report(T))
    rep.extend(decomposition_independence_report(T))
    rep.records[0].detail.update({"arrows": len(T.arrows), "window": list(T.window)})
    return rep


def cmd_dilate(args, doc, _):
    A = doc.instance
    r = _radius(args, doc)
    T = enumerate_groupoid(A, default_window(A, args.window), r)
    rep = Report("dilate")
    rep.extend(reduction_report(T))
    pairs = [(x, g) for x in list(T.window)[:4] for g in word_ball(A.ctx, min(r, 2))]
    rep.extend(relation_report(A, pairs))
    if is_homeomorphism_action(A):
        rep.extend(homeomorphism_dilation_report(A, list(T.window), min(r, 3)))
    return rep


def cmd_verify_conjugacy(args, doc, target):
    A, B = doc.instance, target.instance
    _, cert = load_certificate(args.cert, A, B)
    if cert is None:
        cert = ConjugacyCertificate(PointMap.identity(), lambda m: m, lambda m: m, "identity")
    return verify_conjugacy(cert, A, B, radius=_radius(args, doc))


def cmd_verify_oe(args, doc, target):
    A, B = doc.instance, target.instance
    _, cert = load_certificate(args.cert, A, B)
    phi = cert.phi if cert is not None else PointMap.identity()
    return verify_orbit_equivalence(phi, A, B, _radius(args, doc), default_window(A, args.window))


def _coe(args, A, B):
    kind, cert = load_certificate(args.cert, A, B)
    return identity_coe(A) if cert is None else coe_from_conjugacy(cert, A, B)


def _coe_window(A, args):
    if A.space.kind == "rect":
        return default_samples(A)[:args.window]
    return default_window(A, args.window)


def cmd_verify_coe(args, doc, target):
    A, B = doc.instance, target.instance
    return verify_coe(_coe(args, A, B), A, B, _radius(args, doc), _coe_window(A, args))


def cmd_coe_bridge(args, doc, target):
    A, B = doc.instance, target.instance
    return round_trip_report(_coe(args, A, B), A, B, _radius(args, doc), _coe_window(A, args))


def cmd_calg_check(args, doc, _):
    A = doc.instance
    margin = _opt(args, doc, "margin")
    if A.space.kind == "rect":
        window = default_samples(A)[:4]
    else:
        window = default_window(A, args.window)
    T = calg_truncation(A, window, margin)
    return calg_report(T, margin, _opt(args, doc, "tol"), _opt(args, doc, "backend"), _opt(args, doc, "seed"))


def cmd_compactify_check(args, doc, _):
    A = doc.instance
    r = _radius(args, doc)
    rep = Report("compactify-check")
    ctx = A.ctx
    gens = ctx.semigroup_generators()
    if gens:
        a = parse_element(ctx.family, args.a) if args.a else gens[0]
        rep.extend(check_thm41(ctx, ctx, a, max(r, 8)))
    if A.space.kind == "onepoint":
        x_inf = parse_point(A, args.x_inf) if args.x_inf else INF
        x0 = parse_point(A, args.x0) if args.x0 else default_window(A)[0]
        sub, cert = check_thm43(A, x_inf, x0, r)
        rep.extend(sub)
        if cert is not None:
            rep.extend(verify_thm43_certificate(A, cert, r))
    return rep


def cmd_battery(args, doc, _):
    return catalog.run_battery(args.name, args.radius if args.radius is not None else 3)


HANDLERS = {
    "check-etale": cmd_check_etale,
    "orbit": cmd_orbit,
    "freeness": cmd_freeness,
    "enumerate": cmd_enumerate,
    "dilate": cmd_dilate,
    "verify-conjugacy": cmd_verify_conjugacy,
    "verify-oe": cmd_verify_oe,
    "verify-coe": cmd_verify_coe,
    "coe-bridge": cmd_coe_bridge,
    "calg-check": cmd_calg_check,
    "compactify-check": cmd_compactify_check,
    "battery": cmd_battery,
}


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of the text tree")
    common.add_argument("--radius", type=int, default=None, help="word-ball radius (default 3)")
    common.add_argument("--margin", type=int, default=None, help="margin for operator checks (default 2)")
    common.add_argument("--backend", choices=BACKENDS, default=None, help="calg arithmetic (default exact)")
    common.add_argument("--tol", type=float, default=None, help="float backend tolerance (default 1e-10)")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled test data (default 0)")
    common.add_argument("--window", type=int, default=20, help="window size on one-point spaces")

    p = argparse.ArgumentParser(prog="goid", description="Verify groupoids of injective semigroup actions.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "battery":
            sp.add_argument("--name", required=True,
                            help="catalog entry: " + ", ".join(catalog.INSTANCE_NAMES + catalog.PAIR_NAMES))
            continue
        sp.add_argument("--spec", required=True, help="spec file or catalog:NAME")
        if name in TWO_SPEC:
            sp.add_argument("--target", required=True, help="second spec file or catalog:NAME")
            sp.add_argument("--cert", default=None, help="certificate file (default: identity)")
        if name == "orbit":
            sp.add_argument("--point", default=None)
        if name == "compactify-check":
            sp.add_argument("--x0", default=None)
            sp.add_argument("--x-inf", dest="x_inf", default=None)
            sp.add_argument("--a", default=None, help="semigroup element for the shift check")
    return p


def _input_bytes(args) -> list:
    chunks = [args.command.encode()]
    for key in ("spec", "target", "cert"):
        ref = getattr(args, key, None)
        if ref is None:
            continue
        if ref.startswith("catalog:"):
            chunks.append(ref.encode())
        else:
            chunks.append(Path(ref).read_bytes())
    flags = {k: getattr(args, k, None) for k in ("radius", "margin", "backend", "tol", "seed", "window",
                                                 "name", "point", "x0", "x_inf", "a")}
    chunks.append(repr(sorted(flags.items())).encode())
    return chunks


def dispatch(args) -> Report:
    if args.command == "battery":
        doc = target = None
    else:
        doc = load(args.spec)
        target = load(args.target) if args.command in TWO_SPEC else None
    rep = HANDLERS[args.command](args, doc, target)
    rep.command = args.command
    rep.inputs_digest = digest(*_input_bytes(args))
    return rep


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "calg-check" and (args.backend or args.tol is not None or args.margin is not None):
        parser.error("--backend, --tol and --margin only apply to calg-check")
    try:
        rep = dispatch(args)
    except (GoidError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(rep.to_json() if args.json else rep.to_text())
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
