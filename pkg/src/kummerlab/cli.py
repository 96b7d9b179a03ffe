"""Command-line interface.

Every subcommand computes one payload.  Predicate values live in the
payload; the exit code only reports process-level outcomes: 0 computed,
2 usage or parse error, 3 desk-scale limit exceeded, 4 degenerate input.
JSON output carries ``schema: 1`` and is written with sorted keys, so
identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from typing import Sequence, TextIO

from . import definability as dfn
from . import tower_lab as tl
from .errors import KummerLabError, ParseError
from .finite_field import FieldSpec, parse_field_spec
from .kummer_tower import classify_place_step, places_above, tower_make
from .norm_oracle import expand_norm_to_system, norm_solvable
from .ratfunc import INFINITY, Place, RatFunc, divisor_of, factor, ord_at, parse_place, parse_ratfunc
from .sweeps import SUITES, run_suite

SCHEMA = 1

DEFAULTS = {"field": "p=3,m=1", "q": "2", "format": "text", "seed": "0", "sample_size": "5"}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ParseError(message)


def _context(args) -> tuple[FieldSpec, int]:
    return parse_field_spec(args.field), args.q


def _elem(text: str, field: FieldSpec) -> RatFunc:
    return parse_ratfunc(text, field)


def _places(text: str, field: FieldSpec) -> list[Place]:
    return [parse_place(part, field) for part in text.split(";") if part.strip()]


def _radicands(text: str | None, field: FieldSpec) -> list[RatFunc]:
    if not text:
        return []
    return [_elem(part, field) for part in text.split(";") if part.strip()]


def _order(value) -> int | str:
    return "inf" if value == INFINITY else value


# subcommands

def cmd_factor(args) -> dict:
    field, _ = _context(args)
    x = _elem(args.x, field)
    if x.is_zero():
        return {"x": "0", "factors": []}
    rows = [{"poly": g.format(), "mult": k} for g, k in factor(x.num)]
    rows += [{"poly": g.format(), "mult": -k} for g, k in factor(x.den)]
    lead = field.div(x.num.lc, x.den.lc)
    return {"x": str(x), "leading": field.format_code(lead), "factors": rows}


def cmd_divisor(args) -> dict:
    field, _ = _context(args)
    div = divisor_of(_elem(args.x, field))
    return {"x": args.x, "divisor": div.to_json(), "degree": div.degree()}


def cmd_ord(args) -> dict:
    field, _ = _context(args)
    x = _elem(args.x, field)
    place = parse_place(args.place, field)
    return {"x": str(x), "place": str(place), "value": _order(ord_at(x, place))}


def cmd_split(args) -> dict:
    field, q = _context(args)
    tower = tower_make(field, q, _radicands(args.tower, field))
    c = _elem(args.radicand, field)
    place = parse_place(args.place, field)
    results = [{"place": str(tp), "e": tp.e, "f": tp.f, "kind": classify_place_step(tp, c, q)}
               for tp in places_above(tower, place)]
    return {"radicand": str(c), "base_place": str(place), "tower": tower.to_json(),
            "results": results}


def cmd_places_above(args) -> dict:
    field, q = _context(args)
    tower = tower_make(field, q, _radicands(args.tower, field))
    place = parse_place(args.place, field)
    leaves = places_above(tower, place)
    return {"tower": tower.to_json(), "base_place": str(place),
            "places": [tp.to_json() for tp in leaves],
            "sum_ef": sum(tp.e * tp.f for tp in leaves)}


def cmd_norm_solve(args) -> dict:
    field, q = _context(args)
    tower = tower_make(field, q, _radicands(args.tower, field))
    verdict = norm_solvable(tower, _elem(args.a, field), _elem(args.z, field),
                            witness_bound=args.witness_bound)
    return {"a": args.a, "z": args.z, "tower": tower.to_json(), **verdict.to_json()}


def cmd_expand_norm(args) -> dict:
    field, q = _context(args)
    tower = tower_make(field, q, _radicands(args.tower, field))
    system = expand_norm_to_system(tower, _elem(args.a, field), _elem(args.rhs, field))
    return system.to_json()


def _valring_mode(args, place: Place):
    if args.uniform:
        return dfn.UniformBounded(place, strong=not args.weak)
    return dfn.ValRing(place)


def cmd_valring(args) -> dict:
    field, q = _context(args)
    x = _elem(args.x, field)
    place = parse_place(args.place, field)
    pair = dfn.choose_ab(_valring_mode(args, place), q)
    trace = dfn.val_ring_predicate(x, pair)
    order = ord_at(x, place)
    return {"x": str(x), "place": str(place), "value": trace.value, "surrogate": "formula",
            "pair": pair.to_json(), "trace": trace.to_json(),
            "ord": _order(order), "ground_truth": order >= 0}


def cmd_sint(args) -> dict:
    field, q = _context(args)
    x = _elem(args.x, field)
    S = _places(args.S, field)
    decision = dfn.s_integer_decide(x, S, q, sample_size=args.sample_size, seed=args.seed)
    return {"x": str(x), "S": [str(p) for p in S], **decision.to_json(),
            "ground_truth": decision.ground_truth}


def cmd_constants(args) -> dict:
    field, q = _context(args)
    x = _elem(args.x, field)
    decision = dfn.constants_predicate(x, q, sample_size=args.sample_size, seed=args.seed)
    return {"x": str(x), **decision.to_json(), "ground_truth": decision.ground_truth}


def cmd_choose_ab(args) -> dict:
    field, q = _context(args)
    place = parse_place(args.place, field)
    if args.mode == "sint":
        mode = dfn.SIntegers(frozenset(_places(args.S or "", field)), place)
    elif args.mode == "uniform":
        mode = dfn.UniformBounded(place, strong=not args.weak)
    else:
        mode = dfn.ValRing(place)
    pair = dfn.choose_ab(mode, q)
    return {**pair.to_json(), "violations": pair.violations()}


def _parse_level(text: str, field: FieldSpec, q: int) -> tl.LevelSpec:
    kind, _, body = text.partition(":")
    if kind == "kummer":
        return tl.LevelSpec.kummer(_elem(body, field), q)
    if kind == "defined":
        return tl.LevelSpec.from_ratfuncs([_elem(part, field) for part in body.split(";")])
    raise ParseError(f"level {text!r} must start with 'kummer:' or 'defined:'")


def _levels(args, field: FieldSpec, q: int) -> list[tl.LevelSpec]:
    if getattr(args, "pattern", None) == "uniformizer-chain":
        return tl.uniformizer_chain(field, q, args.depth)
    if not args.level:
        raise ParseError("give at least one --level (or --pattern)")
    return [_parse_level(text, field, q) for text in args.level]


def cmd_tree(args) -> dict:
    field, q = _context(args)
    levels = _levels(args, field, q)
    tree = tl.factor_tree(parse_place(args.place, field), levels, args.depth)
    return tree.to_json()


def cmd_qbound(args) -> dict:
    field, q = _context(args)
    levels = _levels(args, field, q)
    depth = len(levels) if args.pattern else args.depth
    tree = tl.factor_tree(parse_place(args.place, field), levels, depth)
    return tl.path_q_profile(tree, q).to_json()


def cmd_inert_tower(args) -> dict:
    degrees = [int(d) for d in args.degrees.split(",") if d.strip()] if args.degrees else []
    choices = None
    if args.script:
        with open(args.script, encoding="utf-8") as fh:
            script = json.load(fh)
        choices = script.get("choices")
        degrees = script.get("step_degrees", degrees)
        args.p = script.get("p", args.p)
    report = tl.build_inert_tower(args.p, 1, len(degrees), degrees, choices=choices)
    return {**report.to_json(), "field": f"p={args.p},m=1"}


def cmd_sweep(args) -> dict:
    options = {}
    if args.max_cases is not None:
        if args.suite != "norm-consistency":
            raise ParseError("--max-cases applies to the norm-consistency suite")
        options["max_cases"] = args.max_cases
    return run_suite(args.suite, seed=args.seed, **options).to_json()


# parser

def _common(sub: argparse.ArgumentParser, defaults: dict) -> None:
    sub.add_argument("--field", default=defaults["field"], help="field spec, e.g. p=3,m=1")
    sub.add_argument("--q", type=int, default=int(defaults["q"]), help="prime q dividing |F|-1")
    sub.add_argument("--format", choices=("text", "json"), default=defaults["format"])
    sub.add_argument("--seed", type=int, default=int(defaults["seed"]))
    sub.add_argument("--config", help="INI file with a [kummerlab] section of defaults")


def _read_config(argv: Sequence[str]) -> dict:
    defaults = dict(DEFAULTS)
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if path:
        parser = configparser.ConfigParser()
        if not parser.read(path, encoding="utf-8"):
            raise ParseError(f"cannot read config file {path}")
        if parser.has_section("kummerlab"):
            for key, value in parser.items("kummerlab"):
                if key not in DEFAULTS:
                    raise ParseError(f"unknown config key {key!r}")
                defaults[key] = value
    return defaults


def build_parser(defaults: dict | None = None) -> argparse.ArgumentParser:
    defaults = dict(DEFAULTS) if defaults is None else defaults
    parser = _Parser(prog="kummerlab", description="Kummer towers, norm equations and "
                     "definability predicates over F_q(t).")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        sub = subs.add_parser(name, help=help_text)
        _common(sub, defaults)
        sub.set_defaults(func=func)
        return sub

    sub = add("factor", cmd_factor, "factor numerator and denominator")
    sub.add_argument("--x", required=True)
    sub = add("divisor", cmd_divisor, "principal divisor of an element")
    sub.add_argument("--x", required=True)
    sub = add("ord", cmd_ord, "order of an element at a place")
    sub.add_argument("--x", required=True)
    sub.add_argument("--place", required=True)
    sub = add("split", cmd_split, "splitting of places in a Kummer step")
    sub.add_argument("--radicand", required=True)
    sub.add_argument("--place", required=True)
    sub.add_argument("--tower", help="earlier radicands separated by ';'")
    sub = add("places-above", cmd_places_above, "places of a tower above a base place")
    sub.add_argument("--tower", required=True, help="radicands separated by ';'")
    sub.add_argument("--place", required=True)
    sub = add("norm-solve", cmd_norm_solve, "solvability of a norm equation")
    sub.add_argument("--a", required=True)
    sub.add_argument("--z", required=True)
    sub.add_argument("--tower", help="radicands separated by ';'")
    sub.add_argument("--witness-bound", type=int)
    sub = add("expand-norm", cmd_expand_norm, "norm equation as a polynomial system")
    sub.add_argument("--a", required=True)
    sub.add_argument("--rhs", required=True)
    sub.add_argument("--tower", help="radicands separated by ';'")
    sub = add("valring", cmd_valring, "valuation-ring predicate")
    sub.add_argument("--x", required=True)
    sub.add_argument("--place", required=True)
    sub.add_argument("--uniform", action="store_true", help="use a q-bounded pair")
    sub.add_argument("--weak", action="store_true", help="ord b = -(q+1) for --uniform")
    sub = add("sint", cmd_sint, "S-integer decision")
    sub.add_argument("--x", required=True)
    sub.add_argument("--S", required=True, help="places separated by ';'")
    sub.add_argument("--sample-size", type=int, default=int(defaults["sample_size"]))
    sub = add("constants", cmd_constants, "constants predicate")
    sub.add_argument("--x", required=True)
    sub.add_argument("--sample-size", type=int, default=int(defaults["sample_size"]))
    sub = add("choose-ab", cmd_choose_ab, "auxiliary pair by weak approximation")
    sub.add_argument("--mode", choices=("valring", "sint", "uniform"), default="valring")
    sub.add_argument("--place", required=True)
    sub.add_argument("--S", help="places separated by ';' (sint mode)")
    sub.add_argument("--weak", action="store_true")
    for name, func, text in (("tree", cmd_tree, "factor tree through levels"),
                             ("qbound", cmd_qbound, "q-boundedness path profile")):
        sub = add(name, func, text)
        sub.add_argument("--place", default="t")
        sub.add_argument("--level", action="append",
                         help="kummer:EXPR or defined:A0;A1;...;An (repeatable)")
        sub.add_argument("--pattern", choices=("uniformizer-chain",))
        sub.add_argument("--depth", type=int)
    sub = add("inert-tower", cmd_inert_tower, "tower with a single prime above (t)")
    sub.add_argument("--p", type=int, default=3)
    sub.add_argument("--degrees", default="2,2", help="step degrees separated by ','")
    sub.add_argument("--script", help="JSON script of choices from an earlier run")
    sub = add("sweep", cmd_sweep, "acceptance sweep suites")
    sub.add_argument("--suite", required=True, choices=sorted(SUITES))
    sub.add_argument("--max-cases", type=int)
    return parser


def _render_text(payload: dict) -> str:
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        elif value is None:
            value = "null"
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str] | None = None, out: TextIO | None = None,
        err: TextIO | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        defaults = _read_config(argv)
        args = build_parser(defaults).parse_args(argv)
        if args.command in ("tree", "qbound") and args.pattern and args.depth is None:
            raise ParseError("--pattern needs --depth")
        payload = args.func(args)
    except KummerLabError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 2
    payload = {"schema": SCHEMA, "command": args.command, "field": args.field, "q": args.q,
               **payload}
    if args.format == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write(_render_text(payload))
    return 0


def main() -> None:
    sys.exit(run())
