"""Command-line front end.

Grammar for object expressions (shared with the formal calculus renderer):

    obj   := atom | obj "[" int "]" | obj "(" int ")"
           | "cone(" obj "->" obj ")" | obj "+" obj
    atom  := "j*" sheaf | sheaf | name
    sheaf := ("O" | "S" | "S'" | "S''") [ "(" int ")" ]

Exit codes: 0 success, 1 verification failure, 2 indeterminate or
unsupported computation, 3 parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import cubic, formalcat, mukai, nodal, quadric
from .errors import (
    IndeterminateHom,
    NodalcatError,
    NotExceptional,
    ParityMismatch,
    RuleNotApplicable,
    UnknownGenerator,
    UnsupportedPair,
)
from .formalcat import Cone, Gen, ObjExpr

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_UNDECIDED = 2
EXIT_PARSE = 3


class ExprParseError(Exception):
    def __init__(self, message: str, column: int):
        self.column = column
        super().__init__(f"parse error at column {column}: {message}")


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<plus>\+)
  | (?P<int>-?\d+)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<lbr>\[)
  | (?P<rbr>\])
  | (?P<cone>cone(?=\())
  | (?P<gen>j\*(?:S''|S'|S|O)|(?:S''|S'|S|O)(?!['\w]))
  | (?P<name>[A-Za-z_]\w*)
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ExprParseError(f"unexpected character {text[pos]!r}", pos + 1)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    """Recursive descent over the object grammar; produces a raw tree.

    Raw nodes: ("gen", name), ("shift", node, m), ("twist", node, k),
    ("cone", a, b), ("sum", [nodes]).
    """

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            raise ExprParseError(f"expected {kind}, found {tok[1]!r}" if tok[1] else f"expected {kind}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        node = self.parse_sum()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprParseError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def parse_sum(self):
        parts = [self.parse_postfix()]
        while self.peek()[0] == "plus":
            self.take("plus")
            parts.append(self.parse_postfix())
        if len(parts) == 1:
            return parts[0]
        return ("sum", parts)

    def parse_postfix(self):
        node = self.parse_atom()
        while True:
            kind = self.peek()[0]
            if kind == "lbr":
                self.take("lbr")
                m = int(self.take("int")[1])
                self.take("rbr")
                node = ("shift", node, m)
            elif kind == "lpar":
                self.take("lpar")
                k = int(self.take("int")[1])
                self.take("rpar")
                node = ("twist", node, k)
            else:
                return node

    def parse_atom(self):
        tok = self.peek()
        if tok[0] == "cone":
            self.take("cone")
            self.take("lpar")
            a = self.parse_sum()
            self.take("arrow")
            b = self.parse_sum()
            self.take("rpar")
            return ("cone", a, b)
        if tok[0] in ("gen", "name", "int"):
            if tok[0] == "int" and tok[1] != "0":
                raise ExprParseError(f"unexpected {tok[1]!r}", tok[2])
            self.take(tok[0])
            return ("gen", tok[1])
        raise ExprParseError(
            f"expected an object, found {tok[1]!r}" if tok[1] else "expected an object",
            tok[2],
        )


def parse_raw(text: str):
    return _Parser(text).parse()


def _canon_gen(ctx: formalcat.Context, name: str) -> str:
    # "j*S(0)" and "j*S" denote the same generator; pin the canonical name
    ctx.resolve(name)
    if ctx.twist_gen is not None:
        return ctx.twist_gen(name, 0)
    return name


def resolve(ctx: formalcat.Context, node) -> ObjExpr:
    """Turn a raw parse tree into a normalized object over a context."""
    kind = node[0]
    if kind == "gen":
        if node[1] == "0":
            return formalcat.ZERO
        return Gen(_canon_gen(ctx, node[1]))
    if kind == "shift":
        return formalcat.shift_expr(resolve(ctx, node[1]), node[2])
    if kind == "twist":
        return formalcat.twist_expr(ctx, resolve(ctx, node[1]), node[2])
    if kind == "cone":
        return formalcat.normalize(Cone(resolve(ctx, node[1]), resolve(ctx, node[2])))
    return formalcat.sum_exprs((resolve(ctx, p), 1) for p in node[1])


def parse_expr(ctx: formalcat.Context, text: str) -> ObjExpr:
    """Parse and resolve an object expression over a context."""
    return resolve(ctx, parse_raw(text))


def parse_sheaf(text: str) -> quadric.QuadricSheaf:
    """Parse a bare sheaf expression O(k), S(k), S'(k), S''(k)."""
    node = parse_raw(text)
    twist = 0
    while node[0] == "twist":
        twist += node[2]
        node = node[1]
    if node[0] != "gen" or node[1].startswith("j*") or node[1] == "0":
        raise ExprParseError("expected a sheaf expression", 1)
    try:
        base = quadric.sheaf_from_string(node[1])
    except ValueError:
        raise ExprParseError(f"unknown sheaf {node[1]!r}", 1) from None
    return base.twisted(twist)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _context_for(spec: str) -> formalcat.Context:
    m = re.match(r"^nodal:(\d+)$", spec)
    if not m:
        raise ExprParseError(f"unknown context {spec!r} (expected nodal:<dim>)", 1)
    return nodal.build_context(int(m.group(1)))


def _cmd_cohom(args) -> int:
    sheaf = parse_sheaf(args.expr)
    print(quadric.cohomology(args.quadric, sheaf).render())
    return EXIT_OK


def _cmd_hom(args) -> int:
    ctx = _context_for(args.context)
    F = parse_expr(ctx, args.source)
    G = parse_expr(ctx, args.target)
    print(formalcat.hom(ctx, F, G).render())
    return EXIT_OK


def _cmd_mutate(args) -> int:
    ctx = _context_for(args.context)
    F = parse_expr(ctx, args.expr)
    through = [Gen(_canon_gen(ctx, t)) for t in args.through]
    mutate = formalcat.mutate_right if args.dir == "right" else formalcat.mutate_left
    print(formalcat.render(mutate(ctx, through, F)))
    return EXIT_OK


def _cmd_serre(args) -> int:
    m = re.match(r"^nodal:(\d+)$", args.context)
    if not m:
        raise ExprParseError(f"unknown context {args.context!r}", 1)
    d = int(m.group(1))
    ctx = nodal.build_context(d)
    F = parse_expr(ctx, args.expr)
    if args.relative:
        out = nodal.relative_serre(d, F)
    else:
        out = formalcat.serre_in(ctx, nodal.perp_collection(d), F)
    print(formalcat.render(out))
    return EXIT_OK


def _cmd_kernel(args) -> int:
    d = args.dim
    T = nodal.kernel_generator(d)
    k = 2 if d % 2 == 0 else 3
    report = formalcat.check_spherical(
        nodal.build_context(d), nodal.perp_collection(d), T, k
    )
    verdict = "pass" if report.passed else "FAIL"
    print(f"{formalcat.render(T)}, {k}-spherical: {verdict}")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _parse_dims(spec: str) -> range:
    m = re.match(r"^(\d+)(?:\.\.(\d+))?$", spec)
    if not m:
        raise ExprParseError(f"bad dimension range {spec!r} (expected a..b)", 1)
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    return range(lo, hi + 1)


def _cmd_verify(args) -> int:
    reports = [nodal.verify_dim(d) for d in _parse_dims(args.dims)]
    for rep in reports:
        status = "PASS" if rep.all_pass else "FAIL"
        print(f"dim {rep.dim}: {status}")
        for item in rep.items:
            mark = "ok " if item.passed else "BAD"
            print(f"  [{mark}] {item.id}: {item.got}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([rep.to_json() for rep in reports], fh, indent=2)
            fh.write("\n")
    return EXIT_OK if all(rep.all_pass for rep in reports) else EXIT_VERIFY_FAILED


def _cmd_cubic4(args) -> int:
    report = cubic.verify_cubic()
    for item in report["items"]:
        mark = "ok " if item["pass"] else "BAD"
        print(f"[{mark}] {item['id']}: {item['got']}")
    print("trace:")
    for entry in report["trace"]:
        print(f"  {entry['rule']} {entry['step']}: {entry['result']}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return EXIT_OK if report["all_pass"] else EXIT_VERIFY_FAILED


def _cmd_mukai(args) -> int:
    sheaf = parse_sheaf(args.expr)
    ch = mukai.ch_sheaf(3, sheaf)
    v = mukai.restrict_to_k3(ch)
    print(f"ch = {ch.render()}")
    print(f"v = {v.render()}")
    print(f"<v,v> = {mukai.mukai_pairing(v, v)}")
    print(f"chi = {mukai.chi_k3(v, v)}")
    return EXIT_OK


def build_arg_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="nodalcat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohom", help="graded cohomology of a sheaf on a quadric")
    p.add_argument("--quadric", type=int, required=True, metavar="N")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_cohom)

    p = sub.add_parser("hom", help="graded Hom between objects of a context")
    p.add_argument("--context", required=True)
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=_cmd_hom)

    p = sub.add_parser("mutate", help="mutate an object through generators")
    p.add_argument("--context", required=True)
    p.add_argument("--dir", choices=("right", "left"), default="right")
    p.add_argument("--through", action="append", required=True, metavar="GEN")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_mutate)

    p = sub.add_parser("serre", help="Serre functor of the resolution component")
    p.add_argument("--context", required=True)
    p.add_argument("--relative", action="store_true")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_serre)

    p = sub.add_parser("kernel", help="kernel generator and its sphericalness")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("verify", help="full verification battery over dimensions")
    p.add_argument("--dims", required=True, metavar="A..B")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("cubic4", help="nodal cubic fourfold pipeline")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=_cmd_cubic4)

    p = sub.add_parser("mukai", help="Mukai vector of a sheaf restricted to the K3")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_mukai)

    return parser


def main(argv=None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_PARSE
    try:
        return args.func(args)
    except ExprParseError as exc:
        print(f"nodalcat: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (IndeterminateHom, UnsupportedPair, UnknownGenerator, NotExceptional,
            ParityMismatch, RuleNotApplicable) as exc:
        print(f"nodalcat: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except NodalcatError as exc:
        print(f"nodalcat: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except ValueError as exc:
        print(f"nodalcat: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
