"""Command-line front end.

Verbs: pair, cobracket, normalize, iszero, lie-normalize, harrison, pi, ss,
dual-check, enumerate.  Expressions accept bar words (a|b|c), graph literals
(G[3; 1->2, 2->3](a,b,c)), bracket literals ([[a,b],c]) and product literals
((a*b)*c), with rational coefficients.  Output is tab-separated plain text;
identical invocations produce byte-identical output.  Exit codes: 0 success,
1 input error, 2 cap too small.
"""

import argparse
import os
import re
import sys
from fractions import Fraction

from .errors import (
    ArityMismatch,
    CapTooSmall,
    LiecographError,
    ParseError,
    UnknownGenerator,
)
from .elements import GeneratorTable, GraphElement, TreeElement
from .graphcoalg import cobracket, graphify, is_zero_in_E, to_bar_basis
from .liealg import lie_normal_form
from .linalg import spectral_pages
from .pairing import element_pair
from .presentations import DgcaPresentation, DgccPresentation, parse_presentation
from .functors import (
    build_E,
    check_duality,
    harrison_shuffle_model,
    rational_homotopy,
)
from .shapes import enumerate_graphs, enumerate_trees

DEFAULT_CAP_WEIGHT = 5
DEFAULT_CAP_DEGREE = 12


# ---------------------------------------------------------------------------
# expression parsing

_TOKEN_RE = re.compile(
    r"\s*(->|\d+/\d+|\d+|[A-Za-z_]\w*|[|\[\](),;*+-])")


def _tokenize(text):
    tokens = []  # (token, column)
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or not m.group(1):
            if text[pos:].strip() == "":
                break
            raise ParseError(f"cannot tokenize {text[pos:]!r}", line=1,
                             col=pos + 1)
        tokens.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    return tokens


class _ExprParser:
    """Linear combinations of graph-side or tree-side atoms."""

    def __init__(self, text, table, kind="auto"):
        self.text = text
        self.table = table
        self.kind = kind
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self, ahead=0):
        i = self.pos + ahead
        return self.toks[i][0] if i < len(self.toks) else None

    def take(self, expect=None):
        if self.pos >= len(self.toks):
            raise ParseError("unexpected end of expression", line=1,
                             col=len(self.text) + 1)
        tok, col = self.toks[self.pos]
        if expect is not None and tok != expect:
            raise ParseError(f"expected {expect!r}, found {tok!r}", line=1,
                             col=col)
        self.pos += 1
        return tok, col

    def parse(self):
        out = None
        sign = Fraction(1)
        if self.peek() in ("+", "-"):
            sign = Fraction(-1) if self.take()[0] == "-" else Fraction(1)
        while self.pos < len(self.toks):
            el = self.parse_term(sign)
            out = el if out is None else out.add(el)
            if self.peek() in ("+", "-"):
                sign = Fraction(-1) if self.take()[0] == "-" else Fraction(1)
                if self.pos >= len(self.toks):
                    raise ParseError("dangling sign at end of expression",
                                     line=1, col=len(self.text) + 1)
            elif self.pos < len(self.toks):
                tok, col = self.toks[self.pos]
                raise ParseError(f"unexpected token {tok!r}", line=1, col=col)
        if out is None:
            raise ParseError("empty expression", line=1, col=1)
        return out

    def parse_term(self, sign):
        coeff = sign
        while re.fullmatch(r"\d+/\d+|\d+", self.peek() or ""):
            coeff *= Fraction(self.take()[0])
            if self.peek() == "*":
                self.take()
        el = self.parse_atom()
        return el.scale(coeff)

    def parse_atom(self):
        tok = self.peek()
        if tok == "G":
            return self.parse_graph_literal()
        if tok in ("[", "("):
            return self._tree(self.parse_tree_node())
        if tok is not None and re.fullmatch(r"[A-Za-z_]\w*", tok):
            if self.peek(1) == "*":
                return self._tree(self.parse_tree_node())
            return self.parse_bar_word()
        t, col = self.toks[self.pos] if self.pos < len(self.toks) else ("", 1)
        raise ParseError(f"cannot parse atom at {t!r}", line=1, col=col)

    def _check_name(self, name, col):
        if name not in self.table:
            raise UnknownGenerator(f"unknown generator {name!r} (column {col})")

    def parse_bar_word(self):
        names = []
        name, col = self.take()
        self._check_name(name, col)
        names.append(name)
        while self.peek() == "|":
            self.take()
            name, col = self.take()
            self._check_name(name, col)
            names.append(name)
        if len(names) == 1 and self.kind == "tree":
            return TreeElement.leaf(self.table, names[0])
        return graphify(tuple(names), self.table)

    def parse_graph_literal(self):
        self.take("G")
        self.take("[")
        n = int(self.take()[0])
        self.take(";")
        edges = []
        while self.peek() != "]":
            a = int(self.take()[0])
            self.take("->")
            b = int(self.take()[0])
            edges.append((a, b))
            if self.peek() == ",":
                self.take()
        self.take("]")
        self.take("(")
        labels = []
        while self.peek() != ")":
            name, col = self.take()
            self._check_name(name, col)
            labels.append(name)
            if self.peek() == ",":
                self.take()
        self.take(")")
        if len(labels) != n:
            raise ArityMismatch(
                f"graph on {n} vertices given {len(labels)} labels")
        from .shapes import SGraph
        return GraphElement.from_term(self.table, SGraph(n, edges), labels)

    def parse_bracket(self):
        self.take("[")
        left = self.parse_tree_node()
        self.take(",")
        right = self.parse_tree_node()
        self.take("]")
        return (left, right)

    def parse_tree_node(self):
        """Products associate to the left: a*b*c parses as (a*b)*c."""
        node = self.parse_tree_unit()
        while self.peek() == "*":
            self.take()
            node = (node, self.parse_tree_unit())
        return node

    def parse_tree_unit(self):
        tok = self.peek()
        if tok == "[":
            return self.parse_bracket()
        if tok == "(":
            self.take("(")
            node = self.parse_tree_node()
            self.take(")")
            return node
        name, col = self.take()
        if not re.fullmatch(r"[A-Za-z_]\w*", name):
            raise ParseError(f"expected a generator, found {name!r}",
                             line=1, col=col)
        self._check_name(name, col)
        return name

    def _tree(self, key):
        return TreeElement.from_term(self.table, key)


def parse_expression(text, table, kind="auto"):
    """Parse a rational combination of bar words / graph literals (GraphElement)
    or bracket / product literals (TreeElement)."""
    return _ExprParser(text, table, kind).parse()


def _parse_gens(spec):
    """'a:2,b:3' -> GeneratorTable."""
    gens = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"([A-Za-z_]\w*):(\d+)", part)
        if not m:
            raise ParseError(f"cannot parse generator spec {part!r}")
        gens.append((m.group(1), int(m.group(2))))
    if not gens:
        raise ParseError("no generators given")
    return GeneratorTable(gens)


def _table_from_args(args):
    if getattr(args, "gens", None):
        return _parse_gens(args.gens)
    if getattr(args, "alg", None):
        A = parse_presentation(open(args.alg).read())
        if not isinstance(A, DgcaPresentation):
            raise ParseError(f"{args.alg} is not an algebra presentation")
        return GeneratorTable([(n, A.gen_degree[n]) for n in A.gen_names])
    raise ParseError("a generator table is required (--gens or --alg)")


# ---------------------------------------------------------------------------
# formatting

def _fmt_q(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_graph_key(key):
    (n, edges), labels = key
    es = ",".join(f"{a}->{b}" for a, b in edges)
    return f"G[{n}; {es}]({','.join(labels)})"


def _fmt_tree_key(key):
    if isinstance(key, str):
        return key
    return f"[{_fmt_tree_key(key[0])},{_fmt_tree_key(key[1])}]"


def _fmt_word(word):
    return "|".join(word)


def _caps_from_args(args):
    cw = getattr(args, "cap_weight", None)
    cd = getattr(args, "cap_degree", None)
    env = os.environ.get("LIECOGRAPH_CAP_OVERRIDE")
    if env:
        try:
            ew, ed = (int(x) for x in env.split(","))
        except ValueError:
            raise ParseError(
                f"LIECOGRAPH_CAP_OVERRIDE must be 'weight,degree', got {env!r}")
        cw = cw if cw is not None else ew
        cd = cd if cd is not None else ed
    return cw, cd


def _parse_window(text):
    m = re.fullmatch(r"(\d+)\.\.(\d+)", text)
    if not m:
        raise ParseError(f"window must look like 2..8, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise ParseError(f"empty window {text!r}")
    return lo, hi


# ---------------------------------------------------------------------------
# verbs

def _cmd_pair(args, out):
    table = _table_from_args(args)
    g = parse_expression(args.graph, table, kind="graph")
    t = parse_expression(args.tree, table, kind="tree")
    if not isinstance(g, GraphElement):
        raise ParseError("first argument must be a graph-side expression")
    if not isinstance(t, TreeElement):
        raise ParseError("second argument must be a tree-side expression")
    out.write(_fmt_q(element_pair(g, t)) + "\n")
    return 0


def _cmd_cobracket(args, out):
    table = _table_from_args(args)
    g = parse_expression(args.expr, table, kind="graph")
    cb = cobracket(g)
    lines = []
    for (k1, k2), c in cb.terms.items():
        lines.append((_fmt_graph_key(k1), _fmt_graph_key(k2), c))
    for a, b, c in sorted(lines):
        out.write(f"{_fmt_q(c)}\t{a}\t{b}\n")
    return 0


def _cmd_normalize(args, out):
    table = _table_from_args(args)
    g = parse_expression(args.expr, table, kind="graph")
    coords = to_bar_basis(g)
    for w in sorted(coords, key=lambda w: (len(w), w)):
        out.write(f"{_fmt_word(w)}\t{_fmt_q(coords[w])}\n")
    return 0


def _cmd_iszero(args, out):
    table = _table_from_args(args)
    g = parse_expression(args.expr, table, kind="graph")
    flag, witness = is_zero_in_E(g)
    out.write("zero\n" if flag else "nonzero\n")
    if not flag:
        keys, c = witness
        out.write("# witness tensor term: "
                  + " (x) ".join(_fmt_graph_key(k) for k in keys)
                  + f" -> {_fmt_q(c)}\n")
    return 0


def _cmd_lie_normalize(args, out):
    table = _table_from_args(args)
    t = parse_expression(args.expr, table, kind="tree")
    if not isinstance(t, TreeElement):
        raise ParseError("lie-normalize expects a tree-side expression")
    nf = lie_normal_form(t)
    for w in sorted(nf.terms):
        key = w[0]
        for x in w[1:]:
            key = f"[{key},{x}]"
        out.write(f"{key}\t{_fmt_q(nf.terms[w])}\n")
    return 0


def _load_algebra(path):
    A = parse_presentation(open(path).read())
    if not isinstance(A, DgcaPresentation):
        raise ParseError(f"{path} is not an algebra presentation")
    return A


def _cmd_pi(args, out):
    A = _load_algebra(args.file)
    lo, hi = _parse_window(args.window)
    cw, cd = _caps_from_args(args)
    pi = rational_homotopy(A, (lo, hi), cap_weight=cw, cap_degree=cd,
                           oracle=args.oracle)
    out.write(f"# caps: weight={cw if cw is not None else hi + 1} "
              f"degree={cd if cd is not None else hi}\n")
    for d in range(lo, hi + 1):
        out.write(f"{d}\t{pi[d]}\n")
    return 0


def _cmd_harrison(args, out):
    A = _load_algebra(args.file)
    lo, hi = _parse_window(args.window)
    cw = args.cap_weight if args.cap_weight is not None else hi + 2
    cd = args.cap_degree if args.cap_degree is not None else hi + 1
    H = harrison_shuffle_model(A, cw, cd)
    out.write(f"# caps: weight={cw} degree={cd}\n")
    hom = H.homology((lo, hi))
    for d in range(lo, hi + 1):
        out.write(f"{d}\t{hom[d]}\n")
    return 0


def _cmd_ss(args, out):
    A = _load_algebra(args.file)
    lo, hi = _parse_window(args.window)
    cw = args.cap_weight if args.cap_weight is not None else hi + 2
    cd = args.cap_degree if args.cap_degree is not None else hi + 1
    E = build_E(A, cw, cd)
    pages = spectral_pages(E.complex, args.pages, window=(lo, hi))
    out.write(f"# caps: weight={cw} degree={cd}\n")
    for r, page in enumerate(pages):
        for (w, d) in sorted(page):
            out.write(f"{r}\t{w}\t{d}\t{page[(w, d)]}\n")
    return 0


def _cmd_dual_check(args, out):
    A = _load_algebra(args.algebra)
    C = parse_presentation(open(args.coalgebra).read())
    if not isinstance(C, DgccPresentation):
        raise ParseError(f"{args.coalgebra} is not a coalgebra presentation")
    cw, cd = _caps_from_args(args)
    cw = cw if cw is not None else DEFAULT_CAP_WEIGHT
    cd = cd if cd is not None else DEFAULT_CAP_DEGREE
    out.write(f"# caps: weight={cw} degree={cd}\n")
    rep = check_duality(A, C, cw, cd)
    if rep.passed:
        out.write("pass\n")
        return 0
    out.write("FAIL\n")
    for v in rep.violations:
        out.write(f"# {v}\n")
    return 1


def _cmd_enumerate(args, out):
    n = args.weight
    if args.kind == "graphs":
        for G in enumerate_graphs(n):
            out.write(",".join(f"{a}->{b}" for a, b in G.edges) + "\n")
    else:
        for T in enumerate_trees(n):
            out.write(repr(T).replace(" ", "") + "\n")
    return 0


# ---------------------------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(
        prog="liecograph",
        description="graph coalgebra / Lie coalgebra calculator")
    sub = p.add_subparsers(dest="verb", required=True)

    def add_table_opts(sp):
        sp.add_argument("--gens", help="inline generator table, e.g. a:2,b:3")
        sp.add_argument("--alg", help="algebra presentation file for the table")

    def add_cap_opts(sp):
        sp.add_argument("--cap-weight", type=int, default=None)
        sp.add_argument("--cap-degree", type=int, default=None)

    sp = sub.add_parser("pair", help="configuration pairing of two expressions")
    sp.add_argument("graph")
    sp.add_argument("tree")
    add_table_opts(sp)
    sp.set_defaults(func=_cmd_pair)

    for verb, fn in (("cobracket", _cmd_cobracket),
                     ("normalize", _cmd_normalize),
                     ("iszero", _cmd_iszero),
                     ("lie-normalize", _cmd_lie_normalize)):
        sp = sub.add_parser(verb)
        sp.add_argument("expr")
        add_table_opts(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("pi", help="rational homotopy dimensions")
    sp.add_argument("file")
    sp.add_argument("--window", default="2..8")
    sp.add_argument("--oracle", action="store_true",
                    help="cross-check against the shuffle model")
    add_cap_opts(sp)
    sp.set_defaults(func=_cmd_pi)

    sp = sub.add_parser("harrison", help="shuffle-model homology")
    sp.add_argument("file")
    sp.add_argument("--window", default="1..6")
    add_cap_opts(sp)
    sp.set_defaults(func=_cmd_harrison)

    sp = sub.add_parser("ss", help="weight-filtration spectral sequence pages")
    sp.add_argument("file")
    sp.add_argument("--window", default="1..6")
    sp.add_argument("--pages", type=int, default=2)
    add_cap_opts(sp)
    sp.set_defaults(func=_cmd_ss)

    sp = sub.add_parser("dual-check", help="algebra/coalgebra duality report")
    sp.add_argument("algebra")
    sp.add_argument("coalgebra")
    add_cap_opts(sp)
    sp.set_defaults(func=_cmd_dual_check)

    sp = sub.add_parser("enumerate", help="list basis shapes of a weight")
    sp.add_argument("kind", choices=["graphs", "trees"])
    sp.add_argument("weight", type=int)
    sp.set_defaults(func=_cmd_enumerate)
    return p


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except CapTooSmall as e:
        print(f"error: cap-too-small: {e}", file=sys.stderr)
        return 2
    except LiecographError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
