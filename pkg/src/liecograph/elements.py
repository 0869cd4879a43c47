"""Graded elements: finite Q-linear combinations of (shape x label tensor)
terms over a table of graded generators.

Graph terms are stored in canonical form: the graph is relabeled to its
lexicographically minimal representative, the label tuple is permuted along
and the Koszul sign folded into the coefficient.  A term whose stabilizer
flips its own sign cancels to zero (odd generators on symmetric shapes).

Tree terms need no orbit bookkeeping: a planar tree with its leaf tensor is
stored as a nested tuple of generator names.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .errors import CapExceeded
from .shapes import SGraph, tree_leaves

__all__ = [
    "GeneratorTable",
    "koszul_sign",
    "GraphElement",
    "TreeElement",
    "TensorElement",
]


class GeneratorTable:
    """Ordered graded generators (name, degree >= 1)."""

    def __init__(self, gens):
        self.names = []
        self.degree = {}
        for name, deg in gens:
            if name in self.degree:
                raise ValueError(f"duplicate generator {name!r}")
            if deg < 1:
                raise ValueError(f"generator {name!r} has degree {deg} < 1; "
                                 "the table must be reduced")
            self.names.append(name)
            self.degree[name] = deg
        self.order = {n: i for i, n in enumerate(self.names)}

    def degrees_of(self, labels):
        return tuple(self.degree[x] for x in labels)

    def sort_key(self, name):
        return self.order[name]

    def __contains__(self, name):
        return name in self.degree

    def __repr__(self):
        return "GeneratorTable(%s)" % ", ".join(
            f"{n}:{self.degree[n]}" for n in self.names)


def koszul_sign(degrees, src):
    """Sign of rearranging a tensor of graded symbols: the output at position
    i is the input symbol src[i] (0-based).  Equals (-1)^k where k counts
    odd-odd inversions of the src sequence (the bubble-sort convention)."""
    sign = 1
    n = len(src)
    for i in range(n):
        if degrees[src[i]] % 2 == 0:
            continue
        for j in range(i + 1, n):
            if src[j] < src[i] and degrees[src[j]] % 2 == 1:
                sign = -sign
    return sign


def _is_path(n, edges):
    """If the underlying graph is a path, return its vertex order from one
    endpoint (the one making the sequence lex-smaller); else None."""
    adj = {v: [] for v in range(1, n + 1)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    ends = [v for v in adj if len(adj[v]) == 1]
    if n == 1:
        return (1,)
    if len(ends) != 2 or any(len(adj[v]) > 2 for v in adj):
        return None
    start = min(ends)
    order = [start]
    prev = None
    while len(order) < n:
        nxt = [u for u in adj[order[-1]] if u != prev]
        prev = order[-1]
        order.append(nxt[0])
    return tuple(order)


@lru_cache(maxsize=None)
def _canonical_perms(n, edges):
    """Canonical edge list of the shape and every permutation achieving it.
    Permutations are tuples p with vertex i |-> p[i-1].  Brute force for
    n <= 6; path shapes handled directly above that."""
    if n <= 6:
        best, perms = None, []
        for p in permutations(range(1, n + 1)):
            relab = tuple(sorted((p[a - 1], p[b - 1]) for a, b in edges))
            if best is None or relab < best:
                best, perms = relab, [p]
            elif relab == best:
                perms.append(p)
        return best, tuple(perms)
    order = _is_path(n, edges)
    if order is None:
        raise CapExceeded(
            f"canonicalization of non-path shapes capped at 6 vertices (got {n})")
    cands = []
    for seq in (order, order[::-1]):
        p = [0] * n
        for pos, v in enumerate(seq):
            p[v - 1] = pos + 1
        cands.append(tuple(p))
    best, perms = None, []
    for p in cands:
        relab = tuple(sorted((p[a - 1], p[b - 1]) for a, b in edges))
        if best is None or relab < best:
            best, perms = relab, [p]
        elif relab == best:
            perms.append(p)
    return best, tuple(perms)


def canonical_graph_term(n, edges, labels, degrees, order_key):
    """Canonical key and sign for a (graph, label tuple) term.

    Returns (canonical_edges, canonical_labels, sign); sign 0 means the term
    cancels against its own image under a stabilizer element."""
    best_edges, perms = _canonical_perms(n, tuple(edges))
    best_labels = None
    best = []  # (sign, perm) achieving minimal labels
    for p in perms:
        inv = [0] * n
        for i in range(n):
            inv[p[i] - 1] = i  # 0-based: position j of output takes input inv[j]
        new_labels = tuple(labels[inv[j]] for j in range(n))
        key = tuple(order_key(x) for x in new_labels)
        if best_labels is None or key < best_labels:
            best_labels = key
            best = [(koszul_sign(degrees, inv), new_labels)]
        elif key == best_labels:
            best.append((koszul_sign(degrees, inv), new_labels))
    signs = {s for s, _ in best}
    if len(signs) > 1:
        return best_edges, best[0][1], 0
    return best_edges, best[0][1], best[0][0]


class _Element:
    """Shared Q-linear-combination plumbing; terms: key -> Fraction."""

    def __init__(self, table, terms=None):
        self.table = table
        self.terms = {}
        if terms:
            for k, v in terms.items():
                v = Fraction(v)
                if v:
                    self.terms[k] = v

    def is_zero(self):
        return not self.terms

    def add(self, other):
        assert self.table is other.table
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, Fraction(0)) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return type(self)(self.table, out)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return type(self)(self.table)
        return type(self)(self.table, {k: c * v for k, v in self.terms.items()})

    def sub(self, other):
        return self.add(other.scale(-1))

    def __eq__(self, other):
        return (type(self) is type(other) and self.table is other.table
                and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))


class GraphElement(_Element):
    """Element of the cofree graph coalgebra on the table's generators.
    Term keys: ((n, edges), labels)."""

    @classmethod
    def from_term(cls, table, graph, labels, coeff=1):
        n = graph.n if isinstance(graph, SGraph) else graph[0]
        edges = graph.edges if isinstance(graph, SGraph) else tuple(graph[1])
        labels = tuple(labels)
        if len(labels) != n:
            raise ValueError(f"graph on {n} vertices with {len(labels)} labels")
        degs = table.degrees_of(labels)
        ce, cl, sign = canonical_graph_term(
            n, edges, labels, degs, table.sort_key)
        if sign == 0:
            return cls(table)
        return cls(table, {((n, ce), cl): Fraction(coeff) * sign})

    @classmethod
    def zero(cls, table):
        return cls(table)

    def term_weight(self, key):
        return key[0][0]

    def term_degree(self, key):
        return sum(self.table.degree[x] for x in key[1])

    def weights(self):
        return sorted({k[0][0] for k in self.terms})

    def component(self, weight):
        return GraphElement(self.table, {
            k: v for k, v in self.terms.items() if k[0][0] == weight})

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for ((n, edges), labels), c in sorted(
                self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            es = ", ".join(f"{a}->{b}" for a, b in edges)
            bits.append(f"{c} * G[{n}; {es}]({', '.join(labels)})")
        return " + ".join(bits)


class TreeElement(_Element):
    """Element of the free non-associative algebra on the table's generators.
    Term keys: nested tuples of generator names (leaf = name)."""

    @classmethod
    def leaf(cls, table, name, coeff=1):
        if name not in table:
            raise ValueError(f"unknown generator {name!r}")
        return cls(table, {name: Fraction(coeff)})

    @classmethod
    def from_term(cls, table, term, coeff=1):
        return cls(table, {term: Fraction(coeff)})

    def term_weight(self, key):
        return len(_term_leaves(key))

    def term_degree(self, key):
        return sum(self.table.degree[x] for x in _term_leaves(key))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c} * {k}" for k, c in sorted(
            self.terms.items(), key=lambda kv: str(kv[0])))


def _term_leaves(key):
    if isinstance(key, str):
        return (key,)
    return _term_leaves(key[0]) + _term_leaves(key[1])


def tree_term_labels(key):
    """Leaf names of a tree term key, left to right."""
    return _term_leaves(key)


def tree_term_shape(key):
    """The underlying planar tree with leaves labeled by position 1..n."""
    counter = [0]

    def build(k):
        if isinstance(k, str):
            counter[0] += 1
            return counter[0]
        return (build(k[0]), build(k[1]))

    return build(key)


class TensorElement(_Element):
    """Element of a tensor power of the graph coalgebra.  Term keys: tuples of
    GraphElement term keys."""

    @classmethod
    def from_factors(cls, table, factor_keys, coeff=1):
        return cls(table, {tuple(factor_keys): Fraction(coeff)})

    def arity(self):
        ks = {len(k) for k in self.terms}
        assert len(ks) <= 1
        return ks.pop() if ks else 0

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"{c} * {k}" for k, c in sorted(self.terms.items(), key=str))
