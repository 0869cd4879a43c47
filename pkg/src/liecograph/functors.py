"""Builders turning algebra/coalgebra presentations into bigraded complexes.

From a commutative algebra presentation A:
  build_G   — graph words on the desuspended monomial basis, with the
              edge-contraction differential and the slot-wise internal one;
  build_E   — its Lie-coalgebra quotient realized directly on bar-word
              coordinates (designated-leading words per content);
  harrison_shuffle_model — an independent realization of the same quotient:
              all words modulo the shuffle subspace (the homology oracle).

From either of those, build_A_hat gives the free graded-commutative algebra
on the suspended basis with the cobracket-splitting differential.

From a coalgebra presentation C, build_L gives the free Lie algebra on the
desuspended basis with the coproduct-splitting differential; from finite Lie
algebra data, build_C gives the cofree word model with the bracket-merging
differential.

check_duality, check_twisting, rational_homotopy and spectral-sequence
reporting sit on top.
"""

from fractions import Fraction
from itertools import combinations

from .errors import (
    CapTooSmall,
    DegreeMismatch,
    InvalidInput,
    InvalidPresentation,
    NotDual,
    NotSimplyConnected,
)
from .linalg import BasedSpace, BigradedComplex, SparseMatrix, total_homology
from .shapes import SGraph, contract_edge, enumerate_graphs
from .elements import (
    GeneratorTable,
    GraphElement,
    TreeElement,
    koszul_sign,
    _canonical_perms,
)
from .graphcoalg import _distinct_arrangements, cobracket, graphify, iterated_cobracket
from .liealg import _content_reduction, lie_normal_form
from .pairing import element_pair
from .presentations import DgcaPresentation, DgccPresentation

__all__ = [
    "DgComplexBundle",
    "LieAlgebraData",
    "build_G",
    "build_E",
    "build_A_hat",
    "build_L",
    "build_C",
    "harrison_shuffle_model",
    "check_duality",
    "check_twisting",
    "canonical_twisting_function",
    "rational_homotopy",
    "dualize",
    "DualityReport",
    "TwistingReport",
]


def _mono_name(m):
    return "*".join(m)


def _add_into(acc, key, val):
    s = acc.get(key, Fraction(0)) + val
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


class DgComplexBundle:
    """A truncated bigraded complex with named basis keys.

    kind: E_of_A | G_of_A | A_of_E | L_of_C | C_of_L | harrison.
    key_bidegree maps each basis key to its (w, d) piece; dv_of_key /
    dh_of_key give the two differentials as key-indexed sparse columns."""

    def __init__(self, kind, complex, presentation, caps, key_bidegree,
                 dv_of_key, dh_of_key, **extras):
        self.kind = kind
        self.complex = complex
        self.presentation = presentation
        self.caps = caps
        self.key_bidegree = key_bidegree
        self.dv_of_key = dv_of_key
        self.dh_of_key = dh_of_key
        self.__dict__.update(extras)

    def dims(self):
        return {bd: sp.dimension for bd, sp in self.complex.pieces.items()
                if sp.dimension}

    def differential_of_key(self, key):
        out = dict(self.dv_of_key.get(key, ()))
        for k, v in self.dh_of_key.get(key, {}).items():
            _add_into(out, k, v)
        return out

    def homology(self, window):
        return total_homology(self.complex, window)

    def __repr__(self):
        return (f"DgComplexBundle(kind={self.kind}, "
                f"pieces={len(self.complex.pieces)})")


def _assemble_complex(pieces_keys, key_bidegree, dv_of_key, dh_of_key,
                      complete):
    pieces = {}
    index = {}
    for bd, keys in pieces_keys.items():
        if keys:
            pieces[bd] = BasedSpace(keys)
            for j, k in enumerate(keys):
                index[k] = j
    dvm, dhm = {}, {}
    for table, store, shift in ((dv_of_key, dvm, (0, 1)),
                               (dh_of_key, dhm, (-1, 1))):
        cols = {}
        for key, terms in table.items():
            w, d = key_bidegree[key]
            tb = (w + shift[0], d + shift[1])
            for k2, c in terms.items():
                assert key_bidegree[k2] == tb, (
                    f"differential term leaves its target piece: "
                    f"{key} ({w},{d}) -> {k2} {key_bidegree[k2]}")
                cols.setdefault((w, d), {})[(index[k2], index[key])] = c
        for bd, entries in cols.items():
            w, d = bd
            tb = (w + shift[0], d + shift[1])
            store[bd] = SparseMatrix(len(pieces_keys.get(tb, ())),
                                     len(pieces_keys[bd]), entries)
    return BigradedComplex(pieces, dvm, dhm, complete)


# ---------------------------------------------------------------------------
# monomial slot alphabets and content enumeration

def _slot_alphabet(A, cap_degree):
    """GeneratorTable of A's basis monomials with slot degree = degree - 1,
    plus the name -> monomial map."""
    if not A.is_simply_connected():
        raise NotSimplyConnected(
            "input algebra must be generated in degrees >= 2")
    monos = A.monomials(cap_degree + 1)
    table = GeneratorTable(
        [(_mono_name(m), A.monomial_degree(m) - 1) for m in monos])
    return table, {_mono_name(m): m for m in monos}


def _contents(table, cap_weight, cap_degree):
    """Multisets of slot names (tuples in table order) with bounded size and
    total slot degree, in deterministic order."""
    names = table.names
    out = []

    def rec(i, cur, d):
        if cur:
            out.append(tuple(cur))
        if len(cur) == cap_weight:
            return
        for j in range(i, len(names)):
            nd = d + table.degree[names[j]]
            if nd <= cap_degree:
                rec(j, cur + [names[j]], nd)

    rec(0, [], 0)
    return out


def _content_bidegree(table, content):
    return len(content), sum(table.degree[x] for x in content)


# ---------------------------------------------------------------------------
# bar-word coordinates via the iterated cobracket

def _vec_of_element(g):
    """Injective linear coordinates of g's Lie-coalgebra class: the fully
    iterated cobracket as a map into tensors of single slots."""
    out = {}
    for n in g.weights():
        t = iterated_cobracket(g.component(n), n - 1)
        for keys, c in t.terms.items():
            names = tuple(k[1][0] for k in keys)
            _add_into(out, names, c)
    return out


class _ContentSolver:
    """Per-content bar basis: designated-leading words whose iterated-cobracket
    vectors are independent, with exact projection onto them."""

    def __init__(self, table, content):
        self.table = table
        self.content = content
        g0 = min(content, key=table.sort_key)
        rest = list(content)
        rest.remove(g0)
        cands = [(g0,) + t for t in _distinct_arrangements(tuple(rest))]
        self.basis = []
        self._ech = []  # (pivot coord, vec, expression over basis words)
        for w in cands:
            vec = dict(_vec_of_element(graphify(w, table)))
            expr = {w: Fraction(1)}
            self._reduce(vec, expr)
            if vec:
                piv = min(vec)
                c = vec[piv]
                self._ech.append((piv,
                                  {k: v / c for k, v in vec.items()},
                                  {k: v / c for k, v in expr.items()}))
                self.basis.append(w)

    def _reduce(self, vec, expr):
        for piv, evec, eexpr in self._ech:
            f = vec.get(piv)
            if f:
                for k, v in evec.items():
                    _add_into(vec, k, -f * v)
                for k, v in eexpr.items():
                    _add_into(expr, k, -f * v)

    def project_vec(self, vec):
        """Coordinates over basis words of a class given by its iterated-
        cobracket vector; the class must lie in this content's span."""
        vec = dict(vec)
        coords = {}
        for piv, evec, eexpr in self._ech:
            f = vec.get(piv)
            if f:
                for k, v in evec.items():
                    _add_into(vec, k, -f * v)
                for k, v in eexpr.items():
                    _add_into(coords, k, f * v)
        if vec:
            raise AssertionError(
                f"class not in the bar-word span of content {self.content}")
        return coords


# ---------------------------------------------------------------------------
# build_E

def build_E(A, cap_weight=None, cap_degree=None):
    """Lie-coalgebra model of a commutative algebra presentation, realized on
    designated-leading bar words; pieces (w, d) = (word length, total slot
    degree), vertical = slot-wise internal differential, horizontal = the
    adjacent-slot multiplication differential."""
    cw = cap_weight if cap_weight is not None else A.cap_weight
    cd = cap_degree if cap_degree is not None else A.cap_degree
    table, mono_of = _slot_alphabet(A, cd)
    solvers = {}

    def solver(content):
        s = solvers.get(content)
        if s is None:
            s = solvers[content] = _ContentSolver(table, content)
        return s

    pieces_keys = {}
    key_bidegree = {}
    key_content = {}
    for content in _contents(table, cw, cd):
        w, d = _content_bidegree(table, content)
        words = solver(content).basis
        if words:
            pieces_keys.setdefault((w, d), []).extend(words)
        for word in words:
            key_bidegree[word] = (w, d)
            key_content[word] = content

    def project_word(raw, coeff, acc):
        """Accumulate coeff * (class of the raw word) in basis coordinates."""
        content = tuple(sorted(raw, key=table.sort_key))
        vec = _vec_of_element(graphify(raw, table))
        if not vec:
            return
        for k, v in solver(content).project_vec(vec).items():
            _add_into(acc, k, coeff * v)

    dv_of_key, dh_of_key = {}, {}
    for word, (w, d) in key_bidegree.items():
        if d >= cd:
            continue  # target pieces beyond caps
        sdegs = [table.degree[x] for x in word]
        dv = {}
        for i, name in enumerate(word):
            dm = A.differential_of_monomial(mono_of[name])
            if not dm:
                continue
            sgn = -((-1) ** sum(sdegs[:i]))
            for m2, c in dm.items():
                raw = word[:i] + (_mono_name(m2),) + word[i + 1:]
                project_word(raw, sgn * c, dv)
        if dv:
            dv_of_key[word] = dv
        dh = {}
        for i in range(w - 1):
            prod, ps = A.multiply(mono_of[word[i]], mono_of[word[i + 1]])
            if not ps:
                continue
            sgn = ((-1) ** sum(sdegs[:i])) * ((-1) ** (sdegs[i] + 1)) * ps
            raw = word[:i] + (_mono_name(prod),) + word[i + 2:]
            project_word(raw, sgn, dh)
        if dh:
            dh_of_key[word] = dh

    complete = (0, min(cw, cd))
    cx = _assemble_complex(pieces_keys, key_bidegree, dv_of_key, dh_of_key,
                           complete)

    def project_element(g):
        """Bar-basis coordinates of a GraphElement over the slot alphabet."""
        acc = {}
        by_content = {}
        for key, c in g.terms.items():
            content = tuple(sorted(key[1], key=table.sort_key))
            by_content.setdefault(content, {})[key] = c
        for content, terms in by_content.items():
            vec = _vec_of_element(GraphElement(table, terms))
            if not vec:
                continue
            for k, v in solver(content).project_vec(vec).items():
                _add_into(acc, k, v)
        return acc

    def key_cobracket(word):
        out = {}
        cb = cobracket(graphify(word, table))
        for (k1, k2), c in cb.terms.items():
            p1 = project_element(GraphElement(table, {k1: Fraction(1)}))
            p2 = project_element(GraphElement(table, {k2: Fraction(1)}))
            for w1, c1 in p1.items():
                for w2, c2 in p2.items():
                    _add_into(out, (w1, w2), c * c1 * c2)
        return out

    return DgComplexBundle(
        "E_of_A", cx, A, (cw, cd), key_bidegree, dv_of_key, dh_of_key,
        slot_table=table, monomial_of=mono_of, project_element=project_element,
        key_cobracket=key_cobracket)


# ---------------------------------------------------------------------------
# build_G

def build_G(A, cap_weight=None, cap_degree=None):
    """Graph-coalgebra model: canonical graph terms labeled by desuspended
    monomials; horizontal differential contracts edges (multiplying labels),
    vertical applies the internal differential slot-wise."""
    cw = cap_weight if cap_weight is not None else A.cap_weight
    cd = cap_degree if cap_degree is not None else A.cap_degree
    table, mono_of = _slot_alphabet(A, cd)

    pieces_keys = {}
    key_bidegree = {}
    for content in _contents(table, cw, cd):
        w, d = _content_bidegree(table, content)
        keys = set()
        for G in enumerate_graphs(w):
            if _canonical_perms(w, G.edges)[0] != G.edges:
                continue  # one representative per relabeling orbit
            for labels in _distinct_arrangements(content):
                el = GraphElement.from_term(table, G, labels)
                keys.update(el.terms)
        keys = sorted(keys)
        if keys:
            pieces_keys.setdefault((w, d), []).extend(keys)
        for k in keys:
            key_bidegree[k] = (w, d)

    dv_of_key, dh_of_key = {}, {}
    for key, (w, d) in key_bidegree.items():
        if d >= cd:
            continue
        (n, edges), labels = key
        sdegs = [table.degree[x] for x in labels]
        dv = {}
        for i, name in enumerate(labels):
            dm = A.differential_of_monomial(mono_of[name])
            if not dm:
                continue
            sgn = -((-1) ** sum(sdegs[:i]))
            for m2, c in dm.items():
                newlabels = labels[:i] + (_mono_name(m2),) + labels[i + 1:]
                el = GraphElement.from_term(
                    table, SGraph(n, edges, _checked=True), newlabels,
                    sgn * c)
                for k2, c2 in el.terms.items():
                    _add_into(dv, k2, c2)
        if dv:
            dv_of_key[key] = dv
        dh = {}
        G = SGraph(n, edges, _checked=True)
        for e, (s, t) in enumerate(edges):
            ms, mt = mono_of[labels[s - 1]], mono_of[labels[t - 1]]
            prod, ps = A.multiply(ms, mt)
            if not ps:
                continue
            # reorder labels so slot t sits right after slot s, then merge
            order = [v for v in range(1, n + 1) if v != t]
            order.insert(order.index(s) + 1, t)
            ksgn = koszul_sign(sdegs, [v - 1 for v in order])
            pos = order.index(s)
            local = ((-1) ** sum(sdegs[order[j] - 1] for j in range(pos))
                     ) * ((-1) ** (sdegs[s - 1] + 1))
            H, _ = contract_edge(G, e)
            remap = {v: v - (1 if v > t else 0)
                     for v in range(1, n + 1) if v != t}
            newlabels = [None] * (n - 1)
            for v in range(1, n + 1):
                if v == t:
                    continue
                newlabels[remap[v] - 1] = labels[v - 1]
            newlabels[remap[s] - 1] = _mono_name(prod)
            el = GraphElement.from_term(table, H, tuple(newlabels),
                                        ksgn * local * ps)
            for k2, c2 in el.terms.items():
                _add_into(dh, k2, c2)
        if dh:
            dh_of_key[key] = dh

    complete = (0, min(cw, cd))
    cx = _assemble_complex(pieces_keys, key_bidegree, dv_of_key, dh_of_key,
                           complete)

    def key_cobracket(key):
        out = {}
        cb = cobracket(GraphElement(table, {key: Fraction(1)}))
        for (k1, k2), c in cb.terms.items():
            _add_into(out, (k1, k2), c)
        return out

    return DgComplexBundle(
        "G_of_A", cx, A, (cw, cd), key_bidegree, dv_of_key, dh_of_key,
        slot_table=table, monomial_of=mono_of, key_cobracket=key_cobracket)


# ---------------------------------------------------------------------------
# word machinery shared by the 'A-hat' and 'C' builders

def _sorted_word(letters, sdeg):
    """Sort letter indices ascending; returns (word, sign) with the Koszul
    sign of the sort, 0 when an odd letter repeats."""
    seq = list(letters)
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    sign = koszul_sign([sdeg[i] for i in seq], order)
    word = tuple(seq[i] for i in order)
    for a in range(len(word) - 1):
        if word[a] == word[a + 1] and sdeg[word[a]] % 2:
            return word, 0
    return word, sign


def _enumerate_words(letter_ids, sdeg, cap_letters, cap_degree):
    out = []

    def rec(i, cur, d):
        if cur:
            out.append(tuple(cur))
        if len(cur) == cap_letters:
            return
        for j in range(i, len(letter_ids)):
            lid = letter_ids[j]
            nd = d + sdeg[lid]
            if nd > cap_degree:
                continue
            if sdeg[lid] % 2 and cur and cur[-1] == lid:
                continue
            rec(j, cur + [lid], nd)

    rec(0, [], 0)
    return out


def build_A_hat(G, cap_letters=3, cap_degree=None):
    """Free graded-commutative algebra on the suspended basis of a graph or
    bar-word bundle; horizontal differential splits a letter along the
    cobracket, vertical extends the bundle's total differential."""
    if not isinstance(G, DgComplexBundle) or not hasattr(G, "key_cobracket"):
        raise InvalidInput(
            "build_A_hat needs a bundle with cobracket support "
            "(output of build_G or build_E)")
    inner_lo, inner_hi = G.complex.complete_degrees
    if cap_degree is None:
        cap_degree = inner_hi + 1
    letters = sorted(G.key_bidegree, key=lambda k: (G.key_bidegree[k], str(k)))
    index = {k: i for i, k in enumerate(letters)}
    sdeg = [G.key_bidegree[k][1] + 1 for k in letters]
    K = cap_letters + 1

    words = _enumerate_words(range(len(letters)), sdeg, cap_letters,
                             cap_degree)
    pieces_keys = {}
    key_bidegree = {}
    for word in words:
        bd = (K - len(word), sum(sdeg[i] for i in word))
        pieces_keys.setdefault(bd, []).append(word)
        key_bidegree[word] = bd

    complete = (0, min(cap_degree, inner_hi, 2 * cap_letters + 1))

    def emit(acc, raw_letters, coeff):
        w2, sgn = _sorted_word(raw_letters, sdeg)
        if sgn and coeff:
            if w2 not in key_bidegree:
                bd = (K - len(w2), sum(sdeg[i] for i in w2))
                assert bd[1] > complete[1], (
                    f"word {w2} missing inside the complete range")
                return
            _add_into(acc, w2, coeff * sgn)

    dv_of_key, dh_of_key = {}, {}
    for word in words:
        dv, dh = {}, {}
        for j, lid in enumerate(word):
            pref = (-1) ** sum(sdeg[i] for i in word[:j])
            for k2, c in G.differential_of_key(letters[lid]).items():
                raw = word[:j] + (index[k2],) + word[j + 1:]
                emit(dv, raw, -pref * c)
            for (k1, k2), c in G.key_cobracket(letters[lid]).items():
                raw = word[:j] + (index[k1], index[k2]) + word[j + 1:]
                s1 = (-1) ** G.key_bidegree[k1][1]
                emit(dh, raw, Fraction(1, 2) * pref * s1 * c)
        if dv:
            dv_of_key[word] = dv
        if dh:
            dh_of_key[word] = dh

    cx = _assemble_complex(pieces_keys, key_bidegree, dv_of_key, dh_of_key,
                           complete)
    return DgComplexBundle(
        "A_of_E", cx, G, (cap_letters, cap_degree), key_bidegree,
        dv_of_key, dh_of_key, letters=letters, letter_sdeg=sdeg,
        weight_offset=K)


# ---------------------------------------------------------------------------
# build_L

def build_L(C, cap_weight=None, cap_degree=None):
    """Free Lie algebra on the desuspended coalgebra basis, on left-comb word
    coordinates; horizontal differential splits a letter along the reduced
    coproduct, vertical applies the internal differential slot-wise.

    Degrees are re-indexed so both differentials raise the index by one:
    piece (K - word length, OFF - natural degree) with K = cap_weight + 1,
    OFF = cap_degree + 1 (recorded as weight_offset / degree_offset)."""
    cw = cap_weight if cap_weight is not None else C.cap_weight
    cd = cap_degree if cap_degree is not None else C.cap_degree
    for name in C.class_names:
        if C.class_degree[name] < 2:
            raise NotSimplyConnected(
                f"coalgebra class {name!r} has degree < 2")
        if C.class_degree[name] == 2 and C.codiff.get(name):
            raise InvalidPresentation(
                f"differential of degree-2 class {name!r} must vanish")
    table = GeneratorTable(
        [(name, C.class_degree[name] - 1) for name in C.class_names])
    K = cw + 1
    OFF = cd + 1

    pieces_keys = {}
    key_bidegree = {}
    key_natural = {}
    for content in _contents(table, cw, cd):
        k, nat = _content_bidegree(table, content)
        words, rel_ech = _content_reduction(table, content)
        basis = [w for i, w in enumerate(words) if i not in rel_ech]
        bd = (K - k, OFF - nat)
        if basis:
            pieces_keys.setdefault(bd, []).extend(basis)
        for w in basis:
            key_bidegree[w] = bd
            key_natural[w] = (k, nat)

    def normalize(tree_terms, acc):
        """tree_terms: {nested tree: coeff}; accumulate normal form."""
        el = lie_normal_form(TreeElement(table, tree_terms))
        for w, c in el.terms.items():
            if w not in key_bidegree:
                k, nat = len(w), sum(table.degree[x] for x in w)
                assert k > cw or nat > cd, (
                    f"comb word {w} missing inside caps")
                continue
            _add_into(acc, w, c)

    def nest_with(word, i, repl):
        leaves = list(word[:i]) + [repl] + list(word[i + 1:])
        t = leaves[0]
        for x in leaves[1:]:
            t = (t, x)
        return t

    dv_of_key, dh_of_key = {}, {}
    for word, (k, nat) in key_natural.items():
        sdegs = [table.degree[x] for x in word]
        dv, dh = {}, {}
        for i, name in enumerate(word):
            pref = (-1) ** sum(sdegs[:i])
            for c, a in C.codiff.get(name, ()):
                normalize({nest_with(word, i, a): -pref * c}, dv)
            for c, a, b in C.coprod.get(name, ()):
                s1 = (-1) ** C.class_degree[a]
                normalize({nest_with(word, i, (a, b)):
                           Fraction(1, 2) * pref * s1 * c}, dh)
        if dv:
            dv_of_key[word] = dv
        if dh:
            dh_of_key[word] = dh

    complete_nat_hi = min(cw, cd)  # natural degrees fully enumerated
    complete = (OFF - complete_nat_hi, OFF - 1)
    cx = _assemble_complex(pieces_keys, key_bidegree, dv_of_key, dh_of_key,
                           complete)
    return DgComplexBundle(
        "L_of_C", cx, C, (cw, cd), key_bidegree, dv_of_key, dh_of_key,
        letter_table=table, weight_offset=K, degree_offset=OFF,
        key_natural=key_natural)


# ---------------------------------------------------------------------------
# build_C

class LieAlgebraData:
    """Finite graded Lie algebra data: named classes with degrees, a bracket
    table {(a, b): [(coeff, name), ...]} (closed under graded antisymmetry),
    and an optional differential {name: [(coeff, name), ...]} of degree -1."""

    def __init__(self, classes, brackets=None, differentials=None):
        self.class_names = [n for n, _ in classes]
        self.class_degree = dict(classes)
        if len(self.class_degree) != len(classes):
            raise InvalidInput("duplicate class names")
        self.brackets = {}
        for (a, b), terms in (brackets or {}).items():
            self._set_bracket(a, b, [(Fraction(c), n) for c, n in terms if c])
        self.differentials = {
            n: [(Fraction(c), m) for c, m in terms if c]
            for n, terms in (differentials or {}).items()}
        self._validate()

    def _set_bracket(self, a, b, terms):
        self.brackets[(a, b)] = terms
        flip = -((-1) ** (self.class_degree[a] * self.class_degree[b]))
        flipped = [(flip * c, n) for c, n in terms]
        if (b, a) in self.brackets and self.brackets[(b, a)] != flipped:
            raise InvalidInput(f"bracket table not antisymmetric on {a},{b}")
        self.brackets[(b, a)] = flipped

    def bracket(self, a, b):
        return self.brackets.get((a, b), [])

    def _validate(self):
        for (a, b), terms in self.brackets.items():
            want = self.class_degree[a] + self.class_degree[b]
            for _, n in terms:
                if self.class_degree[n] != want:
                    raise InvalidInput(
                        f"bracket [{a},{b}] target {n} has wrong degree")
        for n, terms in self.differentials.items():
            for _, m in terms:
                if self.class_degree[m] != self.class_degree[n] - 1:
                    raise InvalidInput(
                        f"differential {n} -> {m} is not degree -1")


def build_C(L, cap_weight=None, cap_degree=None):
    """Cofree cocommutative word model on the suspended Lie algebra basis;
    horizontal differential merges a pair of letters along the bracket,
    vertical applies the internal differential slot-wise.

    Degrees re-indexed as in build_L: piece (word length, OFF - natural)."""
    if not isinstance(L, LieAlgebraData):
        raise InvalidInput("build_C needs LieAlgebraData")
    cw = cap_weight if cap_weight is not None else 3
    names = L.class_names
    sdeg = [L.class_degree[n] + 1 for n in names]
    if cap_degree is None:
        cap_degree = cw * max(sdeg, default=1)
    OFF = cap_degree + 1

    words = _enumerate_words(range(len(names)), sdeg, cw, cap_degree)
    pieces_keys = {}
    key_bidegree = {}
    for word in words:
        nat = sum(sdeg[i] for i in word)
        bd = (len(word), OFF - nat)
        pieces_keys.setdefault(bd, []).append(word)
        key_bidegree[word] = bd

    complete_nat_hi = cap_degree
    complete = (OFF - complete_nat_hi, OFF - 1)

    def emit(acc, raw_letters, coeff):
        w2, sgn = _sorted_word(raw_letters, sdeg)
        if sgn and coeff:
            if w2 not in key_bidegree:
                nat = sum(sdeg[i] for i in w2)
                assert len(w2) > cw or nat > cap_degree, (
                    f"word {w2} missing inside caps")
                return
            _add_into(acc, w2, coeff * sgn)

    dv_of_key, dh_of_key = {}, {}
    for word in words:
        dv, dh = {}, {}
        for j, lid in enumerate(word):
            pref = (-1) ** sum(sdeg[i] for i in word[:j])
            for c, m in L.differentials.get(names[lid], ()):
                raw = word[:j] + (names.index(m),) + word[j + 1:]
                emit(dv, raw, -pref * c)
        for p, q in combinations(range(len(word)), 2):
            vp, vq = names[word[p]], names[word[q]]
            terms = L.bracket(vp, vq)
            if not terms:
                continue
            crossing = sum(sdeg[word[l]] for l in range(p + 1, q))
            sign = ((-1) ** sum(sdeg[word[l]] for l in range(p))
                    ) * ((-1) ** (sdeg[word[q]] * crossing)
                    ) * ((-1) ** L.class_degree[vp])
            for c, m in terms:
                raw = (word[:p] + (names.index(m),) + word[p + 1:q]
                       + word[q + 1:])
                emit(dh, raw, sign * c)
        if dv:
            dv_of_key[word] = dv
        if dh:
            dh_of_key[word] = dh

    cx = _assemble_complex(pieces_keys, key_bidegree, dv_of_key, dh_of_key,
                           complete)
    return DgComplexBundle(
        "C_of_L", cx, L, (cw, cap_degree), key_bidegree, dv_of_key,
        dh_of_key, letter_names=names, letter_sdeg=sdeg, degree_offset=OFF)


# ---------------------------------------------------------------------------
# Harrison shuffle oracle

def harrison_shuffle_model(A, cap_weight=None, cap_degree=None):
    """Independent realization of the commutative bar quotient: all words on
    the desuspended monomial alphabet modulo the shuffle subspace, with the
    standard bar differentials reduced modulo the same subspace.  Shares no
    machinery with the pairing/cobracket pipeline."""
    cw = cap_weight if cap_weight is not None else A.cap_weight
    cd = cap_degree if cap_degree is not None else A.cap_degree
    table, mono_of = _slot_alphabet(A, cd)

    comps = {}

    class _Comp:
        def __init__(self, content):
            self.words = _distinct_arrangements(content)
            self.widx = {w: i for i, w in enumerate(self.words)}
            sd = {x: table.degree[x] for x in content}
            ech = {}
            for a in self.words:
                degs = [sd[x] for x in a]
                for k in range(1, len(a)):
                    row = {}
                    for src in _interleavings(k, len(a) - k):
                        w = tuple(a[i] for i in src)
                        _add_into(row, self.widx[w],
                                  Fraction(koszul_sign(degs, list(src))))
                    self._echelon_insert(ech, row)
            self.ech = ech
            self.basis = [w for i, w in enumerate(self.words) if i not in ech]

        @staticmethod
        def _echelon_insert(ech, row):
            row = dict(row)
            while row:
                c = min(row)
                if c in ech:
                    f = row[c]
                    for cc, vv in ech[c].items():
                        _add_into(row, cc, -f * vv)
                else:
                    inv = Fraction(1) / row[c]
                    ech[c] = {cc: inv * vv for cc, vv in row.items()}
                    break

        def reduce(self, raw_word, coeff, acc):
            # eliminate pivot coordinates against the relation echelon
            vec = {self.widx[raw_word]: coeff}
            again = True
            while again:
                again = False
                for i in sorted(vec):
                    if i in self.ech and vec.get(i):
                        f = vec[i]
                        for j, vv in self.ech[i].items():
                            _add_into(vec, j, -f * vv)
                        again = True
                        break
            for i, c in vec.items():
                _add_into(acc, self.words[i], c)

    def comp(content):
        c = comps.get(content)
        if c is None:
            c = comps[content] = _Comp(content)
        return c

    pieces_keys = {}
    key_bidegree = {}
    for content in _contents(table, cw, cd):
        w, d = _content_bidegree(table, content)
        basis = comp(content).basis
        if basis:
            pieces_keys.setdefault((w, d), []).extend(basis)
        for word in basis:
            key_bidegree[word] = (w, d)

    dv_of_key, dh_of_key = {}, {}
    for word, (w, d) in key_bidegree.items():
        if d >= cd:
            continue
        sdegs = [table.degree[x] for x in word]
        dv, dh = {}, {}
        for i, name in enumerate(word):
            dm = A.differential_of_monomial(mono_of[name])
            if not dm:
                continue
            sgn = -((-1) ** sum(sdegs[:i]))
            for m2, c in dm.items():
                raw = word[:i] + (_mono_name(m2),) + word[i + 1:]
                content = tuple(sorted(raw, key=table.sort_key))
                comp(content).reduce(raw, sgn * c, dv)
        for i in range(w - 1):
            prod, ps = A.multiply(mono_of[word[i]], mono_of[word[i + 1]])
            if not ps:
                continue
            sgn = ((-1) ** sum(sdegs[:i])) * ((-1) ** (sdegs[i] + 1)) * ps
            raw = word[:i] + (_mono_name(prod),) + word[i + 2:]
            content = tuple(sorted(raw, key=table.sort_key))
            comp(content).reduce(raw, sgn, dh)
        if dv:
            dv_of_key[word] = dv
        if dh:
            dh_of_key[word] = dh

    complete = (0, min(cw, cd))
    cx = _assemble_complex(pieces_keys, key_bidegree, dv_of_key, dh_of_key,
                           complete)
    return DgComplexBundle(
        "harrison", cx, A, (cw, cd), key_bidegree, dv_of_key, dh_of_key,
        slot_table=table, monomial_of=mono_of)


def _interleavings(k, m):
    """Index sequences interleaving (0..k-1) with (k..k+m-1), preserving both
    relative orders."""
    n = k + m
    for pos in combinations(range(n), k):
        src = [None] * n
        it1 = iter(range(k))
        it2 = iter(range(k, n))
        posset = set(pos)
        for p in range(n):
            src[p] = next(it1) if p in posset else next(it2)
        yield tuple(src)


# ---------------------------------------------------------------------------
# duality

def dualize(A, cap_degree=None):
    """Transpose a commutative algebra presentation into coalgebra data on
    the same monomial names: reduced coproduct = transpose of multiplication,
    differential = transpose of d_A."""
    cd = cap_degree if cap_degree is not None else A.cap_degree
    monos = A.monomials(cd + 1)
    classes = [(_mono_name(m), A.monomial_degree(m)) for m in monos]
    coprod = {}
    for m1 in monos:
        for m2 in monos:
            prod, s = A.multiply(m1, m2)
            if not s or A.monomial_degree(prod) > cd + 1:
                continue
            coprod.setdefault(_mono_name(prod), []).append(
                (Fraction(s), _mono_name(m1), _mono_name(m2)))
    codiff = {}
    for m in monos:
        for m2, c in A.differential_of_monomial(m).items():
            if A.monomial_degree(m2) > cd + 1:
                continue
            codiff.setdefault(_mono_name(m2), []).append((c, _mono_name(m)))
    return DgccPresentation(classes, coprod, codiff,
                            cap_weight=A.cap_weight, cap_degree=cd)


class DualityReport:
    def __init__(self, passed, violations, signs, bidegrees):
        self.passed = passed
        self.violations = violations  # list of human-readable strings
        self.signs = signs            # bidegree -> +1/-1 adjoint sign
        self.bidegrees = bidegrees    # bidegree -> (dim E, dim L)

    def __bool__(self):
        return self.passed

    def __repr__(self):
        state = "pass" if self.passed else "FAIL"
        return f"DualityReport({state}, {len(self.violations)} violations)"


def _transpose_check(A, C, cap_degree):
    """Structure constants of C must transpose A's within the degree cap."""
    want = dualize(A, cap_degree)
    if sorted((n, want.class_degree[n]) for n in want.class_names) != sorted(
            (n, C.class_degree[n]) for n in C.class_names):
        raise NotDual("coalgebra basis does not match the monomial basis")

    def norm(terms):
        acc = {}
        for item in terms:
            c, rest = item[0], tuple(item[1:])
            _add_into(acc, rest, Fraction(c))
        return acc

    for name in want.class_names:
        if norm(C.coprod.get(name, [])) != norm(want.coprod.get(name, [])):
            raise NotDual(f"coproduct of {name!r} is not the transposed "
                          "multiplication")
        if norm(C.codiff.get(name, [])) != norm(want.codiff.get(name, [])):
            raise NotDual(f"differential of {name!r} is not the transposed "
                          "differential")


def check_duality(A, C, cap_weight=None, cap_degree=None):
    """Verify that the bar-word model of A and the comb-word model of C are
    linearly dual: per-bidegree pairing matrices invertible, and the two
    structure differentials adjoint up to a per-bidegree sign."""
    cw = cap_weight if cap_weight is not None else min(A.cap_weight,
                                                       C.cap_weight)
    cd = cap_degree if cap_degree is not None else min(A.cap_degree,
                                                       C.cap_degree)
    _transpose_check(A, C, cd)
    E = build_E(A, cw, cd)
    L = build_L(C, cw, cd)
    table_E = E.slot_table
    table_L = L.letter_table
    K, OFF = L.weight_offset, L.degree_offset

    def nest(word):
        t = word[0]
        for x in word[1:]:
            t = (t, x)
        return t

    def pair(bar_word, comb_word):
        return element_pair(graphify(bar_word, table_E),
                            TreeElement.from_term(table_L, nest(comb_word)))

    # collect L basis per natural bidegree
    L_basis = {}
    for wkey, (k, nat) in L.key_natural.items():
        L_basis.setdefault((k, nat), []).append(wkey)
    E_basis = {}
    for word, bd in E.key_bidegree.items():
        E_basis.setdefault(bd, []).append(word)

    violations = []
    signs = {}
    bidegrees = {}
    pairings = {}
    for bd in sorted(set(E_basis) | set(L_basis)):
        ews = E_basis.get(bd, [])
        lws = L_basis.get(bd, [])
        bidegrees[bd] = (len(ews), len(lws))
        if len(ews) != len(lws):
            violations.append(
                f"dimension mismatch at (weight, degree)={bd}: "
                f"{len(ews)} vs {len(lws)}")
            continue
        if not ews:
            continue
        entries = {}
        for i, lw in enumerate(lws):
            for j, ew in enumerate(ews):
                v = pair(ew, lw)
                if v:
                    entries[(i, j)] = v
        M = SparseMatrix(len(lws), len(ews), entries)
        pairings[bd] = (ews, lws, M)
        if M.rank() != len(ews):
            violations.append(f"pairing matrix singular at {bd}")

    # adjointness of the structure differentials: for x at (w, d) and y at
    # (w-1, d+1): <dh x, y> = sign * <x, d_Delta y>
    for bd, (ews, lws, _) in sorted(pairings.items()):
        w, d = bd
        tgt = (w - 1, d + 1)
        if tgt not in pairings:
            continue
        t_ews, t_lws, _ = pairings[tgt]
        sign = None
        for x in ews:
            dhx = E.dh_of_key.get(x, {})
            for y in t_lws:
                lhs = Fraction(0)
                for k2, c in dhx.items():
                    if c:
                        lhs += c * pair(k2, y)
                rhs = Fraction(0)
                for k2, c in L.dh_of_key.get(y, {}).items():
                    rhs += c * pair(x, k2)
                if lhs == rhs == 0:
                    continue
                if rhs == 0 or lhs == 0:
                    violations.append(
                        f"adjointness fails at {bd}: <dh {x}, {y}> = {lhs}, "
                        f"<{x}, dh {y}> = {rhs}")
                    continue
                q = lhs / rhs
                if q not in (1, -1):
                    violations.append(
                        f"adjointness ratio {q} at {bd} for ({x}, {y})")
                elif sign is None:
                    sign = q
                elif q != sign:
                    violations.append(
                        f"inconsistent adjoint sign at {bd} for ({x}, {y})")
        if sign is not None:
            signs[bd] = sign
    return DualityReport(not violations, violations, signs, bidegrees)


# ---------------------------------------------------------------------------
# twisting functions

class TwistingReport:
    def __init__(self, passed, witness=None):
        self.passed = passed
        self.witness = witness  # (key, leftover polynomial) when failing

    def __bool__(self):
        return self.passed

    def __repr__(self):
        return f"TwistingReport({'pass' if self.passed else 'FAIL'})"


def canonical_twisting_function(G):
    """The adjunct of the identity: project to weight-1 pieces and suspend
    (a single desuspended monomial maps back to that monomial)."""
    tau = {}
    for key, (w, d) in G.key_bidegree.items():
        if w == 1:
            (_, _), labels = key
            tau[key] = {G.monomial_of[labels[0]]: Fraction(1)}
    return tau


def check_twisting(tau, G, A):
    """Twisting-function identity for a degree -1 map tau from a graph bundle
    to its algebra: d_A tau + tau d_G - half the multiplication of the
    sign-twisted tau-square of the cobracket must vanish on every basis key."""
    for key, poly in tau.items():
        if key not in G.key_bidegree:
            raise InvalidInput(f"tau defined on unknown key {key}")
        d = G.key_bidegree[key][1]
        for m in poly:
            if A.monomial_degree(m) != d + 1:
                raise DegreeMismatch(
                    f"tau({key}) has a term of algebra degree "
                    f"{A.monomial_degree(m)}; key degree {d} requires "
                    f"{d + 1}")

    def tau_of(key):
        return tau.get(key, {})

    for key, (w, d) in G.key_bidegree.items():
        if d >= G.caps[1]:
            continue  # differential data truncated at the cap boundary
        acc = {}
        for m, c in A.differential_of_poly(tau_of(key)).items():
            _add_into(acc, m, c)
        for k2, c in G.differential_of_key(key).items():
            for m, c2 in tau_of(k2).items():
                _add_into(acc, m, c * c2)
        for (k1, k2), c in G.key_cobracket(key).items():
            p1, p2 = tau_of(k1), tau_of(k2)
            if not p1 or not p2:
                continue
            # the sign operator reads the algebra degree of tau's output
            s1 = (-1) ** (G.key_bidegree[k1][1] + 1)
            for m, cm in A.poly_multiply(p1, p2).items():
                _add_into(acc, m, -Fraction(1, 2) * s1 * c * cm)
        if acc:
            return TwistingReport(False, (key, acc))
    return TwistingReport(True)


# ---------------------------------------------------------------------------
# rational homotopy

def rational_homotopy(A, degree_window, cap_weight=None, cap_degree=None,
                      oracle=False):
    """dim of the degree-d homotopy group for d in the window, read off as
    the homology of the bar-word model one degree down.  Caps default to the
    smallest values guaranteed complete for the window."""
    lo, hi = degree_window
    if lo < 2:
        raise InvalidInput("window must start at degree >= 2")
    if not A.is_simply_connected():
        raise NotSimplyConnected(
            "homotopy reporting needs generators in degrees >= 2")
    cw = cap_weight if cap_weight is not None else hi + 1
    cd = cap_degree if cap_degree is not None else hi
    E = build_E(A, cw, cd)
    hom = E.homology((lo - 1, hi - 1))
    if oracle:
        H = harrison_shuffle_model(A, cw, cd)
        hom2 = H.homology((lo - 1, hi - 1))
        if hom != hom2:
            raise AssertionError(
                f"oracle disagreement: bar model {hom} vs shuffle model {hom2}")
    return {d: hom[d - 1] for d in range(lo, hi + 1)}
