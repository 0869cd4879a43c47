"""The dual, algebra side: free binary non-associative algebra on a generator
table (tree grafting), free Lie algebra normal forms over left combs with a
designated leading slot, and expansion into the tensor algebra.

A bracket literal [[a,b],c] and the product (a*b)*c share the same term keys:
nested tuples of generator names.
"""

from fractions import Fraction
from functools import lru_cache

from .errors import CapExceeded
from .elements import GeneratorTable, TreeElement, _Element, _term_leaves
from .graphcoalg import _distinct_arrangements, graphify
from .pairing import element_pair

__all__ = ["product", "bracket", "lie_normal_form", "tensor_expand", "LieElement"]

LIE_CAP = 9
ARRANGEMENT_CAP = 1000


def product(t1, t2):
    """Graft every pair of terms at a new root (t1 left, t2 right).  Tensors
    of labels concatenate, so no Koszul sign appears."""
    assert t1.table is t2.table
    out = {}
    for k1, c1 in t1.terms.items():
        for k2, c2 in t2.terms.items():
            key = (k1, k2)
            s = out.get(key, Fraction(0)) + c1 * c2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return TreeElement(t1.table, out)


bracket = product  # the Lie bracket of classes is induced by the tree product


class LieElement(_Element):
    """Class in the free Lie algebra: coordinates over left-comb words whose
    leading slot carries the designated (minimal) generator of the content,
    reduced modulo the exact relation space of those words."""

    def term_weight(self, key):
        return len(key)

    def term_degree(self, key):
        return sum(self.table.degree[x] for x in key)

    def as_tree_element(self):
        return TreeElement(self.table, {_nest(w): c for w, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items()):
            expr = w[0]
            for x in w[1:]:
                expr = f"[{expr},{x}]"
            bits.append(f"{c} * {expr}")
        return " + ".join(bits)


def _nest(seq):
    t = seq[0]
    for x in seq[1:]:
        t = (t, x)
    return t


def _word_degree(table, word):
    return sum(table.degree[x] for x in word)


def _br_words(table, u, v):
    """[comb u, comb v] as a dict of comb words (Jacobi recursion on v)."""
    if len(v) == 1:
        return {u + v: Fraction(1)}
    vp, z = v[:-1], v[-1:]
    out = {}
    s1 = _br_words(table, u, vp)
    for w, c in s1.items():
        key = w + z
        out[key] = out.get(key, Fraction(0)) + c
    sgn = -((-1) ** (_word_degree(table, vp) * _word_degree(table, z)))
    s2 = _br_words(table, u + z, vp)
    for w, c in s2.items():
        out[w] = out.get(w, Fraction(0)) + sgn * c
    return {w: c for w, c in out.items() if c}


def _combs_of_term(table, key):
    """Left-comb word expansion of one tree term."""
    if isinstance(key, str):
        return {(key,): Fraction(1)}
    L = _combs_of_term(table, key[0])
    R = _combs_of_term(table, key[1])
    out = {}
    for u, cu in L.items():
        for v, cv in R.items():
            for w, c in _br_words(table, u, v).items():
                s = out.get(w, Fraction(0)) + cu * cv * c
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
    return out


def _lead_designated(table, word, coeff, acc):
    """Rewrite a comb word so the designated (minimal) generator leads."""
    g0 = min(word, key=table.sort_key)
    if word[0] == g0:
        acc[word] = acc.get(word, Fraction(0)) + coeff
        return
    k = next(i for i, x in enumerate(word) if x == g0)
    prefix, tail = word[:k], word[k + 1:]
    sgn = -((-1) ** (_word_degree(table, prefix) * table.degree[g0]))
    for w, c in _br_words(table, (g0,), prefix).items():
        full = w + tail
        assert full[0] == g0
        acc[full] = acc.get(full, Fraction(0)) + coeff * sgn * c
    return


_kernel_cache = {}


def _content_reduction(table, content):
    """Echelon of the exact relation space among designated-leading comb words
    of a content (pivot word -> full relation row), plus the word list.

    Relations are detected through the configuration pairing against long
    graphs over all arrangements, which separates free-Lie classes."""
    sig = (tuple(zip(table.names, (table.degree[x] for x in table.names))),
           content)
    hit = _kernel_cache.get(sig)
    if hit is not None:
        return hit
    g0 = min(content, key=table.sort_key)
    rest = list(content)
    rest.remove(g0)
    words = [(g0,) + t for t in _distinct_arrangements(tuple(rest))]
    if len(words) > ARRANGEMENT_CAP:
        raise CapExceeded(
            f"content {content} has {len(words)} candidate words "
            f"(cap {ARRANGEMENT_CAP})")
    arrangements = _distinct_arrangements(content)
    entries = {}
    for i, w in enumerate(words):
        t = TreeElement.from_term(table, _nest(w))
        for j, arr in enumerate(arrangements):
            v = element_pair(graphify(arr, table), t)
            if v:
                entries[(j, i)] = v
    from .linalg import SparseMatrix
    M = SparseMatrix(len(arrangements), len(words), entries)
    rels = M.kernel()  # vectors over word indices
    # echelon of relations over word indices (pivot = smallest index)
    rel_ech = {}
    for rel in rels:
        row = dict(rel)
        while row:
            c = min(row)
            if c in rel_ech:
                f = row[c]
                for cc, vv in rel_ech[c].items():
                    s = row.get(cc, Fraction(0)) - f * vv
                    if s:
                        row[cc] = s
                    else:
                        row.pop(cc, None)
            else:
                inv = Fraction(1) / row[c]
                rel_ech[c] = {cc: inv * vv for cc, vv in row.items()}
                break
    res = (words, rel_ech)
    _kernel_cache[sig] = res
    return res


def lie_normal_form(t):
    """Normal form of a TreeElement in the free Lie algebra: anti-symmetry and
    Jacobi rewriting to left combs with the designated slot leading, then
    exact reduction modulo the relation space of those words (nontrivial only
    for repeated generators)."""
    table = t.table
    acc = {}
    for key, coeff in t.terms.items():
        n = len(_term_leaves(key))
        if n > LIE_CAP:
            raise CapExceeded(f"Lie normal form capped at weight <= {LIE_CAP}")
        for w, c in _combs_of_term(table, key).items():
            _lead_designated(table, w, coeff * c, acc)
    # reduce per content
    out = {}
    by_content = {}
    for w, c in acc.items():
        if not c:
            continue
        content = tuple(sorted(w, key=table.sort_key))
        by_content.setdefault(content, {})[w] = c
    for content, coords in by_content.items():
        words, rel_ech = _content_reduction(table, content)
        widx = {w: i for i, w in enumerate(words)}
        vec = {widx[w]: c for w, c in coords.items()}
        while True:
            piv = next((i for i in sorted(vec) if i in rel_ech and vec[i]),
                       None)
            if piv is None:
                break
            f = vec[piv]
            for j, vv in rel_ech[piv].items():
                s = vec.get(j, Fraction(0)) - f * vv
                if s:
                    vec[j] = s
                else:
                    vec.pop(j, None)
        for i, c in vec.items():
            if c:
                out[words[i]] = c
    return LieElement(table, out)


def tensor_expand(x):
    """Expand into the tensor algebra: [u, v] -> uv - (-1)^{|u||v|} vu,
    concatenation for the product.  Accepts a LieElement or TreeElement;
    returns {word tuple: Fraction}.  Injective on free-Lie classes."""
    if isinstance(x, LieElement):
        x = x.as_tree_element()
    table = x.table
    out = {}
    for key, coeff in x.terms.items():
        for w, c in _expand_term(table, key).items():
            s = out.get(w, Fraction(0)) + coeff * c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return out


def _expand_term(table, key):
    if isinstance(key, str):
        return {(key,): Fraction(1)}
    L = _expand_term(table, key[0])
    R = _expand_term(table, key[1])
    dl = sum(table.degree[x] for x in _term_leaves(key[0]))
    dr = sum(table.degree[x] for x in _term_leaves(key[1]))
    sgn = (-1) ** (dl * dr)
    out = {}
    for u, cu in L.items():
        for v, cv in R.items():
            out[u + v] = out.get(u + v, Fraction(0)) + cu * cv
            out[v + u] = out.get(v + u, Fraction(0)) - sgn * cu * cv
    return {w: c for w, c in out.items() if c}
