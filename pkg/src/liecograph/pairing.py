"""The configuration pairing between graphs and trees.

At shape level: each edge a->b of the graph is sent to the nadir (lowest
internal vertex) of the path between leaves a and b of the tree; the pairing
is 0 unless that map is surjective onto the internal vertices, and otherwise
the product of edge signs (+1 when leaf a sits to the left of leaf b).

At element level the pairing extends by a sum over the symmetric group with
Koszul signs from reordering the graded labels.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .errors import CapExceeded, MalformedDual, WeightMismatch
from .linalg import SparseMatrix, integer_matrix_rank
from .shapes import (
    ENUMERATION_CAP,
    enumerate_graphs,
    enumerate_trees,
    long_graph,
    tall_tree,
    tree_leaves,
)
from .elements import koszul_sign, tree_term_labels, tree_term_shape

__all__ = [
    "shape_pair",
    "element_pair",
    "kronecker_dual",
    "pairing_matrix",
    "long_tall_submatrix",
    "PairingMatrix",
]


@lru_cache(maxsize=None)
def _pair_info(tree):
    """For every ordered leaf-label pair (a, b): (nadir id, sign).  Internal
    vertices are numbered in traversal order; there are n-1 of them."""
    info = {}
    counter = [0]

    def walk(t):
        if isinstance(t, int):
            return (t,)
        left = walk(t[0])
        right = walk(t[1])
        node = counter[0]
        counter[0] += 1
        for a in left:
            for b in right:
                info[(a, b)] = (node, 1)
                info[(b, a)] = (node, -1)
        return left + right

    walk(tree)
    return info, counter[0]


def shape_pair(G, T):
    """Configuration pairing of an S-graph with a planar tree; in {-1, 0, 1}."""
    leaves = tree_leaves(T)
    if G.n != len(leaves):
        raise WeightMismatch(
            f"graph weight {G.n} vs tree with {len(leaves)} leaves")
    info, n_internal = _pair_info(T)
    assert n_internal == G.n - 1 or G.n == 1
    seen = 0
    sign = 1
    for a, b in G.edges:
        node, s = info[(a, b)]
        bit = 1 << node
        if seen & bit:
            return 0  # not injective, hence not surjective
        seen |= bit
        sign *= s
    return sign if G.n >= 1 else 0


def _shape_pair_relabeled(edges, perm, info):
    """<sigma G, T> where sigma is perm (1-based tuple, vertex i -> perm[i-1])
    and info is the tree's pair info."""
    seen = 0
    sign = 1
    for a, b in edges:
        node, s = info[(perm[a - 1], perm[b - 1])]
        bit = 1 << node
        if seen & bit:
            return 0
        seen |= bit
        sign *= s
    return sign


def kronecker_dual(table_w, table_v=None):
    """Generator pairing <w*, v> = 1 when names match (and degrees agree)."""
    table_v = table_v or table_w

    def dual(wname, vname):
        if wname == vname:
            if table_w.degree[wname] != table_v.degree[vname]:
                raise MalformedDual(
                    f"paired generators {wname!r} have different degrees")
            return Fraction(1)
        return Fraction(0)

    return dual


def element_pair(g, t, dual=None):
    """Bilinear configuration pairing of a GraphElement against a TreeElement.

    dual(wname, vname) -> Fraction pairs the two generator tables (defaults to
    the Kronecker pairing of g's table with t's).  Terms of different weight
    contribute zero."""
    if dual is None:
        dual = kronecker_dual(g.table, t.table)
    total = Fraction(0)
    wdeg = g.table.degree
    for gkey, gc in g.terms.items():
        (n, edges), wlabels = gkey
        degs = [wdeg[x] for x in wlabels]
        for tkey, tc in t.terms.items():
            vlabels = tree_term_labels(tkey)
            if len(vlabels) != n:
                continue
            shape = tree_term_shape(tkey)
            info, _ = _pair_info(shape)
            # dual matrix: M[i][j] = <w_j, v_i>  (0-based positions)
            M = [[dual(wlabels[j], vlabels[i]) for j in range(n)]
                 for i in range(n)]
            s = _sigma_sum(edges, degs, M, info, n)
            if s:
                total += gc * tc * s
    return total


def _sigma_sum(edges, degs, M, info, n):
    """sum over sigma of <sigma G, T> * koszul(sigma) * prod_i M[i][sigma^-1(i)].

    sigma is built position by position with zero-product pruning: inv[i] = j
    assigns input slot j to output position i."""
    # stay in machine ints when every entry is integral (the common Kronecker
    # case); fall back to Fraction otherwise
    if all(x.denominator == 1 for row in M for x in row):
        M = [[x.numerator for x in row] for row in M]
        one = 1
    else:
        one = Fraction(1)
    total = one * 0
    inv = [0] * n
    used = [False] * n

    def rec(i, prod):
        nonlocal total
        if i == n:
            perm = [0] * n
            for pos in range(n):
                perm[inv[pos]] = pos + 1  # vertex inv[pos]+1 -> pos+1
            sp = _shape_pair_relabeled(edges, perm, info)
            if sp:
                total += prod * sp * koszul_sign(degs, inv)
            return
        for j in range(n):
            if used[j]:
                continue
            m = M[i][j]
            if not m:
                continue
            used[j] = True
            inv[i] = j
            rec(i + 1, prod * m)
            used[j] = False

    rec(0, one)
    return Fraction(total)


class PairingMatrix:
    """Full Gr(n) x Tr(n) integer pairing matrix.  Held sparse for small n and
    as a dense int8 array above the sparse threshold (the weight-6 matrix has
    over a billion slots)."""

    def __init__(self, n, graphs, trees, sparse=None, dense=None):
        self.n = n
        self.row_basis = graphs
        self.col_basis = trees
        self._sparse = sparse
        self._dense = dense
        self._rank = None

    def entry(self, i, j):
        if self._sparse is not None:
            return int(self._sparse[(i, j)])
        return int(self._dense[i, j])

    @property
    def entries(self):
        """SparseMatrix view (only for matrices built sparse)."""
        if self._sparse is None:
            raise CapExceeded(
                f"weight-{self.n} pairing matrix is held dense; use entry()/rank()")
        return self._sparse

    def rank(self):
        if self._rank is None:
            if self._sparse is not None:
                self._rank = self._sparse.rank()
            else:
                self._rank = integer_matrix_rank(self._dense)
        return self._rank

    def __repr__(self):
        return (f"PairingMatrix(n={self.n}, "
                f"{len(self.row_basis)}x{len(self.col_basis)})")


_DENSE_THRESHOLD = 400_000


@lru_cache(maxsize=None)
def pairing_matrix(n):
    if n > ENUMERATION_CAP:
        raise CapExceeded(f"pairing matrix capped at n <= {ENUMERATION_CAP}")
    graphs = enumerate_graphs(n)
    trees = enumerate_trees(n)
    if len(graphs) * len(trees) <= _DENSE_THRESHOLD:
        entries = {}
        for i, G in enumerate(graphs):
            for j, T in enumerate(trees):
                v = shape_pair(G, T)
                if v:
                    entries[(i, j)] = Fraction(v)
        return PairingMatrix(n, graphs, trees,
                             sparse=SparseMatrix(len(graphs), len(trees), entries))
    return PairingMatrix(n, graphs, trees, dense=_dense_pairing(n, graphs, trees))


def _dense_pairing(n, graphs, trees):
    """Vectorized pairing matrix: for a chunk of trees at a time, gather nadir
    ids and signs for all graph edges at once and combine."""
    import numpy as np

    g = len(graphs)
    src = np.empty((g, n - 1), dtype=np.intp)
    tgt = np.empty((g, n - 1), dtype=np.intp)
    for i, G in enumerate(graphs):
        for k, (a, b) in enumerate(G.edges):
            src[i, k] = a
            tgt[i, k] = b
    flat = src * (n + 1) + tgt  # index into a flattened (n+1)x(n+1) lookup
    full = (1 << (n - 1)) - 1
    out = np.zeros((g, len(trees)), dtype=np.int8)
    chunk = 256
    for j0 in range(0, len(trees), chunk):
        part = trees[j0:j0 + chunk]
        c = len(part)
        node_of = np.zeros((c, (n + 1) * (n + 1)), dtype=np.int8)
        sign_of = np.zeros((c, (n + 1) * (n + 1)), dtype=np.int8)
        for t, T in enumerate(part):
            info, _ = _pair_info(T)
            for (a, b), (node, s) in info.items():
                node_of[t, a * (n + 1) + b] = node
                sign_of[t, a * (n + 1) + b] = s
        nodes = node_of[:, flat]  # (c, g, n-1)
        signs = sign_of[:, flat]
        bits = np.left_shift(np.int8(1), nodes)
        masks = np.bitwise_or.reduce(bits, axis=2)
        # distinctness: OR of bits has n-1 set bits iff no collision occurred
        surj = masks == full
        out[:, j0:j0 + c] = np.where(surj, signs.prod(axis=2, dtype=np.int8), 0).T
    return out


@lru_cache(maxsize=None)
def long_tall_submatrix(n):
    """(n-1)! square matrix pairing long graphs 1,j2..jn against tall trees
    ((...(1,i2),...),in), both ordered lexicographically by their tails."""
    if n > ENUMERATION_CAP:
        raise CapExceeded(f"long/tall submatrix capped at n <= {ENUMERATION_CAP}")
    tails = sorted(permutations(range(2, n + 1)))
    entries = {}
    for i, jt in enumerate(tails):
        G = long_graph((1,) + jt)
        for j, it in enumerate(tails):
            T = tall_tree((1,) + it)
            v = shape_pair(G, T)
            if v:
                entries[(i, j)] = Fraction(v)
    return SparseMatrix(len(tails), len(tails), entries)
