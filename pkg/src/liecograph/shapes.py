"""Combinatorial shapes: S-graphs (connected acyclic edge-oriented graphs on
{1..n}) and planar binary trees with labeled leaves, plus edge surgery,
quotient enumeration, the anti-commutative coaction, and canonical forms.

Graphs are stored with their edge list sorted, so shape keys are stable under
surgery.  Trees are nested tuples over leaf labels: 3 is a leaf, ((2,1),3) is
the tree whose left subtree is (2,1).
"""

from functools import lru_cache
from itertools import permutations

from .errors import (
    BadEdgeIndex,
    BadVertexIndex,
    CapExceeded,
    DuplicateEdge,
    HasCycle,
    NotConnected,
)

ENUMERATION_CAP = 6
CANONICAL_CAP = 8


class SGraph:
    """Connected acyclic directed graph on vertices {1..n}; exactly n-1 edges.
    Use validate_graph() to construct from untrusted data."""

    __slots__ = ("n", "edges")

    def __init__(self, n, edges, _checked=False):
        self.n = n
        self.edges = tuple(sorted(tuple(e) for e in edges))
        if not _checked:
            validate_graph(n, edges)

    def key(self):
        return (self.n, self.edges)

    def __eq__(self, other):
        return isinstance(other, SGraph) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        es = ", ".join(f"{a}->{b}" for a, b in self.edges)
        return f"G[{self.n}; {es}]"

    def relabel(self, perm):
        """perm maps old vertex -> new vertex (dict or callable)."""
        f = perm.__getitem__ if isinstance(perm, dict) else perm
        return SGraph(self.n, [(f(a), f(b)) for a, b in self.edges], _checked=True)

    def reverse_edge(self, i):
        if not 0 <= i < len(self.edges):
            raise BadEdgeIndex(f"edge index {i} out of range")
        es = list(self.edges)
        a, b = es[i]
        es[i] = (b, a)
        return SGraph(self.n, es, _checked=True)


def validate_graph(n, edges):
    """Check the S-graph conditions and return the SGraph, or raise a
    structured error naming the offending edge/vertex."""
    edges = [tuple(e) for e in edges]
    for a, b in edges:
        if not (isinstance(a, int) and isinstance(b, int)):
            raise BadVertexIndex(f"non-integer vertex in edge {a}->{b}")
        if not (1 <= a <= n and 1 <= b <= n):
            raise BadVertexIndex(f"edge {a}->{b} leaves vertex set {{1..{n}}}")
        if a == b:
            raise HasCycle(f"loop edge {a}->{b}")
    seen = set()
    for a, b in edges:
        und = frozenset((a, b))
        if und in seen:
            raise DuplicateEdge(f"edge {a}->{b} repeated (in some orientation)")
        seen.add(und)
    # union-find for connectivity / cycle detection
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            raise HasCycle(f"edge {a}->{b} closes a cycle")
        parent[ra] = rb
    if len(edges) != n - 1 or len({find(v) for v in range(1, n + 1)}) != 1:
        raise NotConnected(f"graph on {n} vertices with {len(edges)} edges "
                           "is not connected")
    return SGraph(n, edges, _checked=True)


@lru_cache(maxsize=None)
def enumerate_graphs(n):
    """All S-graphs on {1..n}: spanning trees of K_n in every orientation.
    Count is n^(n-2) * 2^(n-1).  Deterministic order (sorted by edge list)."""
    if n > ENUMERATION_CAP:
        raise CapExceeded(f"graph enumeration capped at n <= {ENUMERATION_CAP}")
    if n == 1:
        return [SGraph(1, [], _checked=True)]
    # enumerate labeled trees via Pruefer sequences, then orient each edge
    trees = []
    for seq in _product_range(n, n - 2):
        trees.append(_pruefer_to_tree(n, seq))
    out = []
    for und in trees:
        m = len(und)
        for mask in range(1 << m):
            es = [(b, a) if (mask >> i) & 1 else (a, b)
                  for i, (a, b) in enumerate(und)]
            out.append(SGraph(n, es, _checked=True))
    out.sort(key=lambda g: g.edges)
    return out


def _product_range(n, k):
    """All k-tuples over {1..n}."""
    if k == 0:
        yield ()
        return
    for rest in _product_range(n, k - 1):
        for x in range(1, n + 1):
            yield rest + (x,)


def _pruefer_to_tree(n, seq):
    """Undirected labeled tree edges (a < b sorted) from a Pruefer sequence."""
    degree = [1] * (n + 1)
    for x in seq:
        degree[x] += 1
    edges = []
    avail = sorted(v for v in range(1, n + 1))
    import heapq
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append(tuple(sorted((leaf, x))))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append(tuple(sorted((u, v))))
    return sorted(edges)


# ---------------------------------------------------------------------------
# planar binary trees

def tree_leaves(t):
    """Leaf labels in left-to-right planar order."""
    if isinstance(t, int):
        return (t,)
    return tree_leaves(t[0]) + tree_leaves(t[1])


def tree_weight(t):
    return len(tree_leaves(t))


def validate_tree(t, n=None):
    ls = tree_leaves(t)
    if n is not None and len(ls) != n:
        raise BadVertexIndex(f"tree has {len(ls)} leaves, expected {n}")
    if sorted(ls) != list(range(1, len(ls) + 1)):
        raise BadVertexIndex(f"leaf labels {ls} are not a bijection to "
                             f"{{1..{len(ls)}}}")
    return t


@lru_cache(maxsize=None)
def _tree_shapes(n):
    """All binary tree shapes with leaves replaced by position indices 0..n-1."""
    if n == 1:
        return [0]
    shapes = []
    # positions are assigned left to right, so split sizes determine offsets
    def build(lo, size):
        if size == 1:
            return [lo]
        out = []
        for ls in range(1, size):
            for l in build(lo, ls):
                for r in build(lo + ls, size - ls):
                    out.append((l, r))
        return out
    return build(0, n)


@lru_cache(maxsize=None)
def enumerate_trees(n):
    """All planar binary trees with leaves labeled by {1..n}; count is
    n! * Catalan(n-1).  Deterministic order."""
    if n > ENUMERATION_CAP:
        raise CapExceeded(f"tree enumeration capped at n <= {ENUMERATION_CAP}")
    out = []
    for shape in _tree_shapes(n):
        for labels in permutations(range(1, n + 1)):
            out.append(_relabel_shape(shape, labels))
    return out


def _relabel_shape(shape, labels):
    if isinstance(shape, int):
        return labels[shape]
    return (_relabel_shape(shape[0], labels), _relabel_shape(shape[1], labels))


def tree_relabel(t, perm):
    """Apply a vertex relabeling (dict old->new) to leaf labels."""
    if isinstance(t, int):
        return perm[t]
    return (tree_relabel(t[0], perm), tree_relabel(t[1], perm))


def tall_tree(seq):
    """Left comb ((...(s1,s2),s3)...,sn)."""
    t = seq[0]
    for x in seq[1:]:
        t = (t, x)
    return t


def long_graph(seq):
    """Directed path seq[0] -> seq[1] -> ... -> seq[-1] as an SGraph."""
    n = len(seq)
    return SGraph(n, [(seq[i], seq[i + 1]) for i in range(n - 1)], _checked=True)


# ---------------------------------------------------------------------------
# edge surgery

def cut_edge(G, e):
    """Remove edge e; returns (G1, G2, (slots1, slots2)) where G1 carries the
    source side and G2 the target side, each relabeled to {1..k} preserving
    relative vertex order.  slots_i are the original vertex labels, ascending."""
    if not 0 <= e < len(G.edges):
        raise BadEdgeIndex(f"edge index {e} out of range for {G!r}")
    src, tgt = G.edges[e]
    rest = [G.edges[i] for i in range(len(G.edges)) if i != e]
    comp = {v: v for v in range(1, G.n + 1)}

    def find(v):
        while comp[v] != v:
            comp[v] = comp[comp[v]]
            v = comp[v]
        return v

    for a, b in rest:
        comp[find(a)] = find(b)
    side1 = sorted(v for v in range(1, G.n + 1) if find(v) == find(src))
    side2 = sorted(v for v in range(1, G.n + 1) if find(v) == find(tgt))
    m1 = {v: i + 1 for i, v in enumerate(side1)}
    m2 = {v: i + 1 for i, v in enumerate(side2)}
    e1 = [(m1[a], m1[b]) for a, b in rest if a in m1]
    e2 = [(m2[a], m2[b]) for a, b in rest if a in m2]
    G1 = SGraph(len(side1), e1, _checked=True)
    G2 = SGraph(len(side2), e2, _checked=True)
    return G1, G2, (tuple(side1), tuple(side2))


def contract_edge(G, e):
    """Contract edge e = (s, t): the merged vertex takes s's label position and
    every vertex after t shifts down by one.  Returns (SGraph on n-1 vertices,
    (s, t))."""
    if not 0 <= e < len(G.edges):
        raise BadEdgeIndex(f"edge index {e} out of range for {G!r}")
    s, t = G.edges[e]
    remap = {v: v - (1 if v > t else 0) for v in range(1, G.n + 1) if v != t}
    remap[t] = remap[s]
    new_edges = []
    for i, (a, b) in enumerate(G.edges):
        if i == e:
            continue
        new_edges.append((remap[a], remap[b]))
    H = SGraph(G.n - 1, new_edges, _checked=True)
    return H, (s, t)


# ---------------------------------------------------------------------------
# quotients and the coaction

class GraphQuotient:
    """A quotient map G ->> K with connected non-empty fibers."""

    __slots__ = ("source", "target", "vertex_map", "fibers", "fiber_slots")

    def __init__(self, source, target, vertex_map, fibers):
        self.source = source
        self.target = target
        self.vertex_map = vertex_map  # dict {1..n} -> {1..k}
        self.fibers = fibers          # tuple of SGraph, fibers[i] over vertex i+1
        # fiber slot data: original vertices of fiber i, ascending
        self.fiber_slots = tuple(
            tuple(sorted(v for v, im in vertex_map.items() if im == i + 1))
            for i in range(target.n))

    def __repr__(self):
        return f"GraphQuotient({self.source!r} ->> {self.target!r})"


def _connected(vertices, edges):
    vs = set(vertices)
    if not vs:
        return False
    comp = {v: v for v in vs}

    def find(v):
        while comp[v] != v:
            comp[v] = comp[comp[v]]
            v = comp[v]
        return v

    for a, b in edges:
        if a in vs and b in vs:
            comp[find(a)] = find(b)
    return len({find(v) for v in vs}) == 1


def enumerate_quotients(G, k):
    """All quotients of G onto graphs with k vertices.  Blocks are ordered by
    their minimal original vertex, which fixes the target labeling."""
    if G.n > ENUMERATION_CAP:
        raise CapExceeded(f"quotient enumeration capped at n <= {ENUMERATION_CAP}")
    if not 1 <= k <= G.n:
        return []
    out = []
    for blocks in _set_partitions(list(range(1, G.n + 1)), k):
        if not all(_connected(b, G.edges) for b in blocks):
            continue
        blocks = sorted(blocks, key=min)
        vmap = {}
        for i, b in enumerate(blocks):
            for v in b:
                vmap[v] = i + 1
        tgt_edges = []
        ok = True
        seen = set()
        for a, b in G.edges:
            ia, ib = vmap[a], vmap[b]
            if ia == ib:
                continue
            if frozenset((ia, ib)) in seen:
                ok = False  # two source edges over one target edge: not a tree
                break
            seen.add(frozenset((ia, ib)))
            tgt_edges.append((ia, ib))
        if not ok:
            continue
        if len(tgt_edges) != k - 1 or not _connected(range(1, k + 1), tgt_edges):
            continue
        target = SGraph(k, tgt_edges, _checked=True)
        fibers = []
        for b in blocks:
            bs = sorted(b)
            m = {v: i + 1 for i, v in enumerate(bs)}
            fe = [(m[a], m[c]) for a, c in G.edges if a in m and c in m]
            fibers.append(SGraph(len(bs), fe, _checked=True))
        out.append(GraphQuotient(G, target, vmap, tuple(fibers)))
    out.sort(key=lambda q: (q.target.edges, q.fiber_slots))
    return out


def _set_partitions(items, k):
    """All partitions of items into exactly k non-empty blocks."""
    n = len(items)
    if k < 1 or k > n:
        return
    if n == 0:
        yield []
        return

    def rec(i, blocks):
        if n - i < k - len(blocks):
            return
        if i == n:
            if len(blocks) == k:
                yield [list(b) for b in blocks]
            return
        x = items[i]
        for b in blocks:
            b.append(x)
            yield from rec(i + 1, blocks)
            b.pop()
        if len(blocks) < k:
            blocks.append([x])
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def acc_coaction(G, k):
    """Anti-commutative coaction: formal sum of (K, fibers) with coefficient
    (-1)^|E| for every quotient G ->> K0 and every subset E of K0's edges,
    where K = K0 with the edges in E reversed.  Returns a list of
    (coefficient, target SGraph, fiber tuple, fiber_slots) entries, merged."""
    acc = {}
    for q in enumerate_quotients(G, k):
        m = len(q.target.edges)
        for mask in range(1 << m):
            bits = bin(mask).count("1")
            K = SGraph(k, [(b, a) if (mask >> i) & 1 else (a, b)
                           for i, (a, b) in enumerate(q.target.edges)],
                       _checked=True)
            key = (K, q.fibers, q.fiber_slots)
            acc[key] = acc.get(key, 0) + (-1) ** bits
    return [(c, K, fibers, slots) for (K, fibers, slots), c in acc.items() if c]


def asc_coaction(G, k):
    """Associative coaction: the E = empty-set restriction of acc_coaction."""
    return [(1, q.target, q.fibers, q.fiber_slots) for q in enumerate_quotients(G, k)]


# ---------------------------------------------------------------------------
# canonical forms

@lru_cache(maxsize=None)
def _canonical_cached(n, edges):
    best = None
    best_perm = None
    for perm in permutations(range(1, n + 1)):
        m = {i + 1: perm[i] for i in range(n)}
        relab = tuple(sorted((m[a], m[b]) for a, b in edges))
        if best is None or relab < best:
            best = relab
            best_perm = tuple(perm)
    return SGraph(n, best, _checked=True), best_perm


def canonical_form(G):
    """Lexicographically minimal vertex relabeling of G, with the permutation
    achieving it (as a tuple p where vertex i maps to p[i-1]).  Two graphs lie
    in the same relabeling orbit iff their canonical forms coincide."""
    if G.n > CANONICAL_CAP:
        raise CapExceeded(f"canonicalization capped at n <= {CANONICAL_CAP}")
    return _canonical_cached(G.n, G.edges)
