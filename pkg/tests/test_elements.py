import itertools
import random
from fractions import Fraction

from liecograph.elements import (
    GeneratorTable,
    GraphElement,
    TreeElement,
    koszul_sign,
)
from liecograph.shapes import SGraph


class TestKoszulSign:
    def test_identity_is_plus_one(self):
        assert koszul_sign([2, 3, 5], [0, 1, 2]) == 1

    def test_single_odd_odd_swap(self):
        assert koszul_sign([3, 3], [1, 0]) == -1
        assert koszul_sign([2, 3], [1, 0]) == 1

    def test_multiplicative_under_composition(self):
        degs = [2, 3, 3, 5]
        rng = random.Random(0)
        for _ in range(50):
            p = list(range(4))
            q = list(range(4))
            rng.shuffle(p)
            rng.shuffle(q)
            pq = [p[q[i]] for i in range(4)]
            permuted = [degs[p[i]] for i in range(4)]
            assert koszul_sign(degs, pq) \
                == koszul_sign(degs, p) * koszul_sign(permuted, q)


class TestCanonicalTerms:
    TABLE = GeneratorTable([("a", 2), ("b", 3)])

    def test_relabeled_graph_same_class_up_to_sign(self):
        G = SGraph(3, [(1, 2), (2, 3)])
        labels = ("a", "b", "a")
        base = GraphElement.from_term(self.TABLE, G, labels)
        for perm in itertools.permutations(range(1, 4)):
            m = {i + 1: perm[i] for i in range(3)}
            Gp = SGraph(3, [(m[x], m[y]) for x, y in G.edges])
            lp = [None] * 3
            for v in range(1, 4):
                lp[m[v] - 1] = labels[v - 1]
            el = GraphElement.from_term(self.TABLE, Gp, tuple(lp))
            assert set(el.terms) == set(base.terms)
            (key,) = el.terms
            assert el.terms[key] in (base.terms[key], -base.terms[key])

    def test_odd_label_collision_vanishes(self):
        # two odd labels on a symmetric shape: the canonical term is zero
        G = SGraph(2, [(1, 2)])
        el = GraphElement.from_term(self.TABLE, G, ("b", "b"))
        rev = GraphElement.from_term(self.TABLE, SGraph(2, [(2, 1)]),
                                     ("b", "b"))
        assert el.add(rev).is_zero() or el.add(rev.scale(-1)).is_zero()

    def test_scale_and_add(self):
        g = GraphElement.from_term(self.TABLE, SGraph(2, [(1, 2)]),
                                   ("a", "b"))
        assert g.add(g.scale(-1)).is_zero()
        assert g.scale(Fraction(1, 2)).scale(2).terms == g.terms

    def test_tree_leaf_and_nesting(self):
        t = TreeElement.from_term(self.TABLE, (("a", "b"), "a"))
        assert not t.is_zero()
        leaf = TreeElement.leaf(self.TABLE, "a")
        assert set(leaf.terms) == {"a"}
