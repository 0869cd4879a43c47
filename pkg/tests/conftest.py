import random
from fractions import Fraction
from pathlib import Path

import pytest

from liecograph.elements import GeneratorTable
from liecograph.presentations import DgcaPresentation, parse_presentation

FIXTURES = Path(__file__).parent / "fixtures"


def load_presentation(name):
    return parse_presentation((FIXTURES / name).read_text())


@pytest.fixture
def two_even_table():
    return GeneratorTable([("a", 2), ("b", 2)])


@pytest.fixture
def even_odd_table():
    return GeneratorTable([("a", 2), ("b", 3)])


def random_presentation(rng):
    """Small random cochain algebra presentation with d^2 = 0 guaranteed:
    differentials are polynomials in closed generators only, and generators
    carrying a truncation relation are kept closed."""
    ngen = rng.randint(1, 3)
    gens = [(f"g{i}", rng.randint(2, 5)) for i in range(ngen)]
    closed = {n for n, _ in gens if rng.random() < 0.6}
    rels = {}
    for n, d in gens:
        if d % 2 == 0 and rng.random() < 0.5:
            rels[n] = rng.randint(2, 3)
            closed.add(n)
    A0 = DgcaPresentation([(n, d) for n, d in gens if n in closed],
                          {n: k for n, k in rels.items() if n in closed})
    diffs = {}
    for n, d in gens:
        if n in closed:
            continue
        cands = [m for m in A0.monomials(d + 1)
                 if A0.monomial_degree(m) == d + 1]
        if cands and rng.random() < 0.8:
            poly = {}
            for m in rng.sample(cands, min(len(cands), rng.randint(1, 2))):
                poly[m] = Fraction(rng.choice([1, -1, 2]))
            if poly:
                diffs[n] = poly
    return DgcaPresentation(gens, rels, diffs)
