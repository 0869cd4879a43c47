"""Input presentations.

DgcaPresentation: a free graded-commutative algebra on generators of degree
>= 2 with optional monomial relations g^k = 0 and a differential given by a
polynomial per generator.  Monomials are tuples of generator names sorted by
table order; products normalize with Koszul signs, odd squares and relation
powers vanish.

DgccPresentation: a coalgebra given by a named basis per degree with reduced
coproduct and differential structure constants.

File format (line oriented, # comments):
    gen x deg 2            cogen x deg 2
    rel x^2 = 0            coprod y = x (x) x   (also accepts the ⊗ glyph)
    diff y = x^2           codiff y = 2 * x
    cap weight 5 degree 12
"""

import re
from fractions import Fraction

from .errors import InvalidPresentation, ParseError

DEFAULT_CAP_WEIGHT = 5
DEFAULT_CAP_DEGREE = 12


class DgcaPresentation:
    def __init__(self, gens, relations=None, differentials=None,
                 cap_weight=DEFAULT_CAP_WEIGHT, cap_degree=DEFAULT_CAP_DEGREE):
        self.gen_names = []
        self.gen_degree = {}
        for name, deg in gens:
            if name in self.gen_degree:
                raise InvalidPresentation(f"duplicate generator {name!r}")
            if deg < 1:
                raise InvalidPresentation(
                    f"generator {name!r} has degree {deg} < 1")
            self.gen_names.append(name)
            self.gen_degree[name] = deg
        self.order = {n: i for i, n in enumerate(self.gen_names)}
        self.relations = dict(relations or {})  # name -> power k (g^k = 0)
        for name, k in self.relations.items():
            if name not in self.gen_degree:
                raise InvalidPresentation(f"relation on unknown {name!r}")
            if k < 2:
                raise InvalidPresentation(f"relation power {k} < 2 on {name!r}")
        # differential: name -> {monomial: Fraction}
        self.differentials = {}
        for name, poly in (differentials or {}).items():
            if name not in self.gen_degree:
                raise InvalidPresentation(f"differential on unknown {name!r}")
            self.differentials[name] = {m: Fraction(c) for m, c in poly.items() if c}
        self.cap_weight = cap_weight
        self.cap_degree = cap_degree
        self._validate()

    # -- monomial arithmetic ------------------------------------------------

    def monomial_degree(self, m):
        return sum(self.gen_degree[x] for x in m)

    def normalize_monomial(self, seq):
        """Sort a factor sequence, returning (monomial, sign); sign 0 if it
        vanishes (odd square or relation power)."""
        seq = list(seq)
        sign = 1
        # insertion sort counting odd-odd transpositions
        for i in range(1, len(seq)):
            j = i
            while j > 0 and self.order[seq[j - 1]] > self.order[seq[j]]:
                if self.gen_degree[seq[j - 1]] % 2 and self.gen_degree[seq[j]] % 2:
                    sign = -sign
                seq[j - 1], seq[j] = seq[j], seq[j - 1]
                j -= 1
        counts = {}
        for x in seq:
            counts[x] = counts.get(x, 0) + 1
        for x, k in counts.items():
            if k >= 2 and self.gen_degree[x] % 2:
                return tuple(seq), 0
            if x in self.relations and k >= self.relations[x]:
                return tuple(seq), 0
        return tuple(seq), sign

    def multiply(self, m1, m2):
        """Product of two monomials: (monomial, sign) with sign possibly 0."""
        return self.normalize_monomial(m1 + m2)

    def poly_multiply(self, p1, p2):
        out = {}
        for m1, c1 in p1.items():
            for m2, c2 in p2.items():
                m, s = self.multiply(m1, m2)
                if s:
                    v = out.get(m, Fraction(0)) + s * c1 * c2
                    if v:
                        out[m] = v
                    else:
                        out.pop(m, None)
        return out

    def monomials(self, max_degree):
        """All basis monomials of the augmentation ideal with degree bound,
        deterministically ordered (by degree, then lexicographically)."""
        out = []

        def rec(i, current, deg):
            if current:
                out.append(tuple(current))
            for j in range(i, len(self.gen_names)):
                g = self.gen_names[j]
                dg = self.gen_degree[g]
                if deg + dg > max_degree:
                    continue
                count = current.count(g)
                if dg % 2 and count >= 1:
                    continue
                if g in self.relations and count + 1 >= self.relations[g]:
                    continue
                rec(j, current + [g], deg + dg)

        rec(0, [], 0)
        out.sort(key=lambda m: (self.monomial_degree(m),
                                tuple(self.order[x] for x in m)))
        return out

    def differential_of_monomial(self, m):
        """Leibniz extension: {monomial: Fraction}."""
        out = {}
        for i, g in enumerate(m):
            dg = self.differentials.get(g)
            if not dg:
                continue
            sgn = (-1) ** (sum(self.gen_degree[x] for x in m[:i]))
            prefix, suffix = m[:i], m[i + 1:]
            for mu, c in dg.items():
                m2, s2 = self.normalize_monomial(prefix + mu + suffix)
                if s2:
                    v = out.get(m2, Fraction(0)) + sgn * s2 * c
                    if v:
                        out[m2] = v
                    else:
                        out.pop(m2, None)
        return out

    def differential_of_poly(self, p):
        out = {}
        for m, c in p.items():
            for m2, c2 in self.differential_of_monomial(m).items():
                v = out.get(m2, Fraction(0)) + c * c2
                if v:
                    out[m2] = v
                else:
                    out.pop(m2, None)
        return out

    def _validate(self):
        for name, poly in self.differentials.items():
            want = self.gen_degree[name] + 1
            for m, _ in poly.items():
                for x in m:
                    if x not in self.gen_degree:
                        raise InvalidPresentation(
                            f"unknown generator {x!r} in diff {name}")
                if self.monomial_degree(m) != want:
                    raise InvalidPresentation(
                        f"diff {name} has a term of degree "
                        f"{self.monomial_degree(m)}, expected {want}")
                mm, s = self.normalize_monomial(m)
                if s == 0:
                    raise InvalidPresentation(
                        f"diff {name} contains a vanishing monomial {m}")
        for name in self.differentials:
            dd = self.differential_of_poly(self.differentials[name])
            if dd:
                raise InvalidPresentation(f"d^2 != 0 on generator {name!r}: {dd}")
        for name, k in self.relations.items():
            dg = self.differentials.get(name)
            if dg:
                # ideal stability: g^(k-1) dg must vanish in the quotient
                p = {tuple([name] * (k - 1)): Fraction(1)}
                res = self.poly_multiply(p, dg)
                if res:
                    raise InvalidPresentation(
                        f"relation {name}^{k} = 0 is not differential-stable")

    def is_simply_connected(self):
        return all(d >= 2 for d in self.gen_degree.values())

    def __repr__(self):
        return ("DgcaPresentation(%s)" %
                ", ".join(f"{g}:{self.gen_degree[g]}" for g in self.gen_names))


class DgccPresentation:
    """Coalgebra data: named basis classes with degrees, reduced coproduct
    coprod[c] = [(coeff, a, b), ...] and differential codiff[c] = [(coeff, a)]."""

    def __init__(self, classes, coprod=None, codiff=None,
                 cap_weight=DEFAULT_CAP_WEIGHT, cap_degree=DEFAULT_CAP_DEGREE):
        self.class_names = []
        self.class_degree = {}
        for name, deg in classes:
            if name in self.class_degree:
                raise InvalidPresentation(f"duplicate class {name!r}")
            if deg < 1:
                raise InvalidPresentation(f"class {name!r} has degree {deg} < 1")
            self.class_names.append(name)
            self.class_degree[name] = deg
        self.coprod = {c: [(Fraction(k), a, b) for (k, a, b) in terms if k]
                       for c, terms in (coprod or {}).items()}
        self.codiff = {c: [(Fraction(k), a) for (k, a) in terms if k]
                       for c, terms in (codiff or {}).items()}
        self.cap_weight = cap_weight
        self.cap_degree = cap_degree
        self._validate()

    def _validate(self):
        for c, terms in self.coprod.items():
            if c not in self.class_degree:
                raise InvalidPresentation(f"coprod on unknown {c!r}")
            for k, a, b in terms:
                if a not in self.class_degree or b not in self.class_degree:
                    raise InvalidPresentation(f"coprod {c} uses unknown classes")
                if (self.class_degree[a] + self.class_degree[b]
                        != self.class_degree[c]):
                    raise InvalidPresentation(
                        f"coprod {c}: degrees of {a},{b} do not add up")
        for c, terms in self.codiff.items():
            if c not in self.class_degree:
                raise InvalidPresentation(f"codiff on unknown {c!r}")
            for k, a in terms:
                if self.class_degree[a] != self.class_degree[c] - 1:
                    raise InvalidPresentation(
                        f"codiff {c} -> {a} is not degree -1")

    def __repr__(self):
        return ("DgccPresentation(%s)" %
                ", ".join(f"{c}:{self.class_degree[c]}" for c in self.class_names))


# ---------------------------------------------------------------------------
# file format

_GEN_RE = re.compile(r"^(co)?gen\s+(\w[\w*]*)\s+deg\s+(\d+)$")
_REL_RE = re.compile(r"^rel\s+(\w+)\s*\^\s*(\d+)\s*=\s*0$")
_DIFF_RE = re.compile(r"^(co)?diff\s+(\w[\w*]*)\s*=\s*(.*)$")
_COPROD_RE = re.compile(r"^coprod\s+(\w[\w*]*)\s*=\s*(.*)$")
_CAP_RE = re.compile(r"^cap\s+weight\s+(\d+)\s+degree\s+(\d+)$")


def _tokenize_poly(text, lineno):
    toks = re.findall(r"\d+/\d+|\d+|\w+|\^|\*|\+|-|\(|\)", text)
    if "".join(toks).replace(" ", "") != text.replace(" ", ""):
        raise ParseError(f"cannot tokenize polynomial {text!r}", line=lineno)
    return toks


def parse_polynomial(text, lineno=None):
    """rational coefficients, generator powers, * + -.  Returns
    {tuple-of-names (unsorted): Fraction}."""
    toks = _tokenize_poly(text.strip(), lineno)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        t = toks[pos]
        pos += 1
        return t

    def parse_term():
        coeff = Fraction(1)
        factors = []
        expect_factor = True
        while True:
            t = peek()
            if t is None or t in "+-":
                break
            if t == "*":
                take()
                continue
            t = take()
            if re.fullmatch(r"\d+/\d+|\d+", t):
                coeff *= Fraction(t)
            elif re.fullmatch(r"\w+", t):
                power = 1
                if peek() == "^":
                    take()
                    power = int(take())
                factors.extend([t] * power)
            else:
                raise ParseError(f"unexpected token {t!r} in polynomial",
                                 line=lineno)
        return coeff, tuple(factors)

    out = {}
    sign = 1
    if peek() in ("+", "-"):
        sign = -1 if take() == "-" else 1
    while pos < len(toks):
        coeff, mono = parse_term()
        out[mono] = out.get(mono, Fraction(0)) + sign * coeff
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        elif pos < len(toks):
            raise ParseError(f"trailing tokens in polynomial {text!r}",
                             line=lineno)
    return {m: c for m, c in out.items() if c}


def parse_presentation(text):
    """Parse a presentation file; returns a DgcaPresentation or a
    DgccPresentation depending on which keywords appear."""
    gens, rels, diffs = [], {}, {}
    cogens, coprods, codiffs = [], {}, {}
    cap_w, cap_d = DEFAULT_CAP_WEIGHT, DEFAULT_CAP_DEGREE
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _GEN_RE.match(line)
        if m:
            (cogens if m.group(1) else gens).append((m.group(2), int(m.group(3))))
            continue
        m = _REL_RE.match(line)
        if m:
            rels[m.group(1)] = int(m.group(2))
            continue
        m = _COPROD_RE.match(line)
        if m:
            coprods[m.group(1)] = _parse_coprod_rhs(m.group(2), lineno)
            continue
        m = _DIFF_RE.match(line)
        if m:
            if m.group(1):  # codiff
                codiffs[m.group(2)] = _parse_codiff_rhs(m.group(3), lineno)
            else:
                diffs[m.group(2)] = parse_polynomial(m.group(3), lineno)
            continue
        m = _CAP_RE.match(line)
        if m:
            cap_w, cap_d = int(m.group(1)), int(m.group(2))
            continue
        raise ParseError(f"unrecognized line {raw!r}", line=lineno)
    if cogens and gens:
        raise ParseError("file mixes gen and cogen declarations")
    if cogens:
        return DgccPresentation(cogens, coprods, codiffs,
                                cap_weight=cap_w, cap_degree=cap_d)
    return DgcaPresentation(gens, rels, diffs, cap_weight=cap_w, cap_degree=cap_d)


def _parse_coprod_rhs(text, lineno):
    """`2 * a (x) b + c (x) c` -> [(Fraction(2), 'a', 'b'), (1, 'c', 'c')]."""
    text = text.replace("⊗", "(x)")
    out = []
    for signed in re.finditer(r"([+-]?)\s*([^+-]+)", text):
        sgn = -1 if signed.group(1) == "-" else 1
        part = signed.group(2).strip()
        if not part:
            continue
        m = re.fullmatch(
            r"(?:(\d+(?:/\d+)?)\s*\*?\s*)?(\w[\w*]*)\s*\(x\)\s*(\w[\w*]*)", part)
        if not m:
            raise ParseError(f"cannot parse coproduct term {part!r}", line=lineno)
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        out.append((sgn * coeff, m.group(2), m.group(3)))
    return out


def _parse_codiff_rhs(text, lineno):
    out = []
    if text.strip() == "0":
        return out
    for signed in re.finditer(r"([+-]?)\s*([^+-]+)", text):
        sgn = -1 if signed.group(1) == "-" else 1
        part = signed.group(2).strip()
        if not part:
            continue
        m = re.fullmatch(r"(?:(\d+(?:/\d+)?)\s*\*?\s*)?(\w[\w*]*)", part)
        if not m:
            raise ParseError(f"cannot parse term {part!r}", line=lineno)
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        out.append((sgn * coeff, m.group(2)))
    return out
