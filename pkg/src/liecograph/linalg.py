"""Exact linear algebra over Q.

Sparse matrices with Fraction entries, rank/kernel/image by exact Gaussian
elimination, a certified fast-path rank for large integer matrices, and
bigraded complexes (two anticommuting degree-+1 differentials) with total
homology and spectral-sequence page dimensions for the weight filtration.

No floating point ever enters a result: the numpy fast path is used only for
modular candidate discovery and for integer matrix products whose entries are
proven (by explicit magnitude bounds) to be exactly representable.
"""

from fractions import Fraction
from math import gcd

from .errors import CapTooSmall

__all__ = [
    "BasedSpace",
    "SparseMatrix",
    "integer_matrix_rank",
    "BigradedComplex",
    "total_homology",
    "spectral_pages",
]


class BasedSpace:
    """An ordered basis of opaque, hashable keys."""

    def __init__(self, basis):
        self.basis = list(basis)
        self.index = {k: i for i, k in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise ValueError("basis keys not pairwise distinct")

    @property
    def dimension(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        return f"BasedSpace(dim={len(self.basis)})"


class SparseMatrix:
    """rows x cols matrix over Q; entries stored as {(i, j): Fraction},
    zeros never stored."""

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ValueError(f"entry ({i},{j}) out of bounds")
                v = Fraction(v)
                if v:
                    self.entries[(i, j)] = v

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def __getitem__(self, ij):
        return self.entries.get(ij, Fraction(0))

    def is_zero(self):
        return not self.entries

    def transpose(self):
        return SparseMatrix(
            self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}
        )

    def add(self, other):
        assert (self.rows, self.cols) == (other.rows, other.cols)
        out = dict(self.entries)
        for k, v in other.entries.items():
            w = out.get(k, Fraction(0)) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return SparseMatrix(self.rows, self.cols, out)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return SparseMatrix(self.rows, self.cols)
        return SparseMatrix(
            self.rows, self.cols, {k: c * v for k, v in self.entries.items()}
        )

    def mul(self, other):
        """self @ other (self: m x n, other: n x p)."""
        assert self.cols == other.rows
        by_row = {}
        for (i, j), v in self.entries.items():
            by_row.setdefault(i, []).append((j, v))
        by_row2 = {}
        for (j, k), w in other.entries.items():
            by_row2.setdefault(j, []).append((k, w))
        out = {}
        for i, row in by_row.items():
            acc = {}
            for j, v in row:
                for k, w in by_row2.get(j, ()):
                    acc[k] = acc.get(k, Fraction(0)) + v * w
            for k, s in acc.items():
                if s:
                    out[(i, k)] = s
        return SparseMatrix(self.rows, other.cols, out)

    def apply(self, vec):
        """Matrix times a sparse column vector {index: Fraction}."""
        out = {}
        by_col = {}
        for (i, j), v in self.entries.items():
            by_col.setdefault(j, []).append((i, v))
        for j, x in vec.items():
            if not x:
                continue
            for i, v in by_col.get(j, ()):
                s = out.get(i, Fraction(0)) + v * x
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def _row_dicts(self):
        rows = {}
        for (i, j), v in self.entries.items():
            rows.setdefault(i, {})[j] = v
        return rows

    def rank(self, order="forward"):
        """Exact rank by incremental row elimination.  `order` picks the pivot
        column preference (forward = smallest column index first, reverse =
        largest first); both orders must agree."""
        key = min if order == "forward" else max
        echelon = {}  # pivot col -> row dict (pivot entry normalized to 1)
        for rowdict in self._row_dicts().values():
            row = dict(rowdict)
            while row:
                c = key(row)
                if c in echelon:
                    f = row[c]
                    for cc, vv in echelon[c].items():
                        s = row.get(cc, Fraction(0)) - f * vv
                        if s:
                            row[cc] = s
                        else:
                            row.pop(cc, None)
                else:
                    inv = Fraction(1) / row[c]
                    echelon[c] = {cc: inv * vv for cc, vv in row.items()}
                    break
        return len(echelon)

    def rref(self):
        """Reduced row echelon form; returns (pivots, rows) where pivots is the
        sorted list of pivot columns and rows maps pivot col -> full reduced
        row dict (pivot entry 1, zero above/below pivots)."""
        echelon = {}
        for rowdict in self._row_dicts().values():
            row = dict(rowdict)
            while row:
                c = min(row)
                if c in echelon:
                    f = row[c]
                    for cc, vv in echelon[c].items():
                        s = row.get(cc, Fraction(0)) - f * vv
                        if s:
                            row[cc] = s
                        else:
                            row.pop(cc, None)
                else:
                    inv = Fraction(1) / row[c]
                    echelon[c] = {cc: inv * vv for cc, vv in row.items()}
                    break
        # back-substitute to clear entries above pivots
        for c in sorted(echelon, reverse=True):
            for c2, r2 in echelon.items():
                if c2 == c:
                    continue
                f = r2.get(c)
                if f:
                    for cc, vv in echelon[c].items():
                        s = r2.get(cc, Fraction(0)) - f * vv
                        if s:
                            r2[cc] = s
                        else:
                            r2.pop(cc, None)
        return sorted(echelon), echelon

    def kernel(self):
        """Basis of the right kernel, as a list of sparse column vectors."""
        pivots, rows = self.rref()
        pivset = set(pivots)
        basis = []
        for j in range(self.cols):
            if j in pivset:
                continue
            vec = {j: Fraction(1)}
            for c in pivots:
                v = rows[c].get(j)
                if v:
                    vec[c] = -v
            basis.append(vec)
        return basis

    def column_space_pivots(self):
        """Indices of a maximal independent set of columns."""
        pivots, _ = self.rref()
        return pivots

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def span_dimension(vectors):
    """Rank of a list of sparse vectors {index: Fraction}."""
    echelon = {}
    for v in vectors:
        row = dict(v)
        while row:
            c = min(row)
            if c in echelon:
                f = row[c]
                for cc, vv in echelon[c].items():
                    s = row.get(cc, Fraction(0)) - f * vv
                    if s:
                        row[cc] = s
                    else:
                        row.pop(cc, None)
            else:
                inv = Fraction(1) / row[c]
                echelon[c] = {cc: inv * vv for cc, vv in row.items()}
                break
    return len(echelon)


# ---------------------------------------------------------------------------
# certified rank for large integer matrices (numpy-backed)

_PRIMES_23 = [8388593, 8388587, 8388581, 8388571, 8388547, 8388539, 8388473,
              8388461, 8388451, 8388403, 8388379, 8388373, 8388319, 8388301,
              8388287, 8388239, 8388203, 8388143, 8388137, 8388101]


def _modp_pivots(A, p, chunk=2048):
    """Row/column indices of a pivot set of A mod p (incremental RREF).
    Returns (pivot_rows, pivot_cols) in insertion order."""
    import numpy as np

    nrows, ncols = A.shape
    E = np.zeros((0, ncols), dtype=np.int64)  # RREF rows mod p
    pivrows, pivcols = [], []
    for lo in range(0, nrows, chunk):
        B = A[lo:lo + chunk].astype(np.int64) % p
        if pivcols:
            coeff = B[:, pivcols]
            B = (B - (coeff @ E) % p) % p
        nz = np.flatnonzero(B.any(axis=1))
        for k in nz:
            row = B[k].copy()
            # re-reduce (earlier rows in this chunk may have added pivots)
            for idx in range(len(pivcols)):
                c = pivcols[idx]
                if row[c]:
                    row = (row - row[c] * E[idx]) % p
            if not row.any():
                continue
            c = int(np.flatnonzero(row)[0])
            row = (row * pow(int(row[c]), p - 2, p)) % p
            if len(pivcols):
                f = E[:, c].copy()
                E = (E - np.outer(f, row)) % p
            E = np.vstack([E, row[None, :]])
            pivrows.append(lo + int(k))
            pivcols.append(c)
    return pivrows, pivcols


def _exact_inverse_and_det(S):
    """Exact inverse and determinant of a square matrix given as a list of
    lists of ints/Fractions.  Raises ZeroDivisionError if singular."""
    n = len(S)
    M = [[Fraction(S[i][j]) for j in range(n)] + [
        Fraction(1) if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col])
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = Fraction(1) / M[col][col]
        M[col] = [inv * x for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M], det


def _grow_pivots_exact(A, pivrows, extra_rows):
    """Extend an independent row set with exact elimination over Q."""
    rows = []
    for i in pivrows + extra_rows:
        rows.append((i, {j: Fraction(int(v)) for j, v in enumerate(A[i]) if v}))
    echelon = {}
    keep = []
    for i, rowdict in rows:
        row = dict(rowdict)
        while row:
            c = min(row)
            if c in echelon:
                f = row[c]
                for cc, vv in echelon[c].items():
                    s = row.get(cc, Fraction(0)) - f * vv
                    if s:
                        row[cc] = s
                    else:
                        row.pop(cc, None)
            else:
                inv = Fraction(1) / row[c]
                echelon[c] = {cc: inv * vv for cc, vv in row.items()}
                keep.append((i, c))
                break
    return [i for i, _ in keep], [c for _, c in keep]


def _dedup_rows(A):
    """Drop zero rows and rows that repeat an earlier row up to sign; this
    never changes the row space."""
    import numpy as np

    seen = set()
    keep = []
    for i in range(A.shape[0]):
        row = A[i]
        key = row.tobytes()
        if key in seen:
            continue
        if not row.any():
            continue
        seen.add(key)
        seen.add((-row).tobytes())
        keep.append(i)
    if len(keep) == A.shape[0]:
        return A
    return np.ascontiguousarray(A[keep])


def integer_matrix_rank(A, chunk=2048):
    """Exact Q-rank of an integer numpy matrix, certified.

    Pivot candidates are found mod p (cheap); the lower bound is certified by
    an exact nonzero determinant of the pivot submatrix, and the upper bound
    by exactly verifying that every row is a Q-combination of the pivot rows
    (integer identity det(S) * A == (A[:,C] @ adj(S)) @ A[R], evaluated either
    in overflow-checked int64/float64 or multi-modularly with enough primes to
    exceed the explicit magnitude bound)."""
    import numpy as np

    A = np.ascontiguousarray(A)
    assert np.issubdtype(A.dtype, np.integer)
    nrows, ncols = A.shape
    if nrows == 0 or ncols == 0:
        return 0
    maxA = int(np.abs(A).max())
    if maxA == 0:
        return 0
    A = _dedup_rows(A)
    nrows = A.shape[0]

    p0 = _PRIMES_23[0]
    pivrows, pivcols = _modp_pivots(A, p0, chunk=chunk)

    for _attempt in range(8):
        r = len(pivrows)
        S = [[int(A[i, j]) for j in pivcols] for i in pivrows]
        Sinv, det = _exact_inverse_and_det(S)  # nonzero det certifies rank >= r
        den = 1
        for row in Sinv:
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
        delta = den
        adj = [[int(x * delta) for x in row] for row in Sinv]
        maxadj = max((abs(x) for row in adj for x in row), default=0)

        bound_w = r * maxA * maxadj
        bound = r * bound_w * maxA + abs(delta) * maxA

        R = A[pivrows].astype(np.int64)
        bad = _verify_membership(A, pivcols, adj, delta, R, bound, chunk)
        if bad is None:
            return r
        # mod-p discovery missed something (vanishing minor); grow exactly
        pivrows, pivcols = _grow_pivots_exact(A, pivrows, [bad])
    raise ArithmeticError("rank certification failed to converge")


def _verify_membership(A, pivcols, adj, delta, R, bound, chunk):
    """Check delta*A == (A[:,C] @ adj) @ R exactly.  Returns an offending row
    index, or None if the identity holds."""
    import numpy as np

    nrows = A.shape[0]
    r = len(pivcols)
    if bound < 2 ** 62:
        adj_np = np.array(adj, dtype=np.int64)
        for lo in range(0, nrows, chunk):
            Ach = A[lo:lo + chunk].astype(np.int64)
            W = Ach[:, pivcols] @ adj_np
            T = W @ R
            diff = T - delta * Ach
            if diff.any():
                return lo + int(np.flatnonzero(diff.any(axis=1))[0])
        return None
    # multi-modular
    need = 2 * bound + 1
    primes, prod = [], 1
    for p in _PRIMES_23:
        primes.append(p)
        prod *= p
        if prod >= need:
            break
    if prod < need:
        raise ArithmeticError("prime pool too small for certification bound")
    adj_int = adj
    suspects = None
    for p in primes:
        adj_p = np.array([[x % p for x in row] for row in adj_int], dtype=np.int64)
        Rp = R % p
        dp = delta % p
        for lo in range(0, nrows, chunk):
            Ach = A[lo:lo + chunk].astype(np.int64) % p
            W = (Ach[:, pivcols] @ adj_p) % p
            T = (W @ Rp) % p
            diff = (T - dp * Ach) % p
            if diff.any():
                bad = lo + int(np.flatnonzero(diff.any(axis=1))[0])
                return bad
    return None


# ---------------------------------------------------------------------------
# bigraded complexes

class BigradedComplex:
    """Pieces indexed by (weight w >= 1, degree d >= 0), with
    d_vertical: (w, d) -> (w, d+1) and d_horizontal: (w, d) -> (w-1, d+1).

    `complete_degrees` is the inclusive degree range within which every
    contributing piece is present (cap metadata recorded by the builder);
    reporting operations refuse windows outside it rather than silently
    truncating."""

    def __init__(self, pieces, d_vertical, d_horizontal, complete_degrees):
        self.pieces = dict(pieces)          # (w,d) -> BasedSpace
        self.d_vertical = dict(d_vertical)  # (w,d) -> SparseMatrix
        self.d_horizontal = dict(d_horizontal)
        self.complete_degrees = tuple(complete_degrees)

    def dim(self, w, d):
        sp = self.pieces.get((w, d))
        return sp.dimension if sp is not None else 0

    def dv(self, w, d):
        m = self.d_vertical.get((w, d))
        if m is None:
            return SparseMatrix(self.dim(w, d + 1), self.dim(w, d))
        return m

    def dh(self, w, d):
        m = self.d_horizontal.get((w, d))
        if m is None:
            return SparseMatrix(self.dim(w - 1, d + 1), self.dim(w, d))
        return m

    def weights(self):
        return sorted({w for (w, _) in self.pieces})

    def degrees(self):
        return sorted({d for (_, d) in self.pieces})

    def check_window(self, d_lo, d_hi):
        lo, hi = self.complete_degrees
        if d_lo < lo or d_hi > hi:
            raise CapTooSmall(
                f"window [{d_lo}, {d_hi}] exceeds guaranteed-complete degree "
                f"range [{lo}, {hi}]; rebuild with larger caps"
            )

    def validate(self):
        """Entry-exact check of dv^2 = 0, dh^2 = 0, dv dh + dh dv = 0 on every
        piece present.  Raises AssertionError with the offending bidegree."""
        for (w, d) in self.pieces:
            a = self.dv(w, d + 1).mul(self.dv(w, d))
            assert a.is_zero(), f"dv^2 != 0 at (w={w}, d={d})"
            b = self.dh(w - 1, d + 1).mul(self.dh(w, d))
            assert b.is_zero(), f"dh^2 != 0 at (w={w}, d={d})"
            c = self.dh(w, d + 1).mul(self.dv(w, d)).add(
                self.dv(w - 1, d + 1).mul(self.dh(w, d)))
            assert c.is_zero(), f"anticommutator != 0 at (w={w}, d={d})"

    # -- total complex -----------------------------------------------------

    def total_offsets(self, d):
        """Coordinate layout of T^d = sum over w of piece (w, d):
        returns ({w: offset}, total_dim), weights ascending."""
        offs, t = {}, 0
        for w in self.weights():
            n = self.dim(w, d)
            if n:
                offs[w] = t
                t += n
        return offs, t

    def total_differential(self, d):
        """SparseMatrix T^d -> T^{d+1} for D = dv + dh."""
        offs_d, nd = self.total_offsets(d)
        offs_t, nt = self.total_offsets(d + 1)
        entries = {}
        for w, off in offs_d.items():
            for mat, wt in ((self.dv(w, d), w), (self.dh(w, d), w - 1)):
                if wt not in offs_t:
                    if not mat.is_zero():
                        raise AssertionError(
                            f"differential leaves declared pieces at (w={w}, d={d})")
                    continue
                ot = offs_t[wt]
                for (i, j), v in mat.entries.items():
                    k = (ot + i, off + j)
                    s = entries.get(k, Fraction(0)) + v
                    if s:
                        entries[k] = s
                    else:
                        entries.pop(k, None)
        return SparseMatrix(nt, nd, entries)


def total_homology(C, window):
    """dims of H^d of the total complex for d in window = (d_lo, d_hi)."""
    d_lo, d_hi = window
    C.check_window(d_lo - 1, d_hi + 1)
    ranks = {}
    for d in range(d_lo - 1, d_hi + 1):
        ranks[d] = C.total_differential(d).rank()
    out = {}
    for d in range(d_lo, d_hi + 1):
        _, nd = C.total_offsets(d)
        out[d] = nd - ranks[d] - ranks[d - 1]
        assert out[d] >= 0
    return out


def _filtered_cycle_space(C, w, d, r):
    """Basis (sparse vectors in T^d coordinates) of
    Z_r^{w,d} = {x supported in weights <= w : Dx supported in weights <= w-r}."""
    offs_d, _ = C.total_offsets(d)
    offs_t, _ = C.total_offsets(d + 1)
    dom_cols = []  # (w', local j) -> col order
    for wp in sorted(offs_d):
        if wp <= w:
            for j in range(C.dim(wp, d)):
                dom_cols.append((wp, j))
    colidx = {key: i for i, key in enumerate(dom_cols)}
    D = C.total_differential(d)
    inv_t = {}
    for wp, off in offs_t.items():
        for i in range(C.dim(wp, d + 1)):
            inv_t[off + i] = (wp, i)
    inv_d = {}
    for wp, off in offs_d.items():
        for jj in range(C.dim(wp, d)):
            inv_d[off + jj] = (wp, jj)
    row_remap = {}
    nrow = 0
    M = {}
    for (i, j), v in D.entries.items():
        wp_t, _ = inv_t[i]
        if wp_t <= w - r:
            continue
        key_col = inv_d[j]
        if key_col not in colidx:
            continue
        if i not in row_remap:
            row_remap[i] = nrow
            nrow += 1
        M[(row_remap[i], colidx[key_col])] = v
    mat = SparseMatrix(max(nrow, 1), len(dom_cols), M)
    kern = mat.kernel()
    # express kernel vectors in full T^d coordinates
    out = []
    for vec in kern:
        full = {}
        for cj, val in vec.items():
            wp, jj = dom_cols[cj]
            full[offs_d[wp] + jj] = val
        out.append(full)
    return out


def spectral_pages(C, max_page, window=None):
    """Page dimensions E^0..E^max_page of the weight-filtration spectral
    sequence; each page maps (w, d) -> dim (zero dims omitted).

    window restricts reported degrees; defaults to the guaranteed range
    shrunk by one on each side (each page at degree d looks at chains in
    degrees d-1 and d+1)."""
    if window is None:
        lo, hi = C.complete_degrees
        window = (lo + 1, hi - 1)
    d_lo, d_hi = window
    C.check_window(d_lo - 1, d_hi + 1)
    pages = []
    page0 = {}
    for (w, d), sp in C.pieces.items():
        if d_lo <= d <= d_hi and sp.dimension:
            page0[(w, d)] = sp.dimension
    pages.append(page0)
    weights = C.weights()
    for r in range(1, max_page + 1):
        page = {}
        for d in range(d_lo, d_hi + 1):
            for w in weights:
                if not any(C.dim(wp, d) for wp in weights if wp <= w):
                    continue
                Zr = _filtered_cycle_space(C, w, d, r)
                lower = _filtered_cycle_space(C, w - 1, d, r - 1)
                Dsrc = _filtered_cycle_space(C, w + r - 1, d - 1, r - 1)
                D = C.total_differential(d - 1)
                images = [D.apply(v) for v in Dsrc]
                denom = span_dimension(lower + [v for v in images if v])
                dim = span_dimension(Zr) - denom
                assert dim >= 0
                if dim:
                    page[(w, d)] = dim
        pages.append(page)
    return pages
