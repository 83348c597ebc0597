"""Exact integer matrix reductions for homology.

Two engines: a sparse elimination that only tracks the diagonal (enough
for ranks and torsion of boundary matrices, and fast because boundary
matrices are almost all +-1 entries), and a dense Smith normal form with
unimodular transforms for kernel bases and homology coordinates.  All
arithmetic is on Python ints, so overflow is impossible.
"""

from __future__ import annotations

from math import gcd


def invariant_factors(diagonal):
    """Normalize a diagonal multiset into the divisibility chain d1 | d2 | ...

    Units are fixed points of the gcd/lcm exchange, so only the non-unit
    entries need the quadratic passes.
    """
    units = sum(1 for d in diagonal if abs(d) == 1)
    vals = [abs(d) for d in diagonal if d and abs(d) != 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                g = gcd(vals[i], vals[j])
                l = vals[i] // g * vals[j]
                if (g, l) != (vals[i], vals[j]):
                    vals[i], vals[j] = g, l
                    changed = True
    return [1] * units + sorted(vals)


# ---------------------------------------------------------------------------
# sparse diagonal-only reduction


class _Sparse:
    """Row/column indexed sparse matrix.  Rows are bucketed by length for
    pivot selection; rows found to carry no unit entry are parked until a
    mutation touches them again, so every row is rescanned at most once
    per change."""

    def __init__(self, columns):
        self.rows = {}
        self.cols = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    self.rows.setdefault(i, {})[j] = v
                    self.cols.setdefault(j, set()).add(i)
        self.by_size = {}
        self.parked = {}
        for i, row in self.rows.items():
            self.by_size.setdefault(len(row), {})[i] = None

    def _unbucket(self, i, size):
        bucket = self.by_size.get(size)
        if bucket is not None and i in bucket:
            del bucket[i]
            if not bucket:
                del self.by_size[size]
        elif i in self.parked:
            del self.parked[i]

    def _bucket(self, i, size):
        self.by_size.setdefault(size, {})[i] = None

    def park(self, i):
        row = self.rows[i]
        self._unbucket(i, len(row))
        self.parked[i] = None

    def set_entry(self, i, j, v):
        row = self.rows.setdefault(i, {})
        old = len(row)
        if v:
            row[j] = v
            self.cols.setdefault(j, set()).add(i)
        else:
            if j in row:
                del row[j]
            col = self.cols.get(j)
            if col is not None:
                col.discard(i)
                if not col:
                    del self.cols[j]
        if old or not row:
            self._unbucket(i, old)
        if not row:
            del self.rows[i]
        else:
            self._bucket(i, len(row))

    def add_row(self, dst, src, factor):
        """row[dst] += factor * row[src]."""
        if not factor:
            return
        for j, v in list(self.rows[src].items()):
            self.set_entry(dst, j, self.rows.get(dst, {}).get(j, 0) + factor * v)

    def add_col(self, dst, src, factor):
        if not factor:
            return
        for i in list(self.cols.get(src, ())):
            v = self.rows[i][src]
            self.set_entry(i, dst, self.rows[i].get(dst, 0) + factor * v)

    def drop_row(self, i):
        row = self.rows.pop(i, None)
        if row is None:
            return
        self._unbucket(i, len(row))
        for j in row:
            col = self.cols.get(j)
            if col is not None:
                col.discard(i)
                if not col:
                    del self.cols[j]

    def pick_pivot(self):
        """A unit entry of a shortest unparked row, preferring short columns
        within that row; falls back to the globally smallest entry when no
        unit entries remain."""
        while self.by_size:
            size = min(self.by_size)
            bucket = self.by_size[size]
            i = next(iter(bucket))
            best = None
            for j, v in self.rows[i].items():
                if abs(v) == 1:
                    key = (len(self.cols[j]), j)
                    if best is None or key < best:
                        best = key
            if best is None:
                self.park(i)
                continue
            return i, best[1]
        best = None
        for i in self.parked:
            for j, v in self.rows[i].items():
                key = (abs(v), i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
        return (best[1], best[2]) if best else None


def smith_diagonal(columns, nrows=None):
    """Diagonal of a unimodular reduction of the sparse matrix given as a
    list of columns ({row: value}).  The entry multiset presents the same
    cokernel as the Smith form; invariant_factors gives the canonical chain.
    """
    M = _Sparse(columns)
    diagonal = []
    while M.rows:
        pi, pj = M.pick_pivot()
        pivot = M.rows[pi][pj]
        while abs(pivot) != 1:
            # euclidean steps until the pivot divides its row and column
            moved = False
            for i in list(M.cols[pj]):
                if i == pi:
                    continue
                v = M.rows[i][pj]
                if v % pivot:
                    M.add_row(i, pi, -(v // pivot))
                    if abs(M.rows.get(i, {}).get(pj, 0)) and abs(M.rows[i][pj]) < abs(pivot):
                        pi, pivot = i, M.rows[i][pj]
                        moved = True
                        break
            if moved:
                continue
            for j in list(M.rows[pi]):
                if j == pj:
                    continue
                v = M.rows[pi][j]
                if v % pivot:
                    M.add_col(j, pj, -(v // pivot))
                    if M.rows[pi].get(j) and abs(M.rows[pi][j]) < abs(pivot):
                        pj, pivot = j, M.rows[pi][j]
                        moved = True
                        break
            if not moved:
                break
        # clear the column with exact row operations
        for i in sorted(M.cols[pj] - {pi}):
            M.add_row(i, pi, -(M.rows[i][pj] // pivot))
        # the remaining pivot-row entries die by column ops touching row pi only
        diagonal.append(pivot)
        M.drop_row(pi)
    return diagonal


def sparse_rank(columns, nrows=None):
    return len(smith_diagonal(columns))


# ---------------------------------------------------------------------------
# GF(2) rank, used as an independent cross-check


def gf2_rank(columns):
    """Rank over GF(2); columns are bitmasks."""
    pivots = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length()
            if top in pivots:
                col ^= pivots[top]
            else:
                pivots[top] = col
                rank += 1
                break
    return rank


# ---------------------------------------------------------------------------
# dense Smith normal form with transforms


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    n, m, p = len(A), len(B), len(B[0])
    out = [[0] * p for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for k in range(m):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(p):
                    if Bk[j]:
                        row[j] += a * Bk[j]
    return out


def mat_vec(A, x):
    return [sum(a * b for a, b in zip(row, x) if a and b) for row in A]


def smith_with_transforms(A):
    """(S, U, Uinv, V) with S = U A V, U and V unimodular, S in Smith form."""
    m = len(A)
    n = len(A[0]) if m else 0
    S = [row[:] for row in A]
    U = identity_matrix(m)
    Uinv = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, k):
        if i == k:
            return
        S[i], S[k] = S[k], S[i]
        U[i], U[k] = U[k], U[i]
        for r in Uinv:
            r[i], r[k] = r[k], r[i]

    def swap_cols(j, k):
        if j == k:
            return
        for r in S:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, f):
        S[dst] = [a + f * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]
        for r in Uinv:
            r[src] -= f * r[dst]

    def add_col(dst, src, f):
        for r in S:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    def negate_row(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]
        for r in Uinv:
            r[i] = -r[i]

    def diagonalize(t0):
        t = t0
        while True:
            pos = min(
                ((abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]),
                default=None,
            )
            if pos is None:
                return
            _, pi, pj = pos
            swap_rows(t, pi)
            swap_cols(t, pj)
            while True:
                clean = True
                for i in range(t + 1, m):
                    if S[i][t]:
                        add_row(i, t, -(S[i][t] // S[t][t]))
                        if S[i][t]:
                            swap_rows(t, i)
                            clean = False
                for j in range(t + 1, n):
                    if S[t][j]:
                        add_col(j, t, -(S[t][j] // S[t][t]))
                        if S[t][j]:
                            swap_cols(t, j)
                            clean = False
                if clean:
                    break
            if S[t][t] < 0:
                negate_row(t)
            t += 1

    diagonalize(0)
    while True:
        bad = next(
            (
                i
                for i in range(min(m, n) - 1)
                if S[i][i] and S[i + 1][i + 1] and S[i + 1][i + 1] % S[i][i]
            ),
            None,
        )
        if bad is None:
            break
        add_row(bad, bad + 1, 1)
        diagonalize(bad)
    return S, U, Uinv, V


def kernel_basis(A):
    """Columns spanning the saturated integer kernel of dense A."""
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        return []
    S, _, _, V = smith_with_transforms(A)
    r = sum(1 for i in range(min(m, n)) if S[i][i])
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


class NoSolution(Exception):
    pass


def solve_columns(A, bs):
    """Solve A x = b over the integers for each b in bs; A dense."""
    m = len(A)
    n = len(A[0]) if m else 0
    S, U, _, V = smith_with_transforms(A)
    r = sum(1 for i in range(min(m, n)) if S[i][i])
    outs = []
    for b in bs:
        c = mat_vec(U, b)
        y = [0] * n
        for i in range(min(m, n)):
            if S[i][i]:
                if c[i] % S[i][i]:
                    raise NoSolution
                y[i] = c[i] // S[i][i]
        for i in range(r, m):
            if c[i]:
                raise NoSolution
        outs.append(mat_vec(V, y))
    return outs
