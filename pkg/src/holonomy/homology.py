"""Integer simplicial homology via Smith normal form.

Chain complexes store one sparse boundary matrix per dimension; Betti
numbers and torsion come from the sparse reduction in snf, and induced
maps on homology from the dense transform-carrying Smith form.  Reduced
Betti numbers are used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import snf
from .complexes import SimplicialComplex, vkey
from .errors import ValidationError


@dataclass(frozen=True)
class ChainComplex:
    """bases[q] lists the q-cells; boundaries[q][i] maps cell i of dim q to
    {index of (q-1)-cell: coefficient}."""

    bases: tuple
    boundaries: tuple

    @property
    def top_dim(self):
        return len(self.bases) - 1

    def n_cells(self, q):
        if 0 <= q <= self.top_dim:
            return len(self.bases[q])
        return 0

    def boundary_columns(self, q):
        if 1 <= q <= self.top_dim:
            return list(self.boundaries[q])
        return []

    def dense_boundary(self, q):
        cols = self.boundary_columns(q)
        rows = self.n_cells(q - 1)
        out = [[0] * len(cols) for _ in range(rows)]
        for j, col in enumerate(cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def check_boundary_squared(self):
        """d(d(x)) = 0 for every basis cell; used by tests."""
        for q in range(2, self.top_dim + 1):
            for col in self.boundaries[q]:
                acc = {}
                for i, v in col.items():
                    for i2, v2 in self.boundaries[q - 1][i].items():
                        acc[i2] = acc.get(i2, 0) + v * v2
                if any(acc.values()):
                    return False
        return True


def chain_complex_of(K):
    """Oriented simplicial chain complex; signs from the vertex order."""
    if not isinstance(K, SimplicialComplex):
        raise ValidationError("chain_complex_of expects a simplicial complex")
    bases = [K.faces_of_dim(q) for q in range(K.dim + 1)]
    index = [{f: i for i, f in enumerate(fs)} for fs in bases]
    boundaries = [tuple({} for _ in bases[0])]
    for q in range(1, K.dim + 1):
        cols = []
        for f in bases[q]:
            col = {}
            for t in range(len(f)):
                sub = f[:t] + f[t + 1:]
                col[index[q - 1][sub]] = (-1) ** t
            cols.append(col)
        boundaries.append(tuple(cols))
    return ChainComplex(tuple(tuple(b) for b in bases), tuple(boundaries))


@dataclass(frozen=True)
class BettiProfile:
    """Reduced Betti numbers plus torsion coefficients per dimension.

    Trailing zero entries are trimmed so profiles of complexes of different
    dimensions compare cleanly.
    """

    reduced: tuple
    torsion: tuple
    empty: bool = False

    @classmethod
    def build(cls, reduced, torsion, empty=False):
        reduced = list(reduced)
        torsion = [tuple(t) for t in torsion]
        while reduced and reduced[-1] == 0:
            reduced.pop()
        while torsion and not torsion[-1]:
            torsion.pop()
        return cls(tuple(reduced), tuple(torsion), empty)

    @classmethod
    def sphere(cls, n):
        """Profile of S^n (n >= 0)."""
        if n == 0:
            return cls.build((1,), ())
        return cls.build((0,) * n + (1,), ())

    def reduced_betti(self, q):
        return self.reduced[q] if 0 <= q < len(self.reduced) else 0

    def torsion_at(self, q):
        return self.torsion[q] if 0 <= q < len(self.torsion) else ()

    @property
    def torsion_free(self):
        return not self.torsion

    def as_json(self):
        return {
            "empty": self.empty,
            "reduced_betti": list(self.reduced),
            "torsion": [list(t) for t in self.torsion],
        }


def betti(C):
    """Exact reduced Betti numbers and torsion from integer Smith forms."""
    top = C.top_dim
    if top < 0 or all(C.n_cells(q) == 0 for q in range(top + 1)):
        return BettiProfile.build((), (), empty=True)
    ranks = [0] * (top + 2)
    torsion = [()] * (top + 1)
    for q in range(1, top + 1):
        diag = snf.smith_diagonal(C.boundary_columns(q))
        ranks[q] = len(diag)
        torsion[q - 1] = tuple(d for d in snf.invariant_factors(diag) if d > 1)
    reduced = []
    for q in range(top + 1):
        b = C.n_cells(q) - ranks[q] - ranks[q + 1]
        reduced.append(b - 1 if q == 0 else b)
    return BettiProfile.build(reduced, torsion)


def betti_mod2(C):
    """Reduced mod-2 Betti numbers by an independent GF(2) elimination."""
    top = C.top_dim
    if top < 0 or all(C.n_cells(q) == 0 for q in range(top + 1)):
        return ()
    ranks = [0] * (top + 2)
    for q in range(1, top + 1):
        cols = [sum(1 << i for i in col) for col in C.boundary_columns(q)]
        ranks[q] = snf.gf2_rank(cols)
    out = []
    for q in range(top + 1):
        b = C.n_cells(q) - ranks[q] - ranks[q + 1]
        out.append(b - 1 if q == 0 else b)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


# ---------------------------------------------------------------------------
# homology bases and induced maps


@dataclass
class HomologySpace:
    """Free part of H_q: explicit cycle representatives plus a projection
    taking any cycle to its coordinates on the free basis."""

    q: int
    kernel: list             # n x k, columns = saturated kernel basis
    transform: list          # U with S = U M V for the boundary-coordinate matrix
    torsion_rank: int
    torsion: tuple
    free_cycles: list        # n-vectors, one per free basis class

    @property
    def free_rank(self):
        return len(self.free_cycles)

    def free_coords(self, chain):
        if not self.kernel or not self.kernel[0]:
            if any(chain):
                raise ValidationError("chain is not a cycle here")
            return []
        x = snf.solve_columns(self.kernel, [chain])[0]
        y = snf.mat_vec(self.transform, x)
        return y[self.torsion_rank:]


def homology_space(C, q):
    n = C.n_cells(q)
    if n == 0:
        return HomologySpace(q, [], [], 0, (), [])
    if q >= 1:
        kernel_cols = snf.kernel_basis(C.dense_boundary(q))
    else:
        kernel_cols = snf.identity_matrix(n)
    k = len(kernel_cols)
    kernel = [[kernel_cols[j][i] for j in range(k)] for i in range(n)]
    if k == 0:
        return HomologySpace(q, kernel, [], 0, (), [])
    dense_b = []
    for col in C.boundary_columns(q + 1):
        vec = [0] * n
        for i, v in col.items():
            vec[i] = v
        dense_b.append(vec)
    coords = snf.solve_columns(kernel, dense_b) if dense_b else []
    M = [[coords[j][i] for j in range(len(coords))] for i in range(k)]
    S, U, Uinv, _ = snf.smith_with_transforms(M)
    r = sum(1 for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i])
    tors = tuple(d for d in snf.invariant_factors([S[i][i] for i in range(r)]) if d > 1)
    cycles = []
    for j in range(r, k):
        xcol = [Uinv[i][j] for i in range(k)]
        cycles.append(snf.mat_vec(kernel, xcol))
    return HomologySpace(q, kernel, U, r, tors, cycles)


def chain_map_columns(f, CX, CY, q):
    """Columns of the chain map of a simplicial map in dimension q; cells
    whose vertices collide map to zero."""
    index_y = {c: i for i, c in enumerate(CY.bases[q])} if q <= CY.top_dim else {}
    cols = []
    for cell in (CX.bases[q] if q <= CX.top_dim else []):
        images = [f(v) for v in cell]
        if len(set(images)) != len(images):
            cols.append({})
            continue
        order = sorted(range(len(images)), key=lambda t: vkey(images[t]))
        inversions = sum(
            1 for a in range(len(order)) for b in range(a + 1, len(order)) if order[a] > order[b]
        )
        target = tuple(images[t] for t in order)
        if target not in index_y:
            raise ValidationError("image cell missing from the target complex")
        cols.append({index_y[target]: (-1) ** inversions})
    return cols


def apply_columns(cols, n_rows, vec):
    out = [0] * n_rows
    for j, a in enumerate(vec):
        if a:
            for i, v in cols[j].items():
                out[i] += a * v
    return out


def induced_homology_map(f, q, CX=None, CY=None, HX=None, HY=None):
    """Matrix of H_q(f) on the free parts: entry [i][j] is the i-th free
    coordinate of the image of the j-th source basis class."""
    CX = CX if CX is not None else chain_complex_of(f.source)
    CY = CY if CY is not None else chain_complex_of(f.target)
    HX = HX if HX is not None else homology_space(CX, q)
    HY = HY if HY is not None else homology_space(CY, q)
    cols = chain_map_columns(f, CX, CY, q)
    ny = CY.n_cells(q)
    image_coords = [HY.free_coords(apply_columns(cols, ny, z)) for z in HX.free_cycles]
    return [[image_coords[j][i] for j in range(HX.free_rank)] for i in range(HY.free_rank)]


def homology_connectivity(K, k):
    """Necessary homology-level check for k-connectivity: non-empty, and
    reduced homology (including torsion) vanishes through degree k."""
    C = chain_complex_of(K)
    profile = betti(C)
    if profile.empty:
        return False
    return all(profile.reduced_betti(q) == 0 and not profile.torsion_at(q) for q in range(k + 1))
