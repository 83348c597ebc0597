"""Hom(K,L) cell complexes, induced maps and parallel transport.

A cell is a function eta assigning to each vertex of K a non-empty subset
of V(L), such that adjacent vertices get disjoint blocks and, for every
simplex of K, every choice of representatives across its blocks spans a
simplex of L.  Cells are products of simplices; the poset order is
blockwise containment.  Hom_0 (all-singleton cells) is the set of
non-degenerate simplicial maps K -> L.

Enumeration is a backtracking search over the vertices of K in canonical
order with candidate blocks ordered by size then lexicographically, so
cell lists are deterministic.  A cell-count guard (HOLONOMY_MAX_CELLS)
bounds the search.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property

from .complexes import (
    SimplicialComplex,
    SimplicialMap,
    build_simplicial,
    canon_face,
    face_key,
    is_nondegenerate,
    skeleton,
)
from .errors import SizeLimitError, ValidationError
from .groupoid import Projectivity, compose_path
from .homology import ChainComplex, betti

DEFAULT_MAX_CELLS = 200_000


def _cell_limit(max_cells):
    if max_cells is not None:
        return max_cells
    env = os.environ.get("HOLONOMY_MAX_CELLS")
    return int(env) if env else DEFAULT_MAX_CELLS


@dataclass(frozen=True)
class HomComplex:
    """Cell poset of Hom(source, target); cells are tuples of sorted
    vertex-tuples of the target, indexed by source vertices in order."""

    source: SimplicialComplex
    target: SimplicialComplex
    cells: tuple

    @cached_property
    def index(self):
        return {c: i for i, c in enumerate(self.cells)}

    @staticmethod
    def cell_dim(cell):
        return sum(len(b) - 1 for b in cell)

    @cached_property
    def dims(self):
        return tuple(self.cell_dim(c) for c in self.cells)

    @property
    def dim(self):
        return max(self.dims, default=-1)

    @cached_property
    def by_dim(self):
        out = {}
        for i, c in enumerate(self.cells):
            out.setdefault(self.dims[i], []).append(i)
        return out

    def n_cells(self, q=None):
        if q is None:
            return len(self.cells)
        return len(self.by_dim.get(q, ()))

    @property
    def is_empty(self):
        return not self.cells

    @staticmethod
    def leq(c1, c2):
        return all(set(a) <= set(b) for a, b in zip(c1, c2))

    def lower_covers(self, cell):
        """Cells obtained by dropping one element from one block; these are
        exactly the codimension-1 faces, and downward closure makes every
        one of them a cell."""
        out = []
        for i, block in enumerate(cell):
            if len(block) < 2:
                continue
            for v in block:
                smaller = tuple(w for w in block if w != v)
                out.append(cell[:i] + (smaller,) + cell[i + 1:])
        return out

    def vertex_maps(self):
        """The 0-cells as vertex dicts (the non-degenerate maps K -> L)."""
        verts = self.source.vertices
        return [
            {v: block[0] for v, block in zip(verts, c)}
            for c in self.cells
            if self.dims[self.index[c]] == 0
        ]

    def eta_json(self, cell):
        return {str(v): list(b) for v, b in zip(self.source.vertices, cell)}


def hom_complex(K, L, max_cells=None):
    """Enumerate all cells of Hom(K, L) by pruned backtracking."""
    limit = _cell_limit(max_cells)
    verts = K.vertices
    n = len(verts)
    lverts = L.vertices
    nl = len(lverts)
    if nl > 16:
        raise SizeLimitError("Hom enumeration supports at most 16 target vertices")
    pos = {v: i for i, v in enumerate(verts)}

    lfaces = {0}
    for s in L.face_sets:
        lfaces.add(sum(1 << lverts.index(v) for v in s))
    # candidate blocks by size then lexicographic order on the labels
    blocks = []
    for size in range(1, nl + 1):
        for combo in itertools.combinations(range(nl), size):
            blocks.append(sum(1 << i for i in combo))

    adj_earlier = [[] for _ in range(n)]
    for i, v in enumerate(verts):
        for w in K.adjacency[v]:
            if pos[w] < i:
                adj_earlier[i].append(pos[w])
    # facet prefixes keyed by their largest position, for early transversal
    # pruning; the full facet is checked when its last vertex is assigned
    prefix_at = [[] for _ in range(n)]
    for f in K.facets:
        ps = tuple(sorted(pos[v] for v in f))
        for t in range(2, len(ps) + 1):
            prefix_at[ps[t - 1]].append(ps[:t])
    for i in range(n):
        prefix_at[i] = sorted(set(prefix_at[i]))

    bits_of = [tuple(t for t in range(nl) if (m >> t) & 1) for m in range(1 << nl)]

    def transversals_ok(positions, assign):
        masks = [assign[p] for p in positions]
        for combo in itertools.product(*(bits_of[m] for m in masks)):
            mask = 0
            for t in combo:
                mask |= 1 << t
            if mask not in lfaces:
                return False
        return True

    cells = []
    assign = [0] * n

    def extend(i):
        if i == n:
            cells.append(tuple(assign))
            if len(cells) > limit:
                raise SizeLimitError(
                    f"Hom cell enumeration exceeded {limit} cells "
                    "(set HOLONOMY_MAX_CELLS to raise the bound)"
                )
            return
        forbidden = 0
        for p in adj_earlier[i]:
            forbidden |= assign[p]
        for m in blocks:
            if m & forbidden:
                continue
            assign[i] = m
            if all(transversals_ok(ps, assign) for ps in prefix_at[i]):
                extend(i + 1)
        assign[i] = 0

    if n:
        extend(0)
    out = []
    for masks in cells:
        out.append(tuple(tuple(lverts[t] for t in bits_of[m]) for m in masks))
    out.sort(key=lambda c: (HomComplex.cell_dim(c), tuple(face_key(b) for b in c)))
    return HomComplex(K, L, tuple(out))


def hom0(K, L):
    """All non-degenerate simplicial maps K -> L, in canonical order."""
    verts = K.vertices
    n = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    facet_prefixes = [[] for _ in range(n)]
    for f in K.facets:
        ps = tuple(sorted(pos[v] for v in f))
        for t in range(2, len(ps) + 1):
            facet_prefixes[ps[t - 1]].append(ps[:t])
    for i in range(n):
        facet_prefixes[i] = sorted(set(facet_prefixes[i]))
    out = []
    assign = [None] * n

    def ok(i):
        for ps in facet_prefixes[i]:
            image = {assign[p] for p in ps}
            if len(image) != len(ps) or not L.has_face(image):
                return False
        return True

    def extend(i):
        if i == n:
            out.append({v: assign[t] for t, v in enumerate(verts)})
            return
        for w in L.vertices:
            assign[i] = w
            if ok(i):
                extend(i + 1)
        assign[i] = None

    if n:
        extend(0)
    return out


def hom0_exists(K, L):
    """Early-exit test for Hom_0(K, L) being non-empty."""
    verts = K.vertices
    n = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    facet_prefixes = [[] for _ in range(n)]
    for f in K.facets:
        ps = tuple(sorted(pos[v] for v in f))
        for t in range(2, len(ps) + 1):
            facet_prefixes[ps[t - 1]].append(ps[:t])
    assign = [None] * n

    def extend(i):
        if i == n:
            return True
        for w in L.vertices:
            assign[i] = w
            good = True
            for ps in facet_prefixes[i]:
                image = {assign[p] for p in ps}
                if len(image) != len(ps) or not L.has_face(image):
                    good = False
                    break
            if good and extend(i + 1):
                return True
        assign[i] = None
        return False

    return extend(0) if n else True


# ---------------------------------------------------------------------------
# cellular maps


@dataclass(frozen=True)
class CellMap:
    """Map of Hom complexes, stored cell-index to cell-index."""

    source: HomComplex
    target: HomComplex
    mapping: tuple

    def __call__(self, i):
        return self.mapping[i]

    def image_cell(self, cell):
        return self.target.cells[self.mapping[self.source.index[cell]]]

    def then(self, other):
        if other.source is not self.target and other.source.cells != self.target.cells:
            raise ValidationError("cell maps do not compose")
        return CellMap(self.source, other.target, tuple(other.mapping[j] for j in self.mapping))

    @classmethod
    def identity(cls, H):
        return cls(H, H, tuple(range(len(H.cells))))

    def is_order_preserving(self):
        for i, c in enumerate(self.source.cells):
            for child in self.source.lower_covers(c):
                a = self.target.cells[self.mapping[self.source.index[child]]]
                b = self.target.cells[self.mapping[i]]
                if not HomComplex.leq(a, b):
                    return False
        return True


def _lookup_cell(H, cell):
    i = H.index.get(cell)
    if i is None:
        raise ValidationError("image is not a cell of the target Hom complex")
    return i


def induced_precompose(f, L, hom_source=None, hom_target=None):
    """f: K -> K' non-degenerate gives Hom(K', L) -> Hom(K, L), eta -> eta o f."""
    if not is_nondegenerate(f):
        raise ValidationError("precomposition needs a non-degenerate map")
    H_big = hom_source if hom_source is not None else hom_complex(f.target, L)
    H_small = hom_target if hom_target is not None else hom_complex(f.source, L)
    col_of = {v: H_big.source.vertices.index(f(v)) for v in f.source.vertices}
    mapping = []
    for cell in H_big.cells:
        new = tuple(cell[col_of[v]] for v in f.source.vertices)
        mapping.append(_lookup_cell(H_small, new))
    return CellMap(H_big, H_small, tuple(mapping))


def induced_postcompose(g, K, hom_source=None, hom_target=None):
    """g: L -> L' non-degenerate gives Hom(K, L) -> Hom(K, L'), eta -> g o eta."""
    if not is_nondegenerate(g):
        raise ValidationError("postcomposition needs a non-degenerate map")
    H_src = hom_source if hom_source is not None else hom_complex(K, g.source)
    H_tgt = hom_target if hom_target is not None else hom_complex(K, g.target)
    mapping = []
    for cell in H_src.cells:
        new = tuple(canon_face({g(v) for v in block}) for block in cell)
        mapping.append(_lookup_cell(H_tgt, new))
    return CellMap(H_src, H_tgt, tuple(mapping))


@dataclass(frozen=True)
class TransportResult:
    """Parallel transport along a path of k-faces: the composite
    projectivity and the cellular isomorphism it induces between the first
    and last fiber (mapping Hom(sigma_last, L) -> Hom(sigma_first, L))."""

    projectivity: Projectivity
    cell_map: CellMap

    @property
    def fiber_first(self):
        return self.cell_map.target

    @property
    def fiber_last(self):
        return self.cell_map.source


def simplex_on(face):
    return build_simplicial([face])


def transport(K, L, path, k=None, fibers=None):
    """Transport of Hom(. , L) fibers along a path of adjacent k-faces,
    realized flip by flip; the result depends only on the composed
    projectivity."""
    path = [canon_face(f) for f in path]
    if not path:
        raise ValidationError("path must be non-empty")
    if k is None:
        k = len(path[0]) - 1
    for f in path:
        if len(f) - 1 != k or not K.has_face(f):
            raise ValidationError(f"{f!r} is not a {k}-face of the complex")
    S = skeleton(K, k)
    proj = compose_path(S, path)
    if fibers is None:
        fibers = {}
    for f in {path[0], path[-1]} | set(path):
        if f not in fibers:
            fibers[f] = hom_complex(simplex_on(f), L)
    cmap = CellMap.identity(fibers[path[-1]])
    for f1, f2 in reversed(list(zip(path, path[1:]))):
        from .groupoid import flip

        phi = flip(S, f1, f2)
        fmap = SimplicialMap.build(simplex_on(f1), simplex_on(f2), phi.as_dict)
        step = induced_precompose(fmap, L, hom_source=fibers[f2], hom_target=fibers[f1])
        cmap = cmap.then(step)
    return TransportResult(proj, cmap)


def precompose_by_projectivity(p, L, hom_source, hom_target):
    """Cellular map of fibers given directly by a projectivity; used to
    check that transport depends only on the composed morphism."""
    fmap = SimplicialMap.build(simplex_on(p.source), simplex_on(p.target), p.as_dict)
    return induced_precompose(fmap, L, hom_source=hom_source, hom_target=hom_target)


# ---------------------------------------------------------------------------
# order complexes and homology of Hom complexes


def _maximal_chains(n, lowers):
    uppers = [[] for _ in range(n)]
    for i, lows in enumerate(lowers):
        for j in lows:
            uppers[j].append(i)
    tops = [i for i in range(n) if not uppers[i]]
    chains = []

    def descend(i, tail):
        lows = lowers[i]
        if not lows:
            chains.append(tuple(reversed(tail)))
            return
        for j in lows:
            descend(j, tail + [j])

    for t in tops:
        descend(t, [t])
    return chains


def order_complex(X):
    """Simplicial complex of chains of a poset.  Accepts a HomComplex or a
    FacePoset; vertices of the result are element indices, and for a Hom
    complex the result is its barycentric subdivision."""
    from .complexes import FacePoset

    if isinstance(X, HomComplex):
        if X.is_empty:
            raise ValidationError("the empty Hom complex has no order complex")
        lowers = [
            sorted({X.index[c] for c in X.lower_covers(cell)}) for cell in X.cells
        ]
        n = len(X.cells)
    elif isinstance(X, FacePoset):
        lowers = [sorted(l) for l in X.lower_covers]
        n = len(X.elements)
    else:
        raise ValidationError("order_complex expects a HomComplex or FacePoset")
    if n == 0:
        raise ValidationError("empty poset")
    chains = _maximal_chains(n, lowers)
    return build_simplicial(chains)


def order_complex_map(cmap):
    """Simplicial map between order complexes induced by a cellular map."""
    oc_src = order_complex(cmap.source)
    oc_tgt = order_complex(cmap.target)
    return SimplicialMap.build(oc_src, oc_tgt, {i: cmap.mapping[i] for i in oc_src.vertices})


def hom_chain_complex(H):
    """Cellular chain complex of a Hom complex: cells are products of
    simplices, with the product orientation induced by the source vertex
    order and sorted blocks."""
    if H.is_empty:
        return ChainComplex((), ())
    bases = []
    index = []
    for q in range(H.dim + 1):
        cells_q = [H.cells[i] for i in H.by_dim.get(q, [])]
        bases.append(tuple(cells_q))
        index.append({c: i for i, c in enumerate(cells_q)})
    boundaries = [tuple({} for _ in bases[0])]
    for q in range(1, H.dim + 1):
        cols = []
        for cell in bases[q]:
            col = {}
            offset = 0
            for i, block in enumerate(cell):
                if len(block) >= 2:
                    for t in range(len(block)):
                        smaller = block[:t] + block[t + 1:]
                        child = cell[:i] + (smaller,) + cell[i + 1:]
                        idx = index[q - 1][child]
                        col[idx] = col.get(idx, 0) + (-1) ** (offset + t)
                        if col[idx] == 0:
                            del col[idx]
                offset += len(block) - 1
            cols.append(col)
        boundaries.append(tuple(cols))
    return ChainComplex(tuple(bases), tuple(boundaries))


def hom_betti(K, L, max_cells=None):
    """Reduced Betti profile of Hom(K, L) via its cellular chain complex."""
    return betti(hom_chain_complex(hom_complex(K, L, max_cells=max_cells)))
