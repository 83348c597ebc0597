"""Signed-permutation holonomy of cubical complexes and derived invariants.

Every cube carries the frame induced by its stored corner order.  A flip
between top cubes then has a signed permutation matrix; its parity (number
of -1 entries mod 2) is a homomorphism to Z_2, so the parity of a closed
chain does not depend on the chosen frames.  The parity invariant, the
shortest odd chain through a cube (via BFS on the parity double cover of
the ridge graph), the curvature ratio and bubble moves all live here.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .complexes import (
    Cube,
    CubicalComplex,
    build_cubical,
    canon_face,
    cube_skeleton,
)
from .errors import SizeLimitError, ValidationError
from .groupoid import RidgeGraph, flip, ridge_graph


@dataclass(frozen=True)
class SignedPermMatrix:
    """A signed permutation matrix: axis i maps to axis perm[i] with sign
    signs[i].  Exactly one nonzero entry per row and column."""

    perm: tuple
    signs: tuple

    @classmethod
    def identity(cls, k):
        return cls(tuple(range(k)), (1,) * k)

    @property
    def size(self):
        return len(self.perm)

    def then(self, other):
        """Composite matrix of 'apply self, then other'."""
        if other.size != self.size:
            raise ValidationError("matrix sizes differ")
        return SignedPermMatrix(
            tuple(other.perm[j] for j in self.perm),
            tuple(s * other.signs[j] for j, s in zip(self.perm, self.signs)),
        )

    def inverse(self):
        inv_perm = [0] * self.size
        inv_signs = [1] * self.size
        for i, j in enumerate(self.perm):
            inv_perm[j] = i
            inv_signs[j] = self.signs[i]
        return SignedPermMatrix(tuple(inv_perm), tuple(inv_signs))

    def rows(self):
        """Dense rows: entry [perm[i]][i] = signs[i]."""
        k = self.size
        out = [[0] * k for _ in range(k)]
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            out[j][i] = s
        return out

    @property
    def is_identity(self):
        return self.perm == tuple(range(self.size)) and all(s == 1 for s in self.signs)


def parity(matrix):
    """Number of -1 entries mod 2; 0 exactly on the even subgroup."""
    return sum(1 for s in matrix.signs if s == -1) % 2


def signed_matrix(p, source_cube, target_cube=None):
    """Matrix of a cube isomorphism relative to the two stored frames.

    Read off from the image of corner 0 and its dim neighbours, then
    checked against every corner.
    """
    if target_cube is None:
        target_cube = source_cube
    if frozenset(p.source) != source_cube.vertex_set or frozenset(p.target) != target_cube.vertex_set:
        raise ValidationError("projectivity endpoints do not match the given cubes")
    k = source_cube.dim
    if target_cube.dim != k:
        raise ValidationError("cube dimensions differ")
    pos = {v: i for i, v in enumerate(target_cube.corners)}
    base = pos[p(source_cube.corners[0])]
    perm = [0] * k
    signs = [1] * k
    for ax in range(k):
        q = pos[p(source_cube.corners[1 << ax])]
        d = base ^ q
        if d == 0 or d & (d - 1):
            raise ValidationError("not a cube isomorphism")
        j = d.bit_length() - 1
        perm[ax] = j
        signs[ax] = -1 if (base >> j) & 1 else 1
    if len(set(perm)) != k:
        raise ValidationError("not a cube isomorphism")
    # a cube isomorphism moves corner c to base XOR (c pushed through perm)
    for c in range(1 << k):
        expect = base
        for ax in range(k):
            if (c >> ax) & 1:
                expect ^= 1 << perm[ax]
        if pos[p(source_cube.corners[c])] != expect:
            raise ValidationError("not a cube isomorphism")
    return SignedPermMatrix(tuple(perm), tuple(signs))


# ---------------------------------------------------------------------------
# parity-labelled ridge graph


def flip_parity(K, f1, f2):
    """Parity of the flip between two adjacent top cubes, relative to their
    stored frames.  Only loop parities are frame-independent."""
    c1, c2 = K.top_cube(f1), K.top_cube(f2)
    return parity(signed_matrix(flip(K, f1, f2), c1, c2))


def parity_ridge_graph(K):
    """(ridge graph, {edge index: parity}) for a pure cubical complex."""
    if not isinstance(K, CubicalComplex):
        raise ValidationError("parity invariants need a cubical complex")
    rg = ridge_graph(K) if K.dim >= 1 else None
    if rg is None:
        # dimension 0: no flips at all
        facets = tuple(canon_face(c.vertex_set) for c in K.cubes)
        return RidgeGraph(K, facets, ()), {}
    parities = {
        idx: flip_parity(K, rg.facets[i], rg.facets[j])
        for idx, (i, j, _) in enumerate(rg.edges)
    }
    return rg, parities


def invariant_I(K):
    """0 iff every closed chain of top cubes has even flip parity.

    The even subgroup of the signed permutation group is exactly the
    kernel of the parity homomorphism, so holonomy containment in it
    reduces to the parity of the generators.  Per ridge-graph component
    this is then a bipartiteness check with parity edge labels: some
    fundamental cycle is odd iff the parity double cover of the component
    is connected across the two lifts.
    """
    rg, parities = parity_ridge_graph(K)
    spin = {}
    adj = [[] for _ in rg.facets]
    for idx, (i, j, _) in enumerate(rg.edges):
        adj[i].append((j, parities[idx]))
        adj[j].append((i, parities[idx]))
    for start in range(len(rg.facets)):
        if start in spin:
            continue
        spin[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v, par in adj[u]:
                if v not in spin:
                    spin[v] = spin[u] ^ par
                    queue.append(v)
                elif spin[v] != spin[u] ^ par:
                    return 1
    return 0


def local_Z(K, sigma):
    """Length of the shortest closed chain through sigma with odd holonomy
    parity, via BFS on the parity double cover; math.inf if none exists.

    Returns (length, witness chain of facets) with the chain listing the
    visited top cubes sigma = s_0, s_1, ..., s_m = sigma.
    """
    rg, parities = parity_ridge_graph(K)
    sigma = canon_face(sigma)
    if sigma not in rg.index:
        raise ValidationError(f"{sigma!r} is not a top cube")
    src = rg.index[sigma]
    adj = [[] for _ in rg.facets]
    for idx, (i, j, _) in enumerate(rg.edges):
        adj[i].append((j, parities[idx]))
        adj[j].append((i, parities[idx]))
    start = (src, 0)
    goal = (src, 1)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        u, s = node
        for v, par in adj[u]:
            nxt = (v, s ^ par)
            if nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    if goal not in parent:
        return math.inf, None
    chain = []
    node = goal
    while node is not None:
        chain.append(rg.facets[node[0]])
        node = parent[node]
    chain.reverse()
    return len(chain) - 1, chain


@dataclass(frozen=True)
class CurvatureReport:
    """Chain-based curvature: CC = 1/Z_chain with Z_chain the shortest odd
    closed chain anywhere in the complex."""

    cc: Fraction
    z_chain: object          # int or math.inf
    witness: object          # facet chain or None
    witness_cube_count: object

    def as_json(self):
        return {
            "I": 0 if self.z_chain == math.inf else 1,
            "Z_chain": "inf" if self.z_chain == math.inf else self.z_chain,
            "CC": "0" if self.cc == 0 else f"{self.cc.numerator}/{self.cc.denominator}",
            "witness": None if self.witness is None else [list(f) for f in self.witness],
        }


def curvature_CC(K):
    """Maximum over top cubes of 1/local_Z, with 1/inf = 0."""
    rg, parities = parity_ridge_graph(K)
    best = math.inf
    witness = None
    odd_components = set()
    spin = {}
    adj = [[] for _ in rg.facets]
    for idx, (i, j, _) in enumerate(rg.edges):
        adj[i].append((j, parities[idx]))
        adj[j].append((i, parities[idx]))
    for start in range(len(rg.facets)):
        if start in spin:
            continue
        comp = rg.component_of[start]
        spin[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v, par in adj[u]:
                if v not in spin:
                    spin[v] = spin[u] ^ par
                    queue.append(v)
                elif spin[v] != spin[u] ^ par:
                    odd_components.add(comp)
    for i, f in enumerate(rg.facets):
        if rg.component_of[i] not in odd_components:
            continue
        z, chain = local_Z(K, f)
        if z < best:
            best, witness = z, chain
    if best == math.inf:
        return CurvatureReport(Fraction(0), math.inf, None, None)
    return CurvatureReport(Fraction(1, best), best, witness, len(set(witness)))


def _connected_subsets(adj, size):
    """All connected index subsets of the given size, each exactly once."""
    n = len(adj)
    out = []

    def grow(current, frontier, banned):
        if len(current) == size:
            out.append(frozenset(current))
            return
        frontier = [v for v in frontier if v not in banned and v not in current]
        local_ban = set(banned)
        for v in frontier:
            nxt = set(current)
            nxt.add(v)
            new_frontier = sorted(set(itertools.chain.from_iterable(adj[u] for u in nxt)))
            grow(nxt, new_frontier, local_ban)
            local_ban.add(v)

    for root in range(n):
        grow({root}, sorted(adj[root]), set(range(root)))
    return out


def subcomplex_Z(K, limit=20):
    """Exact minimum number of top cubes of a connected pure subcomplex W
    with odd parity invariant; enumeration, so tiny inputs only."""
    if len(K.cubes) > limit:
        raise SizeLimitError(
            f"subcomplex enumeration capped at {limit} top cubes, got {len(K.cubes)}"
        )
    rg, _ = parity_ridge_graph(K)
    adj = [[] for _ in rg.facets]
    for i, j, _ in rg.edges:
        adj[i].append(j)
        adj[j].append(i)
    adj = [sorted(set(ns)) for ns in adj]
    for size in range(1, len(K.cubes) + 1):
        for subset in _connected_subsets(adj, size):
            W = CubicalComplex(tuple(sorted((K.top_cube(rg.facets[i]) for i in subset), key=lambda c: c.sort_key)))
            if invariant_I(W) == 1:
                return size
    return math.inf


@dataclass(frozen=True)
class ObstructionReport:
    verdict: str             # "obstructed" or "inconclusive"
    source: CurvatureReport
    target: CurvatureReport


def embed_obstruction(K, L):
    """Necessary condition for a non-degenerate map K -> L: curvature must
    not increase.  Never claims that a map exists."""
    if K.dim != L.dim:
        raise ValidationError("complexes must have equal dimension")
    rk, rl = curvature_CC(K), curvature_CC(L)
    verdict = "obstructed" if rk.cc > rl.cc else "inconclusive"
    return ObstructionReport(verdict, rk, rl)


# ---------------------------------------------------------------------------
# bubble moves


def _faces_of_cube_set(complex_, cubes):
    faces = set()
    for c in cubes:
        faces.update(f.vertex_set for f in c.proper_and_improper_faces())
    return faces


def _resolve_top_cubes(K, selection):
    cubes = []
    for item in selection:
        if isinstance(item, int):
            try:
                cubes.append(K.cubes[item])
            except IndexError:
                raise ValidationError(f"top cube index {item} out of range") from None
        elif isinstance(item, Cube):
            cubes.append(K.top_cube(item.vertex_set))
        else:
            cubes.append(K.top_cube(item))
    if len({c.vertex_set for c in cubes}) != len(cubes):
        raise ValidationError("selection repeats a top cube")
    return cubes


def bubble_move(K, selection, embed):
    """Excise a ball of top cubes identified with part of the boundary of
    the (k+1)-cube and glue in the complementary facet set.

    ``embed`` maps the vertices of the selected subcomplex onto lattice
    vertices of the boundary of I^(k+1) (ints 0..2^(k+1)-1), identifying
    each selected cube with a facet.  Fresh vertices are created for the
    complementary corners that do not lie in the image.
    """
    k = K.dim
    B = _resolve_top_cubes(K, selection)
    if not B:
        raise ValidationError("selection must be non-empty")
    boundary = cube_skeleton(k + 1, k)
    embed = dict(embed)
    b_vertices = {v for c in B for v in c.corners}
    if set(embed) != b_vertices:
        raise ValidationError("embed must be defined exactly on the selected vertices")
    if len(set(embed.values())) != len(embed):
        raise ValidationError("embed is not injective")
    if not all(boundary.has_face({w}) for w in embed.values()):
        raise ValidationError("embed values must be lattice vertices of the boundary cube")

    image_facets = []
    for c in B:
        image = frozenset(embed[v] for v in c.corners)
        if image not in boundary._top_by_vertices:
            raise ValidationError(f"cube on {c.corners!r} does not map onto a boundary facet")
        tgt = boundary.top_cube(image)
        for e in c.edge_set:
            u, w = tuple(e)
            if frozenset((embed[u], embed[w])) not in tgt.edge_set:
                raise ValidationError(f"cube on {c.corners!r} does not map isomorphically")
        image_facets.append(tgt)
    if len({c.vertex_set for c in image_facets}) != len(image_facets):
        raise ValidationError("two selected cubes map onto the same boundary facet")
    if len(image_facets) == len(boundary.cubes):
        raise ValidationError("selection must map onto a proper facet subset")

    complement = [c for c in boundary.cubes if c.vertex_set not in {x.vertex_set for x in image_facets}]

    # every face shared between the ball and the rest of K must lie on the
    # interface of the two complementary balls
    rest = [c for c in K.cubes if c.vertex_set not in {x.vertex_set for x in B}]
    shared = _faces_of_cube_set(K, B) & _faces_of_cube_set(K, rest)
    interface = _faces_of_cube_set(boundary, image_facets) & _faces_of_cube_set(boundary, complement)
    for face in shared:
        if frozenset(embed[v] for v in face) not in interface:
            raise ValidationError(
                "the boundary of the selected ball does not match the "
                "interface of the complementary balls"
            )

    inverse = {w: v for v, w in embed.items()}
    used = set(K.vertices)
    for w in sorted(v for c in complement for v in c.corners):
        if w not in inverse:
            cand = f"bub{w}"
            while cand in used:
                cand = f"{cand}*"
            inverse[w] = cand
            used.add(cand)
    new_cubes = [list(c.corners) for c in rest]
    new_cubes.extend([inverse[w] for w in c.corners] for c in complement)
    return build_cubical(new_cubes)
