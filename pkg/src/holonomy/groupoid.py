"""Flips between adjacent facets and holonomy groups of facet loops.

Facets of a pure complex are the objects; a flip is the unique isomorphism
between two facets sharing a ridge that fixes the ridge point-wise.  Paths
compose left to right: ``p.then(q)`` applies ``p`` first.  Holonomy groups
are stored by full element enumeration, which is cheap at desk scale and
makes membership queries trivial.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .complexes import (
    CubicalComplex,
    canon_face,
    face_key,
    vkey,
)
from .errors import ValidationError


@dataclass(frozen=True)
class Projectivity:
    """A flip-path morphism: a vertex bijection between two facets."""

    source: tuple
    target: tuple
    mapping: tuple

    @classmethod
    def build(cls, source, target, mapping):
        items = tuple(sorted(dict(mapping).items(), key=lambda kv: vkey(kv[0])))
        return cls(canon_face(source), canon_face(target), items)

    @classmethod
    def identity(cls, facet):
        return cls.build(facet, facet, {v: v for v in facet})

    @cached_property
    def as_dict(self):
        return dict(self.mapping)

    def __call__(self, v):
        return self.as_dict[v]

    def then(self, other):
        """Left-to-right composite: apply self, then other."""
        if other.source != self.target:
            raise ValidationError("projectivities do not compose: endpoints differ")
        return Projectivity.build(
            self.source, other.target, {v: other(self(v)) for v in self.source}
        )

    def inverse(self):
        return Projectivity.build(self.target, self.source, {w: v for v, w in self.mapping})

    @property
    def is_identity(self):
        return self.source == self.target and all(v == w for v, w in self.mapping)

    def order(self):
        """Order as an automorphism (source must equal target)."""
        if self.source != self.target:
            raise ValidationError("order is defined for automorphisms only")
        n, p = 1, self
        while not p.is_identity:
            p = p.then(self)
            n += 1
        return n


# ---------------------------------------------------------------------------
# ridge graphs


@dataclass(frozen=True)
class RidgeGraph:
    """Facet adjacency graph of a pure complex, edges tagged with the ridge."""

    complex: object
    facets: tuple            # canonical vertex tuples
    edges: tuple             # (i, j, ridge vertex tuple) with i < j

    @cached_property
    def index(self):
        return {f: i for i, f in enumerate(self.facets)}

    @cached_property
    def neighbours(self):
        adj = [[] for _ in self.facets]
        for i, j, ridge in self.edges:
            adj[i].append((j, ridge))
            adj[j].append((i, ridge))
        return tuple(tuple(sorted(ns, key=lambda t: (face_key(self.facets[t[0]]), face_key(t[1])))) for ns in adj)

    @cached_property
    def component_of(self):
        comp = [None] * len(self.facets)
        label = 0
        for start in range(len(self.facets)):
            if comp[start] is not None:
                continue
            queue = deque([start])
            comp[start] = label
            while queue:
                u = queue.popleft()
                for v, _ in self.neighbours[u]:
                    if comp[v] is None:
                        comp[v] = label
                        queue.append(v)
            label += 1
        return tuple(comp)

    def component_members(self, label):
        return [i for i, c in enumerate(self.component_of) if c == label]


def _facet_tuples(K):
    if isinstance(K, CubicalComplex):
        return tuple(canon_face(c.vertex_set) for c in K.cubes)
    return K.facets


def _ridges_of_facet(K, facet):
    """Vertex sets of the (d-1)-faces of a facet."""
    if isinstance(K, CubicalComplex):
        cube = K.top_cube(facet)
        return {r.vertex_set for _, _, r in cube.ridges()}
    return {frozenset(facet) - {v} for v in facet}


def ridge_graph(K):
    """Facet adjacency along shared ridges.  Requires a pure complex of
    dimension at least 1; components match strong connectivity."""
    if not isinstance(K, CubicalComplex) and not K.is_pure:
        raise ValidationError("ridge graph needs a pure complex")
    if K.dim < 1:
        raise ValidationError("ridge graph needs dimension >= 1")
    facets = _facet_tuples(K)
    by_ridge = {}
    for i, f in enumerate(facets):
        for r in _ridges_of_facet(K, f):
            by_ridge.setdefault(r, []).append(i)
    edges = set()
    ridge_of_pair = {}
    for r, members in by_ridge.items():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                i, j = sorted((members[a], members[b]))
                prev = ridge_of_pair.setdefault((i, j), r)
                if prev != r:
                    # ruled out by the semilattice axiom; guards invalid input
                    raise ValidationError("facets share more than one ridge")
                edges.add((i, j, canon_face(r)))
    ordered = tuple(sorted(edges, key=lambda e: (face_key(facets[e[0]]), face_key(facets[e[1]]))))
    return RidgeGraph(K, facets, ordered)


# ---------------------------------------------------------------------------
# flips


def _simplicial_flip(K, f1, f2):
    s1, s2 = frozenset(f1), frozenset(f2)
    shared = s1 & s2
    if len(shared) != len(s1) - 1:
        raise ValidationError(f"facets {f1!r} and {f2!r} are not adjacent")
    (a,) = s1 - shared
    (b,) = s2 - shared
    mapping = {v: v for v in shared}
    mapping[a] = b
    return Projectivity.build(f1, f2, mapping)


def _cubical_flip(K, f1, f2):
    c1, c2 = K.top_cube(f1), K.top_cube(f2)
    shared = _ridges_of_facet(K, f1) & _ridges_of_facet(K, f2)
    if len(shared) != 1:
        raise ValidationError(f"cubes {f1!r} and {f2!r} are not adjacent along a ridge")
    (tau,) = shared
    ax1, b1 = next((ax, b) for ax, b, r in c1.ridges() if r.vertex_set == tau)
    ax2, b2 = next((ax, b) for ax, b, r in c2.ridges() if r.vertex_set == tau)
    pos2 = {v: i for i, v in enumerate(c2.corners)}
    mapping = {}
    for i, v in enumerate(c1.corners):
        if (i >> ax1) & 1 == b1:
            # v lies on the shared ridge: fixed, and its position in c2
            # anchors where the opposite corner lands.
            mapping[v] = v
            far = i ^ (1 << ax1)
            mapping[c1.corners[far]] = c2.corners[pos2[v] ^ (1 << ax2)]
    return Projectivity.build(f1, f2, mapping)


def flip(K, f1, f2):
    """The unique isomorphism between two adjacent facets fixing their
    shared ridge point-wise."""
    t1, t2 = canon_face(f1), canon_face(f2)
    if t1 == t2:
        raise ValidationError("flip needs two distinct facets")
    if isinstance(K, CubicalComplex):
        return _cubical_flip(K, t1, t2)
    if t1 not in K.facets or t2 not in K.facets:
        raise ValidationError("flip arguments must be facets")
    return _simplicial_flip(K, t1, t2)


def compose_path(K, path):
    """Composite projectivity along a path of pairwise-adjacent facets."""
    path = [canon_face(f) for f in path]
    if not path:
        raise ValidationError("path must be non-empty")
    p = Projectivity.identity(path[0])
    for f1, f2 in zip(path, path[1:]):
        p = p.then(flip(K, f1, f2))
    return p


# ---------------------------------------------------------------------------
# holonomy


@dataclass(frozen=True)
class HolonomyGroup:
    """Vertex group of facet loops at a base facet, fully enumerated."""

    base: tuple
    generators: tuple
    elements: tuple

    @property
    def order(self):
        return len(self.elements)

    @cached_property
    def element_orders(self):
        return tuple(sorted(e.order() for e in self.elements))

    @cached_property
    def is_abelian(self):
        return all(
            a.then(b) == b.then(a)
            for i, a in enumerate(self.elements)
            for b in self.elements[i + 1:]
        )

    def __contains__(self, p):
        return p in set(self.elements)

    @property
    def iso_signature(self):
        """(order, element orders, abelian): enough to tell the groups in
        scope apart."""
        return (self.order, self.element_orders, self.is_abelian)


def _close_under_products(generators, identity):
    elements = {identity}
    frontier = [identity]
    gens = list(dict.fromkeys(g for g in generators)) + [g.inverse() for g in generators]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                p = e.then(g)
                if p not in elements:
                    elements.add(p)
                    nxt.append(p)
        frontier = nxt
    return tuple(sorted(elements, key=lambda p: p.mapping))


def spanning_tree_transports(rg, base_idx):
    """BFS tree of the base facet's component with the projectivity
    transporting the base to each node; neighbour order is canonical."""
    K = rg.complex
    transports = {base_idx: Projectivity.identity(rg.facets[base_idx])}
    tree_edges = set()
    queue = deque([base_idx])
    while queue:
        u = queue.popleft()
        for v, _ in rg.neighbours[u]:
            if v not in transports:
                transports[v] = transports[u].then(flip(K, rg.facets[u], rg.facets[v]))
                tree_edges.add((min(u, v), max(u, v)))
                queue.append(v)
    return transports, tree_edges


def holonomy_group(K, base):
    """Holonomy group at a facet: generators come from the fundamental
    cycles of a BFS spanning tree of the facet's ridge-graph component."""
    rg = ridge_graph(K)
    base = canon_face(base)
    if base not in rg.index:
        raise ValidationError(f"{base!r} is not a facet")
    base_idx = rg.index[base]
    transports, tree_edges = spanning_tree_transports(rg, base_idx)
    generators = []
    for i, j, _ in rg.edges:
        if i in transports and (i, j) not in tree_edges:
            g = transports[i].then(flip(K, rg.facets[i], rg.facets[j])).then(transports[j].inverse())
            generators.append(g)
    generators = [g for g in dict.fromkeys(generators) if not g.is_identity]
    elements = _close_under_products(generators, Projectivity.identity(base))
    return HolonomyGroup(base, tuple(generators), elements)


@dataclass(frozen=True)
class InducedHolonomyReport:
    """Images of holonomy generators under a non-degenerate map."""

    source_base: tuple
    target_base: tuple
    generator_images: tuple
    all_contained: bool


def induced_holonomy_map(f, sigma):
    """Conjugate each holonomy generator at sigma through a non-degenerate
    map and check the images land in the target holonomy group."""
    from .complexes import is_nondegenerate

    if not is_nondegenerate(f):
        raise ValidationError("map must be non-degenerate")
    sigma = canon_face(sigma)
    source_group = holonomy_group(f.source, sigma)
    image_facet = f.image_of(sigma)
    restriction = Projectivity.build(sigma, image_facet, {v: f(v) for v in sigma})
    target_group = holonomy_group(f.target, image_facet)
    images = tuple(
        restriction.inverse().then(g).then(restriction) for g in source_group.generators
    )
    contained = all(h in target_group for h in images)
    return InducedHolonomyReport(sigma, image_facet, images, contained)
