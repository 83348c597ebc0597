"""Chromatic numbers, test-family colorings, involution detection and
vertex collapsibility.

The chromatic number of a complex equals the chromatic number of its
1-skeleton (a non-degenerate map to a full simplex is exactly a proper
coloring), so the solver works on the vertex-edge graph: exact DSATUR
ordering with backtracking and a clique lower bound.  Complexes in scope
stay around 30 vertices, where exact search is cheap.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .complexes import (
    SimplicialMap,
    build_simplicial,
    canon_face,
    standard_simplex_on,
    vkey,
)
from .errors import ValidationError
from .groupoid import Projectivity, flip, ridge_graph


def _greedy_clique(adj, order):
    best = []
    for v in order:
        clique = [v]
        for w in order:
            if w != v and all(w in adj[u] for u in clique):
                clique.append(w)
        if len(clique) > len(best):
            best = clique
    return best


def max_clique(adj):
    """Exact maximum clique by branch and bound; adj maps each vertex to a
    set of neighbours."""
    adj = {v: set(ns) for v, ns in adj.items()}
    order = sorted(adj, key=lambda v: (-len(adj[v]), vkey(v)))
    best = _greedy_clique(adj, order)

    def expand(clique, candidates):
        nonlocal best
        if len(clique) + len(candidates) <= len(best):
            return
        if not candidates:
            if len(clique) > len(best):
                best = list(clique)
            return
        for v in list(candidates):
            expand(clique + [v], [w for w in candidates if w in adj[v]])
            candidates = [w for w in candidates if w != v]
            if len(clique) + len(candidates) <= len(best):
                return

    expand([], order)
    return sorted(best, key=vkey)


def _dsatur_colorable(adj, vertices, m):
    """Backtracking DSATUR search for a proper m-coloring; returns the
    coloring dict or None."""
    colors = {}
    neighbour_colors = {v: set() for v in vertices}

    def pick():
        best = None
        for v in vertices:
            if v in colors:
                continue
            key = (-len(neighbour_colors[v]), -len(adj[v]), vkey(v))
            if best is None or key < best[0]:
                best = (key, v)
        return best[1] if best else None

    def assign(v, c):
        colors[v] = c
        touched = []
        for w in adj[v]:
            if w not in colors and c not in neighbour_colors[w]:
                neighbour_colors[w].add(c)
                touched.append(w)
        return touched

    def unassign(v, c, touched):
        del colors[v]
        for w in touched:
            neighbour_colors[w].discard(c)

    def search():
        v = pick()
        if v is None:
            return True
        used = {colors[w] for w in adj[v] if w in colors}
        upper = min(m, (max(colors.values(), default=0)) + 1)
        for c in range(1, upper + 1):
            if c in used:
                continue
            touched = assign(v, c)
            if search():
                return True
            unassign(v, c, touched)
        return False

    return dict(colors) if search() else None


@dataclass(frozen=True)
class ColoringCertificate:
    value: int
    witness: SimplicialMap
    clique: tuple            # clique of size == value when the bound is tight

    def as_json(self):
        return {
            "chi": self.value,
            "witness": {str(v): c for v, c in self.witness.vertex_map},
            "clique": list(self.clique) if self.clique else None,
        }


def chi(K):
    """Exact chromatic number of a complex with witnesses: least m admitting
    a non-degenerate map onto the full simplex with m vertices."""
    adj = {v: set(ns) for v, ns in K.adjacency.items()}
    verts = K.vertices
    lower = max_clique(adj)
    m = max(1, len(lower))
    while True:
        coloring = _dsatur_colorable(adj, verts, m)
        if coloring is not None:
            target = standard_simplex_on(m)
            witness = SimplicialMap.build(K, target, coloring)
            clique = tuple(lower) if len(lower) == m else ()
            return ColoringCertificate(m, witness, clique)
        m += 1


def chi_family(K, tests, weights):
    """Least weight of a test complex admitting a non-degenerate map from K;
    (math.inf, None, None) when no test receives one."""
    from .homcomplex import hom0_exists

    if len(tests) != len(weights):
        raise ValidationError("tests and weights must align")
    order = sorted(range(len(tests)), key=lambda i: (weights[i], i))
    for i in order:
        if hom0_exists(K, tests[i]):
            from .homcomplex import hom0

            witness = hom0(K, tests[i])[0]
            return weights[i], i, witness
    return math.inf, None, None


# ---------------------------------------------------------------------------
# involutions with holonomy membership


@dataclass(frozen=True)
class PhiVerdict:
    is_phi: bool
    sigma: tuple
    tau: Projectivity
    evidence: tuple          # closed facet chain realizing tau, when found
    reason: str

    def as_json(self):
        return {
            "is_phi": self.is_phi,
            "sigma": list(self.sigma),
            "tau": {str(v): w for v, w in self.tau.mapping} if self.tau else None,
            "evidence": [list(f) for f in self.evidence] if self.evidence else None,
            "reason": self.reason,
        }


def _automorphism_of(K, mapping):
    vm = dict(mapping)
    if sorted(vm, key=vkey) != list(K.vertices) or sorted(
        set(vm.values()), key=vkey
    ) != list(K.vertices):
        raise ValidationError("involution must be a vertex bijection of the complex")
    for f in K.facets:
        if not K.has_face({vm[v] for v in f}):
            raise ValidationError("involution is not simplicial")
    for v in K.vertices:
        if vm[vm[v]] != v:
            raise ValidationError("map is not an involution")
    return vm


def holonomy_evidence(K, sigma, target):
    """Shortest closed facet chain at sigma whose projectivity equals the
    given automorphism, by BFS over (facet, accumulated map) states."""
    rg = ridge_graph(K)
    sigma = canon_face(sigma)
    start = Projectivity.identity(sigma)
    states = {(rg.index[sigma], start): None}
    queue = deque([(rg.index[sigma], start)])
    goal = (rg.index[sigma], target)
    while queue:
        node = queue.popleft()
        if node == goal:
            chain = []
            while node is not None:
                chain.append(rg.facets[node[0]])
                node = states[node]
            return tuple(reversed(chain))
        i, p = node
        for j, _ in rg.neighbours[i]:
            q = p.then(flip(K, rg.facets[i], rg.facets[j]))
            nxt = (j, q)
            if nxt not in states:
                states[nxt] = node
                queue.append(nxt)
    return None


def is_phi_complex(gamma, omega, sigma):
    """Check the defining properties: the involution keeps sigma invariant
    and restricts on it to a non-trivial holonomy element."""
    if not gamma.is_pure:
        raise ValidationError("needs a pure complex")
    vm = _automorphism_of(gamma, omega)
    sigma = canon_face(sigma)
    if sigma not in gamma.facets:
        raise ValidationError(f"{sigma!r} is not a facet")
    if frozenset(vm[v] for v in sigma) != frozenset(sigma):
        return PhiVerdict(False, sigma, None, None, "simplex is not invariant")
    tau = Projectivity.build(sigma, sigma, {v: vm[v] for v in sigma})
    if tau.is_identity:
        return PhiVerdict(False, sigma, tau, None, "restriction is the identity")
    evidence = holonomy_evidence(gamma, sigma, tau)
    if evidence is None:
        return PhiVerdict(False, sigma, tau, None, "restriction is not a holonomy element")
    return PhiVerdict(True, sigma, tau, evidence, "ok")


# ---------------------------------------------------------------------------
# tree-like recognition


@dataclass(frozen=True)
class CollapseResult:
    collapsible: object      # True / False / None when the search limit binds
    sequence: tuple          # facets removed, in order

    def as_json(self):
        return {
            "collapsible": self.collapsible,
            "sequence": [list(f) for f in self.sequence] if self.sequence else [],
        }


EXHAUSTIVE_FACET_LIMIT = 12


def _removable(facets, i):
    """The facet meets the rest in a single ridge (with the ridge still
    covered by another facet, which is automatic here)."""
    f = facets[i]
    rest = [g for j, g in enumerate(facets) if j != i]
    shared = set()
    fset = frozenset(f)
    for g in rest:
        gset = frozenset(g)
        inter = fset & gset
        # all faces of f inside g
        shared.add(inter)
    best = set()
    for s in shared:
        if not any(s < t for t in shared):
            best.add(s)
    best = {s for s in best if s}
    if len(best) != 1:
        return None
    (ridge,) = best
    if len(ridge) != len(f) - 1:
        return None
    return ridge


def vertex_collapsible(K, node_budget=200_000):
    """Search for a reverse shelling removing one facet at a time along a
    single ridge, down to one simplex.  Exhaustive (with memoization) up to
    12 facets; beyond that a node budget applies and exhaustion returns
    None instead of False."""
    if not K.is_pure:
        raise ValidationError("collapsibility is defined for pure complexes")
    facets = list(K.facets)
    exhaustive = len(facets) <= EXHAUSTIVE_FACET_LIMIT
    dead = set()
    nodes = 0
    budget_hit = False

    def search(current, seq):
        nonlocal nodes, budget_hit
        if len(current) == 1:
            return list(seq)
        key = frozenset(current)
        if key in dead:
            return None
        nodes += 1
        if not exhaustive and nodes > node_budget:
            budget_hit = True
            return None
        for i in range(len(current)):
            if _removable(current, i) is not None:
                rest = current[:i] + current[i + 1:]
                found = search(rest, seq + [current[i]])
                if found is not None:
                    return found
                if budget_hit:
                    return None
        dead.add(key)
        return None

    seq = search(tuple(facets), [])
    if seq is not None:
        return CollapseResult(True, tuple(seq))
    if budget_hit:
        return CollapseResult(None, ())
    return CollapseResult(False, ())


def random_tree_like(rng, n_facets, dim=2):
    """Random tree-like complex: start from a simplex and glue each new
    facet to an existing ridge through a fresh vertex."""
    if n_facets < 1:
        raise ValidationError("need at least one facet")
    facets = [tuple(range(1, dim + 2))]
    next_vertex = dim + 2
    for _ in range(n_facets - 1):
        base = facets[rng.randrange(len(facets))]
        drop = rng.randrange(len(base))
        ridge = base[:drop] + base[drop + 1:]
        facets.append(ridge + (next_vertex,))
        next_vertex += 1
    return build_simplicial(facets)
