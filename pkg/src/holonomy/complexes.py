"""Abstract simplicial and cubical complexes.

Complexes are given by their top cells over labelled vertices; every lower
face is derived.  Labels are ints or strings, totally ordered with ints
sorting before strings, and a face is identified by its vertex set
(all complexes in scope are vertex-determined).  Everything is immutable
and canonically ordered, so repeated runs enumerate faces, facets and
posets in the same order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .errors import ValidationError

Label = int | str  # vertex labels; ints sort before strings


def vkey(label):
    """Sort key giving a total order on mixed int/str labels."""
    if isinstance(label, bool) or not isinstance(label, (int, str)):
        raise ValidationError(f"vertex label {label!r} must be an int or a str")
    if isinstance(label, int):
        return (0, label, "")
    return (1, 0, label)


def sorted_vertices(labels):
    return tuple(sorted(set(labels), key=vkey))


def canon_face(vertices):
    return tuple(sorted(vertices, key=vkey))


def face_key(vertices):
    return tuple(vkey(v) for v in canon_face(vertices))


# ---------------------------------------------------------------------------
# simplicial complexes


@dataclass(frozen=True)
class SimplicialComplex:
    """A finite abstract simplicial complex given by its facets."""

    facets: tuple

    @cached_property
    def vertices(self):
        return sorted_vertices(v for f in self.facets for v in f)

    @cached_property
    def dim(self):
        return max(len(f) for f in self.facets) - 1

    @cached_property
    def is_pure(self):
        return len({len(f) for f in self.facets}) == 1

    @cached_property
    def facet_sets(self):
        return tuple(frozenset(f) for f in self.facets)

    @cached_property
    def face_sets(self):
        faces = set()
        for f in self.facets:
            for q in range(1, len(f) + 1):
                faces.update(frozenset(c) for c in itertools.combinations(f, q))
        return frozenset(faces)

    @cached_property
    def faces_by_dim(self):
        by_dim = {q: [] for q in range(self.dim + 1)}
        for s in self.face_sets:
            by_dim[len(s) - 1].append(canon_face(s))
        return {q: sorted(fs, key=face_key) for q, fs in by_dim.items()}

    def faces_of_dim(self, q):
        return self.faces_by_dim.get(q, [])

    def has_face(self, vertices):
        return frozenset(vertices) in self.face_sets

    @cached_property
    def f_vector(self):
        return tuple(len(self.faces_by_dim[q]) for q in range(self.dim + 1))

    @cached_property
    def adjacency(self):
        """1-skeleton as vertex -> sorted neighbour tuple."""
        nbrs = {v: set() for v in self.vertices}
        for e in self.faces_of_dim(1):
            nbrs[e[0]].add(e[1])
            nbrs[e[1]].add(e[0])
        return {v: tuple(sorted(ns, key=vkey)) for v, ns in nbrs.items()}

    def euler_characteristic(self):
        return sum((-1) ** q * n for q, n in enumerate(self.f_vector))


def build_simplicial(facets):
    """Build a complex from an iterable of vertex collections.

    Redundant (contained) facets are absorbed; vertices are collected in
    canonical order.  Rejects empty input, empty facets and facets that
    repeat a vertex.
    """
    facets = list(facets)
    if not facets:
        raise ValidationError("facet list must be non-empty")
    cleaned = []
    for f in facets:
        f = list(f)
        if not f:
            raise ValidationError("facets must be non-empty")
        if len(set(f)) != len(f):
            raise ValidationError(f"facet {f!r} repeats a vertex")
        for v in f:
            vkey(v)
        cleaned.append(frozenset(f))
    maximal = [f for f in cleaned if not any(f < g for g in cleaned)]
    uniq = sorted({canon_face(f) for f in maximal}, key=face_key)
    return SimplicialComplex(tuple(uniq))


# ---------------------------------------------------------------------------
# cubical complexes


@dataclass(frozen=True)
class Cube:
    """A combinatorial k-cube: corner i sits at binary coordinate pattern i.

    Corner positions i and j are cube-adjacent iff i ^ j is a power of two;
    axis j pairs the bit-j=0 facet with the bit-j=1 facet.
    """

    corners: tuple

    def __post_init__(self):
        n = len(self.corners)
        if n == 0 or n & (n - 1):
            raise ValidationError(f"corner array of length {n} is not a power of two")
        if len(set(self.corners)) != n:
            raise ValidationError(f"cube corners {self.corners!r} are not distinct")
        for v in self.corners:
            vkey(v)

    @cached_property
    def dim(self):
        return len(self.corners).bit_length() - 1

    @cached_property
    def vertex_set(self):
        return frozenset(self.corners)

    @cached_property
    def sort_key(self):
        return face_key(self.corners)

    def position_of(self, vertex):
        return self.corners.index(vertex)

    @cached_property
    def edge_set(self):
        """Unordered corner pairs joined by an edge of the cube."""
        k, out = self.dim, set()
        for i in range(len(self.corners)):
            for j in range(k):
                other = i | (1 << j)
                if other != i:
                    out.add(frozenset((self.corners[i], self.corners[other])))
        return frozenset(out)

    def subcube(self, free_axes, fixed_bits):
        """Face with the given free axes; fixed_bits maps each other axis to 0/1."""
        base = 0
        for ax, b in fixed_bits.items():
            if b:
                base |= 1 << ax
        corners = []
        for m in range(1 << len(free_axes)):
            pos = base
            for t, ax in enumerate(free_axes):
                if (m >> t) & 1:
                    pos |= 1 << ax
            corners.append(self.corners[pos])
        return Cube(tuple(corners))

    def proper_and_improper_faces(self):
        k = self.dim
        for free in itertools.chain.from_iterable(
            itertools.combinations(range(k), q) for q in range(k + 1)
        ):
            fixed = [ax for ax in range(k) if ax not in free]
            for bits in itertools.product((0, 1), repeat=len(fixed)):
                yield self.subcube(free, dict(zip(fixed, bits)))

    def ridges(self):
        """The 2k facets of this cube, tagged with (axis, bit)."""
        k = self.dim
        for ax in range(k):
            free = tuple(a for a in range(k) if a != ax)
            for b in (0, 1):
                yield ax, b, self.subcube(free, {ax: b})


def _same_structure(a, b):
    return a.vertex_set == b.vertex_set and (a.dim == 0 or a.edge_set == b.edge_set)


@dataclass(frozen=True)
class CubicalComplex:
    """A pure cubical complex given by its top cubes, faces derived."""

    cubes: tuple

    @cached_property
    def dim(self):
        return self.cubes[0].dim

    @cached_property
    def face_map(self):
        """Vertex set -> canonical Cube representative of the face."""
        rep = {}
        for c in self.cubes:
            for face in c.proper_and_improper_faces():
                prev = rep.get(face.vertex_set)
                if prev is None:
                    rep[face.vertex_set] = face
                elif not _same_structure(prev, face):
                    raise ValidationError(
                        f"faces with vertex set {sorted(face.vertex_set, key=vkey)!r} "
                        "have incompatible cube structure"
                    )
        return rep

    @cached_property
    def faces_by_dim(self):
        by_dim = {q: [] for q in range(self.dim + 1)}
        for vs, cube in self.face_map.items():
            by_dim[cube.dim].append(vs)
        return {q: sorted(fs, key=lambda s: face_key(s)) for q, fs in by_dim.items()}

    def faces_of_dim(self, q):
        return self.faces_by_dim.get(q, [])

    @cached_property
    def vertices(self):
        return sorted_vertices(v for c in self.cubes for v in c.corners)

    @cached_property
    def f_vector(self):
        return tuple(len(self.faces_by_dim[q]) for q in range(self.dim + 1))

    def cube_of(self, vertices):
        """Canonical Cube of the face with this vertex set."""
        cube = self.face_map.get(frozenset(vertices))
        if cube is None:
            raise ValidationError(f"{sorted(vertices, key=vkey)!r} is not a face")
        return cube

    def has_face(self, vertices):
        return frozenset(vertices) in self.face_map

    @cached_property
    def _top_by_vertices(self):
        return {c.vertex_set: c for c in self.cubes}

    def top_cube(self, vertices):
        cube = self._top_by_vertices.get(frozenset(vertices))
        if cube is None:
            raise ValidationError(f"{sorted(vertices, key=vkey)!r} is not a top cube")
        return cube

    @cached_property
    def face_lists(self):
        """Per face: frozenset of vertex sets of all its subfaces."""
        out = {}
        for vs, cube in self.face_map.items():
            out[vs] = frozenset(f.vertex_set for f in cube.proper_and_improper_faces())
        return out

    def euler_characteristic(self):
        return sum((-1) ** q * n for q, n in enumerate(self.f_vector))


def _check_semilattice(complex_):
    """Definition of a cubical poset, part (b): bounded pairs have a least
    upper bound.  Candidate pairs are subface pairs of a common face."""
    face_lists = complex_.face_lists
    cofaces = {vs: set() for vs in face_lists}
    for z, subs in face_lists.items():
        for x in subs:
            cofaces[x].add(z)
    seen = set()
    for subs in face_lists.values():
        for x, y in itertools.combinations(subs, 2):
            if (x, y) in seen:
                continue
            seen.add((x, y))
            seen.add((y, x))
            common = cofaces[x] & cofaces[y]
            minimal = [z for z in common if all(w == z or w not in face_lists[z] for w in common)]
            if len(minimal) > 1:
                raise ValidationError(
                    "not a semilattice: faces "
                    f"{sorted(x, key=vkey)!r} and {sorted(y, key=vkey)!r} "
                    "have upper bounds but no least upper bound"
                )


def build_cubical(corner_arrays, validate=True):
    """Build a pure cubical complex from top-cube corner arrays.

    Corner arrays list the 2^k corners in binary-coordinate order.  The
    derived face structure is checked for vertex-determinedness and the
    semilattice axiom of cubical posets.
    """
    arrays = [list(c) for c in corner_arrays]
    if not arrays:
        raise ValidationError("cube list must be non-empty")
    cubes = [Cube(tuple(c)) for c in arrays]
    if len({c.dim for c in cubes}) != 1:
        raise ValidationError("cubes must all have the same dimension (pure complex)")
    uniq = {}
    for c in cubes:
        prev = uniq.get(c.vertex_set)
        if prev is None:
            uniq[c.vertex_set] = c
        elif not _same_structure(prev, c):
            raise ValidationError(
                f"top cubes on {sorted(c.vertex_set, key=vkey)!r} "
                "have incompatible cube structure"
            )
    complex_ = CubicalComplex(tuple(sorted(uniq.values(), key=lambda c: c.sort_key)))
    if validate:
        complex_.face_map  # forces the vertex-determinedness check
        _check_semilattice(complex_)
    return complex_


# ---------------------------------------------------------------------------
# standard families


def complete_graph(n):
    if n < 1:
        raise ValidationError("complete_graph needs n >= 1")
    if n == 1:
        return build_simplicial([[1]])
    return build_simplicial(list(itertools.combinations(range(1, n + 1), 2)))


def cycle(n):
    if n < 3:
        raise ValidationError("cycle needs n >= 3")
    return build_simplicial([(i, i % n + 1) for i in range(1, n + 1)])


def simplex(d):
    if d < 0:
        raise ValidationError("simplex needs d >= 0")
    return build_simplicial([range(1, d + 2)])


def standard_simplex_on(m):
    """The full simplex on vertex set {1, ..., m}."""
    if m < 1:
        raise ValidationError("need m >= 1")
    return simplex(m - 1)


def cube_skeleton(d, k):
    """k-skeleton of the standard d-cube; vertices are the ints 0..2^d-1.

    Corner arrays inherit the lattice coordinate order, so the stored
    frames of all faces are the canonical ambient ones.
    """
    if d < 1 or not 0 <= k <= d:
        raise ValidationError("cube_skeleton needs d >= 1 and 0 <= k <= d")
    cubes = []
    for free in itertools.combinations(range(d), k):
        fixed = [ax for ax in range(d) if ax not in free]
        for bits in itertools.product((0, 1), repeat=len(fixed)):
            base = sum(1 << ax for ax, b in zip(fixed, bits) if b)
            corners = []
            for m in range(1 << k):
                pos = base
                for t, ax in enumerate(free):
                    if (m >> t) & 1:
                        pos |= 1 << ax
                corners.append(pos)
            cubes.append(corners)
    return build_cubical(cubes, validate=False)


def square_ring(m, twist=False):
    """m squares glued edge to edge in a cycle: an annulus, or with one
    glueing reversed a Moebius band."""
    if m < 3:
        raise ValidationError("square_ring needs m >= 3")
    cubes = []
    for i in range(m - 1):
        cubes.append([f"a{i}", f"a{i+1}", f"b{i}", f"b{i+1}"])
    if twist:
        cubes.append([f"a{m-1}", "b0", f"b{m-1}", "a0"])
    else:
        cubes.append([f"a{m-1}", "a0", f"b{m-1}", "b0"])
    return build_cubical(cubes)


def path_complex(m):
    """Chain of m vertices as a cubical 1-complex."""
    if m < 2:
        raise ValidationError("path needs m >= 2")
    return build_cubical([[i, i + 1] for i in range(1, m)])


def _maximal_cliques(adj):
    """Bron-Kerbosch with pivoting; adj is vertex -> iterable of neighbours."""
    adj = {v: set(ns) for v, ns in adj.items()}
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(r)
            return
        pivot = max(p | x, key=lambda u: (len(p & adj[u]), vkey(u)))
        for v in sorted(p - adj[pivot], key=vkey):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(frozenset(), set(adj), set())
    return out


def clique_complex(graph):
    """Flag complex of the 1-skeleton of the given complex."""
    cliques = _maximal_cliques(graph.adjacency)
    if not cliques:
        raise ValidationError("graph has no vertices")
    return build_simplicial([canon_face(c) for c in cliques])


_FAMILIES = {
    "complete_graph": complete_graph,
    "cycle": cycle,
    "simplex": simplex,
    "cube_skeleton": cube_skeleton,
    "square_ring": square_ring,
    "path": path_complex,
    "clique_complex": clique_complex,
}


def generate(family, *args, **kwargs):
    """Construct a member of a named standard family."""
    try:
        builder = _FAMILIES[family]
    except KeyError:
        raise ValidationError(f"unknown family {family!r}") from None
    return builder(*args, **kwargs)


# ---------------------------------------------------------------------------
# skeleta and posets


def skeleton(K, k):
    """The subcomplex of all faces of dimension <= k."""
    if not 0 <= k <= K.dim:
        raise ValidationError(f"skeleton dimension {k} out of range 0..{K.dim}")
    if isinstance(K, CubicalComplex):
        return CubicalComplex(
            tuple(sorted((K.face_map[vs] for vs in K.faces_of_dim(k)), key=lambda c: c.sort_key))
        )
    top = list(K.faces_of_dim(k)) + [f for f in K.facets if len(f) - 1 < k]
    return build_simplicial(top)


@dataclass(frozen=True)
class FacePoset:
    """Graded containment poset of the non-empty faces of a complex.

    elements[i] is a canonical vertex tuple; lower_covers[i] indexes the
    faces one rank below element i.
    """

    elements: tuple
    ranks: tuple
    lower_covers: tuple

    @cached_property
    def index(self):
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def upper_covers(self):
        up = [[] for _ in self.elements]
        for i, lows in enumerate(self.lower_covers):
            for j in lows:
                up[j].append(i)
        return tuple(tuple(js) for js in up)

    @cached_property
    def height(self):
        """Number of elements in a longest chain."""
        return max(self.ranks) + 1

    def __len__(self):
        return len(self.elements)

    def maximal_chains(self):
        """All maximal chains, as tuples of element indices (bottom to top)."""
        tops = [i for i, ups in enumerate(self.upper_covers) if not ups]
        chains = []

        def descend(i, tail):
            lows = self.lower_covers[i]
            if not lows:
                chains.append(tuple(reversed(tail)))
                return
            for j in lows:
                descend(j, tail + [j])

        for t in tops:
            descend(t, [t])
        return chains


def face_poset(K):
    """FacePoset of a simplicial or cubical complex."""
    if isinstance(K, CubicalComplex):
        order = []
        for q in range(K.dim + 1):
            order.extend(K.faces_of_dim(q))
        elements = tuple(canon_face(vs) for vs in order)
        index = {frozenset(e): i for i, e in enumerate(elements)}
        ranks = tuple(K.face_map[frozenset(e)].dim for e in elements)
        lowers = []
        for e in elements:
            cube = K.face_map[frozenset(e)]
            if cube.dim == 0:
                lowers.append(())
            else:
                subs = {r.vertex_set for _, _, r in cube.ridges()}
                lowers.append(tuple(sorted(index[s] for s in subs)))
        return FacePoset(elements, ranks, tuple(lowers))
    order = []
    for q in range(K.dim + 1):
        order.extend(K.faces_of_dim(q))
    elements = tuple(order)
    index = {frozenset(e): i for i, e in enumerate(elements)}
    lowers = []
    for e in elements:
        if len(e) == 1:
            lowers.append(())
        else:
            lowers.append(tuple(sorted(index[frozenset(e) - {v}] for v in e)))
    ranks = tuple(len(e) - 1 for e in elements)
    return FacePoset(elements, ranks, tuple(lowers))


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class SimplicialMap:
    """Vertex map between simplicial complexes sending simplices to simplices."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: tuple

    def __post_init__(self):
        vm = dict(self.vertex_map)
        for v in self.source.vertices:
            if v not in vm:
                raise ValidationError(f"vertex image undefined for {v!r}")
        for f in self.source.facets:
            image = frozenset(vm[v] for v in f)
            if not self.target.has_face(image):
                raise ValidationError(
                    f"image of facet {f!r} is not a face of the target"
                )

    @classmethod
    def build(cls, source, target, mapping):
        items = tuple(sorted(dict(mapping).items(), key=lambda kv: vkey(kv[0])))
        return cls(source, target, items)

    @cached_property
    def as_dict(self):
        return dict(self.vertex_map)

    def __call__(self, v):
        return self.as_dict[v]

    def image_of(self, face):
        return canon_face({self.as_dict[v] for v in face})

    def compose(self, other):
        """other after self: source -> other.target."""
        return SimplicialMap.build(
            self.source, other.target, {v: other(self(v)) for v in self.source.vertices}
        )


@dataclass(frozen=True)
class CubicalMap:
    """Vertex map between cubical complexes sending each cube isomorphically
    onto a cube of the target (cubical maps here are non-degenerate)."""

    source: CubicalComplex
    target: CubicalComplex
    vertex_map: tuple

    def __post_init__(self):
        vm = dict(self.vertex_map)
        for v in self.source.vertices:
            if v not in vm:
                raise ValidationError(f"vertex image undefined for {v!r}")
        for c in self.source.cubes:
            image = frozenset(vm[v] for v in c.corners)
            if len(image) != len(c.corners) or not self.target.has_face(image):
                raise ValidationError(
                    f"cube on {c.corners!r} does not map isomorphically to a face"
                )
            tgt = self.target.cube_of(image)
            for e in c.edge_set:
                u, w = tuple(e)
                if frozenset((vm[u], vm[w])) not in tgt.edge_set:
                    raise ValidationError(
                        f"cube on {c.corners!r} does not map isomorphically to a face"
                    )

    @classmethod
    def build(cls, source, target, mapping):
        items = tuple(sorted(dict(mapping).items(), key=lambda kv: vkey(kv[0])))
        return cls(source, target, items)

    @cached_property
    def as_dict(self):
        return dict(self.vertex_map)

    def __call__(self, v):
        return self.as_dict[v]

    def image_of(self, face):
        return canon_face({self.as_dict[v] for v in face})


def is_nondegenerate(f):
    """True iff the map is injective on every cell."""
    if isinstance(f, CubicalMap):
        return True  # enforced at construction
    vm = f.as_dict
    return all(len({vm[v] for v in facet}) == len(facet) for facet in f.source.facets)


def is_flag(K):
    """True iff every clique of the 1-skeleton is a face."""
    return all(K.has_face(c) for c in _maximal_cliques(K.adjacency))


# ---------------------------------------------------------------------------
# glueing


def glue(K1, K2, identification):
    """Pushout of two simplicial complexes along a partial vertex bijection.

    identification maps vertices of K1 to vertices of K2 and must identify
    the induced subcomplexes isomorphically.  Vertices of K2 keep their
    labels unless those collide with labels of K1.
    """
    ident = dict(identification)
    for v in ident:
        if v not in K1.vertices:
            raise ValidationError(f"{v!r} is not a vertex of the first complex")
    for w in ident.values():
        if w not in K2.vertices:
            raise ValidationError(f"{w!r} is not a vertex of the second complex")
    if len(set(ident.values())) != len(ident):
        raise ValidationError("identification is not injective")
    dom, ran = set(ident), set(ident.values())
    inv = {w: v for v, w in ident.items()}
    for s in K1.face_sets:
        if s <= dom and not K2.has_face({ident[v] for v in s}):
            raise ValidationError("identified parts are not isomorphic subcomplexes")
    for s in K2.face_sets:
        if s <= ran and not K1.has_face({inv[w] for w in s}):
            raise ValidationError("identified parts are not isomorphic subcomplexes")

    used = set(K1.vertices)
    rename = {}
    for w in K2.vertices:
        if w in ran:
            rename[w] = inv[w]
        else:
            cand = w
            while cand in used:
                cand = f"{cand}*"
            rename[w] = cand
            used.add(cand)
    facets = list(K1.facets) + [canon_face(rename[w] for w in f) for f in K2.facets]
    return build_simplicial(facets)


# ---------------------------------------------------------------------------
# JSON interchange

# Complex files:  {"type": "simplicial", "facets": [["a","b","c"], ...]}
#                 {"type": "cubical", "dim": k, "cubes": [[...2^k corners...], ...]}
# Map files:      {"vertex_map": {"a": "x", ...}}


def complex_to_json(K):
    if isinstance(K, CubicalComplex):
        return {"type": "cubical", "dim": K.dim, "cubes": [list(c.corners) for c in K.cubes]}
    return {"type": "simplicial", "facets": [list(f) for f in K.facets]}


def complex_from_json(data):
    if not isinstance(data, dict) or "type" not in data:
        raise ValidationError("complex JSON must be an object with a 'type' field")
    kind = data["type"]
    if kind == "simplicial":
        if "facets" not in data:
            raise ValidationError("simplicial complex JSON needs 'facets'")
        return build_simplicial(data["facets"])
    if kind == "cubical":
        if "cubes" not in data:
            raise ValidationError("cubical complex JSON needs 'cubes'")
        K = build_cubical(data["cubes"])
        if "dim" in data and data["dim"] != K.dim:
            raise ValidationError(f"declared dim {data['dim']} != actual dim {K.dim}")
        return K
    raise ValidationError(f"unknown complex type {kind!r}")


def load_complex(path):
    with open(Path(path)) as fh:
        return complex_from_json(json.load(fh))


def coerce_label(raw, K):
    """Map a JSON-decoded label onto a vertex of K (JSON object keys are
    strings even when the complex uses int labels)."""
    if raw in K.vertices:
        return raw
    if isinstance(raw, str):
        try:
            n = int(raw)
        except ValueError:
            n = None
        if n is not None and n in K.vertices:
            return n
    raise ValidationError(f"{raw!r} is not a vertex of the complex")


def map_from_json(data, source, target):
    if not isinstance(data, dict) or "vertex_map" not in data:
        raise ValidationError("map JSON must be an object with a 'vertex_map' field")
    raw = data["vertex_map"]
    mapping = {coerce_label(k, source): coerce_label(v, target) for k, v in raw.items()}
    cls = CubicalMap if isinstance(source, CubicalComplex) else SimplicialMap
    return cls.build(source, target, mapping)
