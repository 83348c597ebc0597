import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomy import (
    BettiProfile,
    SimplicialMap,
    SizeLimitError,
    ValidationError,
    betti,
    build_simplicial,
    chain_complex_of,
    clique_complex,
    complete_graph,
    cycle,
    face_poset,
    hom0,
    hom0_exists,
    hom_betti,
    hom_chain_complex,
    hom_complex,
    induced_postcompose,
    induced_precompose,
    order_complex,
    order_complex_map,
    simplex,
    standard_simplex_on,
    transport,
)
from holonomy.homcomplex import HomComplex, precompose_by_projectivity

K2, K3, K4, K5 = (complete_graph(n) for n in (2, 3, 4, 5))


def brute_force_hom_cells(K, L):
    """Independent oracle: filter all block assignments by the definition."""
    blocks = [
        tuple(sorted(c))
        for size in range(1, len(L.vertices) + 1)
        for c in itertools.combinations(L.vertices, size)
    ]
    cells = []
    for assign in itertools.product(blocks, repeat=len(K.vertices)):
        eta = dict(zip(K.vertices, assign))
        ok = True
        for e in K.faces_of_dim(1):
            if set(eta[e[0]]) & set(eta[e[1]]):
                ok = False
                break
        if ok:
            for f in K.facets:
                for combo in itertools.product(*(eta[v] for v in f)):
                    if not L.has_face(set(combo)) or len(set(combo)) != len(f):
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            cells.append(assign)
    return sorted(cells, key=lambda c: (sum(len(b) - 1 for b in c), c))


class TestHomComplex:
    def test_hexagon(self):
        H = hom_complex(K2, K3)
        assert H.n_cells() == 12
        assert H.n_cells(0) == 6 and H.n_cells(1) == 6
        # every 1-cell has two distinct 0-cell faces: a 6-cycle
        assert betti(hom_chain_complex(H)) == BettiProfile.sphere(1)

    def test_full_edge_to_full_edge(self):
        H = hom_complex(simplex(1), simplex(1))
        assert H.n_cells() == 2
        assert all(HomComplex.cell_dim(c) == 0 for c in H.cells)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_closed_form_count(self, n):
        H = hom_complex(K2, complete_graph(n))
        expected = sum(
            math.comb(n, a) * math.comb(n - a, b)
            for a in range(1, n + 1)
            for b in range(1, n - a + 1)
        )
        assert H.n_cells() == expected

    @pytest.mark.parametrize(
        "K,L",
        [
            (K2, K3),
            (cycle(4), K3),
            (build_simplicial([[1, 2], [2, 3]]), cycle(4)),
            (simplex(2), simplex(2)),
            (cycle(3), build_simplicial([[1, 2], [2, 3], [1, 3], [3, 4]])),
            (simplex(2), build_simplicial(list(itertools.combinations([1, 2, 3, 4], 3)))),
        ],
    )
    def test_matches_brute_force_enumeration(self, K, L):
        H = hom_complex(K, L)
        assert list(H.cells) == brute_force_hom_cells(K, L)

    def test_empty_when_no_map_exists(self):
        assert hom_complex(cycle(5), K2).is_empty

    @given(st.lists(st.lists(st.integers(0, 4), min_size=1, max_size=3), min_size=1, max_size=5))
    @settings(max_examples=30, deadline=None)
    def test_downward_closure(self, raw):
        K = build_simplicial([list(set(f)) for f in raw])
        H = hom_complex(K, K3)
        cell_set = set(H.cells)
        for cell in H.cells:
            for child in H.lower_covers(cell):
                assert child in cell_set

    def test_cell_guard(self):
        with pytest.raises(SizeLimitError):
            hom_complex(K2, K4, max_cells=10)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("HOLONOMY_MAX_CELLS", "10")
        with pytest.raises(SizeLimitError):
            hom_complex(K2, K4)
        monkeypatch.setenv("HOLONOMY_MAX_CELLS", "100")
        assert hom_complex(K2, K4).n_cells() == 50

    def test_flag_isomorphism(self):
        # Hom(G,H) and Hom(Clique G, Clique H) have identical cell sets
        for G, H in [(K3, K4), (cycle(4), K3), (cycle(5), K4)]:
            a = hom_complex(G, H)
            b = hom_complex(clique_complex(G), clique_complex(H))
            assert a.cells == b.cells


class TestHom0:
    def test_k2_k3(self):
        assert len(hom0(K2, K3)) == 6

    def test_odd_cycle_not_two_colorable(self):
        assert hom0(cycle(5), K2) == []
        assert not hom0_exists(cycle(5), K2)

    @pytest.mark.parametrize("d,m", [(1, 3), (1, 4), (2, 4), (2, 5)])
    def test_injection_count_into_simplex(self, d, m):
        maps = hom0(simplex(d), standard_simplex_on(m))
        assert len(maps) == math.perm(m, d + 1)

    def test_hom0_equals_vertex_cells(self):
        for K, L in [(K2, K4), (cycle(4), K3)]:
            H = hom_complex(K, L)
            assert H.vertex_maps() == hom0(K, L)


class TestInducedMaps:
    def test_precompose_identity(self):
        ident = SimplicialMap.build(K2, K2, {1: 1, 2: 2})
        cmap = induced_precompose(ident, K3)
        assert cmap.mapping == tuple(range(len(cmap.source.cells)))

    def test_precompose_restriction_spot_check(self):
        C5 = cycle(5)
        incl = SimplicialMap.build(K2, C5, {1: 1, 2: 2})
        cmap = induced_precompose(incl, K3)
        H_big = cmap.source
        for cell in H_big.cells[:20]:
            image = cmap.image_cell(cell)
            assert image[0] == cell[0] and image[1] == cell[1]

    def test_precompose_functoriality(self):
        f2 = SimplicialMap.build(K2, cycle(4), {1: 1, 2: 2})
        f1 = SimplicialMap.build(cycle(4), cycle(4), {1: 2, 2: 3, 3: 4, 4: 1})
        L = K3
        lhs = induced_precompose(f2.compose(f1), L)
        rhs = induced_precompose(f1, L).then(
            induced_precompose(f2, L, hom_source=None, hom_target=None)
        )
        # align on the shared Hom complexes by cell identity
        assert lhs.source.cells == rhs.source.cells
        assert lhs.target.cells == rhs.target.cells
        assert lhs.mapping == rhs.mapping

    def test_precompose_is_order_preserving(self):
        incl = SimplicialMap.build(K2, cycle(5), {1: 2, 2: 3})
        assert induced_precompose(incl, K4).is_order_preserving()

    def test_postcompose_identity(self):
        ident = SimplicialMap.build(K3, K3, {v: v for v in K3.vertices})
        cmap = induced_postcompose(ident, K2)
        assert cmap.mapping == tuple(range(len(cmap.source.cells)))

    def test_postcompose_embeds_hexagon(self):
        incl = SimplicialMap.build(K3, K4, {1: 1, 2: 2, 3: 3})
        cmap = induced_postcompose(incl, K2)
        assert len(set(cmap.mapping)) == len(cmap.mapping)
        assert cmap.is_order_preserving()

    def test_postcompose_rejects_degenerate(self):
        g = SimplicialMap.build(simplex(1), simplex(0), {1: 1, 2: 1})
        with pytest.raises(ValidationError):
            induced_postcompose(g, K2)

    def test_postcompose_functoriality(self):
        g1 = SimplicialMap.build(K3, K4, {1: 2, 2: 3, 3: 4})
        g2 = SimplicialMap.build(K4, K5, {1: 5, 2: 1, 3: 2, 4: 3})
        lhs = induced_postcompose(g1.compose(g2), K2)
        rhs = induced_postcompose(g1, K2).then(induced_postcompose(g2, K2))
        assert lhs.mapping == rhs.mapping


class TestTransport:
    def test_singleton_path_is_identity(self):
        res = transport(cycle(5), K3, [[1, 2]])
        assert res.projectivity.is_identity
        assert res.cell_map.mapping == tuple(range(res.fiber_last.n_cells()))

    def test_full_cycle_swaps_endpoints(self):
        loop = [[1, 2], [2, 3], [3, 4], [4, 5], [5, 1], [1, 2]]
        res = transport(cycle(5), K4, loop, k=1)
        assert res.projectivity.as_dict == {1: 2, 2: 1}

    def test_transport_depends_only_on_composite(self):
        rng = random.Random(21)
        K = clique_complex(K4)
        faces = K.faces_of_dim(1)
        for _ in range(15):
            path = [list(faces[rng.randrange(len(faces))])]
            for _ in range(5):
                shared = [
                    f for f in faces
                    if len(set(f) & set(path[-1])) == 1 and set(f) != set(path[-1])
                ]
                path.append(list(shared[rng.randrange(len(shared))]))
            res = transport(K, K3, path, k=1)
            direct = precompose_by_projectivity(
                res.projectivity, K3, res.fiber_last, res.fiber_first
            )
            assert res.cell_map.mapping == direct.mapping

    def test_invalid_path_rejected(self):
        with pytest.raises(ValidationError):
            transport(cycle(5), K3, [[1, 2], [3, 4]])
        with pytest.raises(ValidationError):
            transport(cycle(5), K3, [[1, 2, 3]])


class TestOrderComplex:
    def test_single_point(self):
        H = hom_complex(simplex(1), simplex(1))
        oc = order_complex(H)
        assert oc.f_vector == (2,)

    def test_subdivided_edge(self):
        fp = face_poset(simplex(1))
        oc = order_complex(fp)
        assert oc.f_vector == (3, 2)

    def test_subdivided_hexagon(self):
        oc = order_complex(hom_complex(K2, K3))
        assert oc.f_vector == (12, 12)
        assert betti(chain_complex_of(oc)) == BettiProfile.sphere(1)

    @pytest.mark.parametrize(
        "K,L", [(K2, K4), (cycle(4), K3), (simplex(2), simplex(3))]
    )
    def test_order_complex_homology_matches_cellular(self, K, L):
        H = hom_complex(K, L)
        cellular = betti(hom_chain_complex(H))
        subdivided = betti(chain_complex_of(order_complex(H)))
        assert cellular == subdivided

    def test_cell_map_functor(self):
        loop = [[1, 2], [2, 3], [3, 4], [4, 5], [5, 1], [1, 2]]
        res = transport(cycle(5), K3, loop, k=1)
        f = order_complex_map(res.cell_map)
        assert sorted(f.as_dict) == list(range(res.fiber_last.n_cells()))


class TestEquivariance:
    def test_involution_commutes_with_restriction(self):
        # reflection of the odd cycle vs restriction to the invariant edge
        C5 = cycle(5)
        omega = {1: 1, 2: 5, 3: 4, 4: 3, 5: 2}
        sigma = [3, 4]
        L = K4
        H_gamma = hom_complex(C5, L)
        H_sigma = hom_complex(build_simplicial([sigma]), L)
        alpha = SimplicialMap.build(build_simplicial([sigma]), C5, {3: 3, 4: 4})
        restrict = induced_precompose(alpha, L, hom_source=H_gamma, hom_target=H_sigma)
        omega_hat = induced_precompose(
            SimplicialMap.build(C5, C5, omega), L, hom_source=H_gamma, hom_target=H_gamma
        )
        tau_hat = induced_precompose(
            SimplicialMap.build(build_simplicial([sigma]), build_simplicial([sigma]), {3: 4, 4: 3}),
            L,
            hom_source=H_sigma,
            hom_target=H_sigma,
        )
        assert omega_hat.then(restrict).mapping == restrict.then(tau_hat).mapping


def test_odd_cycle_scale_accepted_by_default_guard():
    # the documented acceptance scale: Hom(C5, K5) enumerates fully
    H = hom_complex(cycle(5), K5)
    assert 0 < H.n_cells() < 200_000
    assert H.n_cells(0) == len(hom0(cycle(5), K5))


def test_order_complex_route_confirms_three_sphere():
    H = hom_complex(K2, K5)
    subdivided = betti(chain_complex_of(order_complex(H)))
    assert subdivided == BettiProfile.sphere(3)
    assert betti(hom_chain_complex(H)) == subdivided
