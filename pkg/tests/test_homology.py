import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomy import (
    BettiProfile,
    SimplicialMap,
    ValidationError,
    betti,
    betti_mod2,
    build_simplicial,
    chain_complex_of,
    complete_graph,
    cycle,
    homology_connectivity,
    homology_space,
    induced_homology_map,
    simplex,
)

SPHERE2 = build_simplicial(list(itertools.combinations([1, 2, 3, 4], 3)))
RP2 = build_simplicial(
    [[1, 2, 5], [1, 2, 6], [1, 3, 4], [1, 3, 6], [1, 4, 5],
     [2, 3, 4], [2, 3, 5], [2, 4, 6], [3, 5, 6], [4, 5, 6]]
)
# 7-vertex torus: the two triangle orbits {i, i+1, i+3}, {i, i+2, i+3} mod 7
TORUS = build_simplicial(
    [[i, (i + 1) % 7, (i + 3) % 7] for i in range(7)]
    + [[i, (i + 2) % 7, (i + 3) % 7] for i in range(7)]
)
HEXAGON = build_simplicial([[i, i % 6 + 1] for i in range(1, 7)])


class TestChainComplex:
    def test_point(self):
        C = chain_complex_of(build_simplicial([[1]]))
        profile = betti(C)
        assert profile.reduced == ()
        assert not profile.empty

    def test_hollow_triangle_boundary_rank(self):
        from holonomy import snf

        C = chain_complex_of(build_simplicial([[1, 2], [2, 3], [1, 3]]))
        assert snf.sparse_rank(C.boundary_columns(1)) == 2

    @given(st.lists(st.lists(st.integers(0, 7), min_size=1, max_size=4), min_size=1, max_size=7))
    @settings(max_examples=50)
    def test_boundary_squared_is_zero(self, raw):
        K = build_simplicial([list(set(f)) for f in raw])
        assert chain_complex_of(K).check_boundary_squared()

    def test_rejects_cubical(self):
        from holonomy import square_ring

        with pytest.raises(ValidationError):
            chain_complex_of(square_ring(4))


class TestBetti:
    def test_circle(self):
        assert betti(chain_complex_of(cycle(6))) == BettiProfile.sphere(1)

    def test_two_sphere(self):
        assert betti(chain_complex_of(SPHERE2)) == BettiProfile.sphere(2)

    def test_projective_plane_torsion(self):
        profile = betti(chain_complex_of(RP2))
        assert profile.reduced == ()
        assert profile.torsion == ((), (2,))

    def test_torus(self):
        profile = betti(chain_complex_of(TORUS))
        assert profile.reduced == (0, 2, 1)
        assert profile.torsion_free

    def test_euler_consistency(self):
        for K in (SPHERE2, TORUS, cycle(5), simplex(3)):
            profile = betti(chain_complex_of(K))
            unreduced = [profile.reduced_betti(q) for q in range(K.dim + 1)]
            unreduced[0] += 1
            assert sum((-1) ** q * b for q, b in enumerate(unreduced)) == K.euler_characteristic()

    @given(st.lists(st.lists(st.integers(0, 6), min_size=1, max_size=4), min_size=1, max_size=7))
    @settings(max_examples=40)
    def test_mod2_agreement_when_torsion_free(self, raw):
        K = build_simplicial([list(set(f)) for f in raw])
        C = chain_complex_of(K)
        profile = betti(C)
        if profile.torsion_free:
            assert betti_mod2(C) == profile.reduced

    def test_rp2_mod2_differs(self):
        C = chain_complex_of(RP2)
        assert betti_mod2(C) == (0, 1, 1)

    def test_profile_trims_trailing_zeros(self):
        assert BettiProfile.build((0, 1, 0), ()) == BettiProfile.build((0, 1), ((), ()))


class TestConnectivitySurrogate:
    def test_two_sphere_is_one_connected(self):
        assert homology_connectivity(SPHERE2, 1)

    def test_circle(self):
        assert homology_connectivity(HEXAGON, 0)
        assert not homology_connectivity(HEXAGON, 1)

    def test_disconnected(self):
        assert not homology_connectivity(build_simplicial([[1, 2], [3, 4]]), 0)

    def test_rp2_blocked_by_torsion(self):
        assert homology_connectivity(RP2, 0)
        assert not homology_connectivity(RP2, 1)


def hexagon_map(mapping):
    return SimplicialMap.build(HEXAGON, HEXAGON, mapping)


class TestInducedMap:
    def test_identity(self):
        f = hexagon_map({v: v for v in HEXAGON.vertices})
        assert induced_homology_map(f, 1) == [[1]]

    def test_rotation_degree_one(self):
        f = hexagon_map({v: v % 6 + 1 for v in HEXAGON.vertices})
        assert induced_homology_map(f, 1) == [[1]]

    def test_reflection_degree_minus_one(self):
        f = hexagon_map({1: 1, 2: 6, 3: 5, 4: 4, 5: 3, 6: 2})
        assert induced_homology_map(f, 1) == [[-1]]

    def test_sphere_transposition_reverses_orientation(self):
        f = SimplicialMap.build(SPHERE2, SPHERE2, {1: 2, 2: 1, 3: 3, 4: 4})
        assert induced_homology_map(f, 2) == [[-1]]

    def test_functoriality_on_composites(self):
        import random

        rng = random.Random(4)
        maps = []
        for _ in range(6):
            shift = rng.randrange(6)
            flip = rng.random() < 0.5
            mapping = {}
            for v in HEXAGON.vertices:
                w = (v - 1 + shift) % 6
                if flip:
                    w = (-w) % 6
                mapping[v] = w + 1
            maps.append(hexagon_map(mapping))
        C = chain_complex_of(HEXAGON)
        H = homology_space(C, 1)
        for f in maps:
            for g in maps:
                fg = f.compose(g)
                a = induced_homology_map(fg, 1, C, C, H, H)[0][0]
                b = (
                    induced_homology_map(f, 1, C, C, H, H)[0][0]
                    * induced_homology_map(g, 1, C, C, H, H)[0][0]
                )
                assert a == b

    def test_collapsing_map_kills_the_circle(self):
        tri = cycle(3)
        edge = simplex(1)
        f = SimplicialMap.build(tri, edge, {1: 1, 2: 2, 3: 2})
        C3 = chain_complex_of(tri)
        C1 = chain_complex_of(edge)
        assert induced_homology_map(f, 1, C3, C1) == []


class TestOddDegreeSurrogate:
    """Equivariant self-maps of a free involution sphere must have odd
    degree; assembled here on the 2-sphere Hom(K2,K4) with its
    endpoint-swap involution and the simplex-permutation actions that
    commute with it."""

    def test_equivariant_composites_have_odd_degree(self):
        import itertools as it

        from holonomy import (
            complete_graph,
            hom_complex,
            induced_postcompose,
            induced_precompose,
            order_complex_map,
        )

        K2, K4 = complete_graph(2), complete_graph(4)
        H = hom_complex(K2, K4)
        beta = SimplicialMap.build(K2, K2, {1: 2, 2: 1})
        beta_hat = induced_precompose(beta, K4, hom_source=H, hom_target=H)
        candidates = [beta_hat]
        for perm in ([2, 1, 3, 4], [2, 3, 4, 1], [4, 3, 2, 1]):
            g = SimplicialMap.build(K4, K4, dict(zip([1, 2, 3, 4], perm)))
            g_hat = induced_postcompose(g, K2, hom_source=H, hom_target=H)
            candidates.append(g_hat)
            candidates.append(g_hat.then(beta_hat))
        # the permutation actions commute with the involution
        for g_hat in candidates[1::2]:
            assert g_hat.then(beta_hat).mapping == beta_hat.then(g_hat).mapping
        oc_cache = {}
        for cmap in candidates:
            f = order_complex_map(cmap)
            degree = induced_homology_map(f, 2)[0][0]
            assert degree % 2 == 1
