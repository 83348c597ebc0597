import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomy import (
    SignedPermMatrix,
    SizeLimitError,
    ValidationError,
    build_cubical,
    bubble_move,
    compose_path,
    cube_skeleton,
    curvature_CC,
    embed_obstruction,
    flip,
    holonomy_group,
    invariant_I,
    local_Z,
    parity,
    path_complex,
    ridge_graph,
    signed_matrix,
    square_ring,
    subcomplex_Z,
)


def signed_perm_matrices(k):
    perms = list(itertools.permutations(range(k)))
    return st.builds(
        SignedPermMatrix,
        st.sampled_from(perms),
        st.tuples(*[st.sampled_from((1, -1)) for _ in range(k)]),
    )


def ring_order(K):
    """Facets of a ring complex in dual-cycle order."""
    rg = ridge_graph(K)
    order = [0]
    prev = None
    while True:
        nbrs = [v for v, _ in rg.neighbours[order[-1]] if v != prev]
        nxt = nbrs[0]
        if nxt == 0:
            break
        prev = order[-1]
        order.append(nxt)
    return [rg.facets[i] for i in order]


def loop_parity_oracle(K, facet_loop):
    """Brute force: compose the flips along the loop and count -1 entries."""
    p = compose_path(K, list(facet_loop) + [facet_loop[0]])
    base = K.top_cube(facet_loop[0])
    return parity(signed_matrix(p, base, base))


class TestSignedPermMatrix:
    def test_identity_parity(self):
        assert parity(SignedPermMatrix.identity(3)) == 0

    def test_rotation_matrix_parity_one(self):
        m = SignedPermMatrix((1, 0), (1, -1))
        assert m.rows() in ([[0, -1], [1, 0]], [[0, 1], [-1, 0]])
        assert parity(m) == 1

    def test_minus_identity_even(self):
        assert parity(SignedPermMatrix((0, 1), (-1, -1))) == 0

    @given(signed_perm_matrices(3), signed_perm_matrices(3))
    def test_parity_is_a_homomorphism(self, a, b):
        assert parity(a.then(b)) == (parity(a) + parity(b)) % 2

    @given(signed_perm_matrices(4))
    def test_inverse(self, a):
        assert a.then(a.inverse()).is_identity
        assert parity(a.inverse()) == parity(a)


class TestSignedMatrixOfFlip:
    def test_identity_projectivity(self):
        K = cube_skeleton(3, 2)
        base = K.cubes[0]
        p = compose_path(K, [base.corners])
        assert signed_matrix(p, base, base).is_identity

    def test_ring_flip_has_single_minus(self):
        K = square_ring(5)
        s0 = K.top_cube(["a0", "a1", "b0", "b1"])
        s1 = K.top_cube(["a1", "a2", "b1", "b2"])
        m = signed_matrix(flip(K, s0.corners, s1.corners), s0, s1)
        assert sum(1 for s in m.signs if s == -1) == 1

    def test_front_front_flip_preserves_parity(self):
        # bottom face (z=0) and front face (y=0) of the 3-cube share the
        # edge {y=0, z=0}, a front face of both
        K = cube_skeleton(3, 2)
        bottom = K.top_cube([0, 1, 2, 3])
        front = K.top_cube([0, 1, 4, 5])
        m = signed_matrix(flip(K, bottom.corners, front.corners), bottom, front)
        assert parity(m) == 0

    def test_rejects_non_isomorphism(self):
        K = square_ring(4)
        s0, s1 = K.cubes[0], K.cubes[1]
        from holonomy import Projectivity

        twisted = dict(flip(K, s0.corners, s1.corners).as_dict)
        a, b = s0.corners[0], s0.corners[1]
        twisted[a], twisted[b] = twisted[b], twisted[a]
        p = Projectivity.build(s0.corners, s1.corners, twisted)
        with pytest.raises(ValidationError):
            signed_matrix(p, s0, s1)


class TestInvariantI:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_cube_boundary_is_even(self, k):
        assert invariant_I(cube_skeleton(k + 1, k)) == 0

    @pytest.mark.parametrize("m", range(3, 9))
    @pytest.mark.parametrize("twist", [False, True])
    def test_rings_match_brute_force_oracle(self, m, twist):
        K = square_ring(m, twist)
        oracle = loop_parity_oracle(K, ring_order(K))
        assert invariant_I(K) == oracle
        if not twist:
            assert invariant_I(K) == m % 2

    def test_subcomplexes_of_skeletons_are_even(self):
        rng = random.Random(99)
        K = cube_skeleton(4, 2)
        rg = ridge_graph(K)
        for _ in range(25):
            chosen = {rng.randrange(len(K.cubes))}
            frontier = [v for v, _ in rg.neighbours[next(iter(chosen))]]
            while frontier and len(chosen) < 10:
                v = frontier.pop(rng.randrange(len(frontier)))
                if v not in chosen:
                    chosen.add(v)
                    frontier.extend(w for w, _ in rg.neighbours[v])
            W = build_cubical([K.top_cube(rg.facets[i]).corners for i in chosen])
            assert invariant_I(W) == 0

    def test_loop_parity_survives_recoordinatization(self):
        rng = random.Random(3)
        K = square_ring(5)
        for _ in range(10):
            cubes = []
            for c in K.cubes:
                perm = [0, 1, 2, 3]
                # random cube automorphism: swap axes and/or flip each
                if rng.random() < 0.5:
                    perm = [perm[i] for i in (0, 2, 1, 3)]
                if rng.random() < 0.5:
                    perm = [perm[i] for i in (1, 0, 3, 2)]
                if rng.random() < 0.5:
                    perm = [perm[i] for i in (2, 3, 0, 1)]
                cubes.append([c.corners[i] for i in perm])
            K2 = build_cubical(cubes)
            assert invariant_I(K2) == invariant_I(K) == 1
            z, _ = local_Z(K2, K2.cubes[0].corners)
            assert z == 5


class TestLocalZ:
    def test_cube_boundary_has_no_odd_chain(self):
        K = cube_skeleton(3, 2)
        z, chain = local_Z(K, K.cubes[0].corners)
        assert z == math.inf and chain is None

    def test_ring5(self):
        K = square_ring(5)
        z, chain = local_Z(K, K.cubes[0].corners)
        assert z == 5
        assert len(chain) == 6 and chain[0] == chain[-1]

    def test_twisted_ring4(self):
        K = square_ring(4, True)
        z, _ = local_Z(K, K.cubes[0].corners)
        assert z == 4

    def test_matches_exhaustive_walk_oracle(self):
        # shortest odd closed walk by explicit enumeration of all walks
        for m, twist in [(3, False), (5, False), (4, True), (6, True)]:
            K = square_ring(m, twist)
            rg = ridge_graph(K)
            adj = {i: [v for v, _ in rg.neighbours[i]] for i in range(len(rg.facets))}
            best = math.inf
            for length in range(1, m + 1):
                if best < math.inf:
                    break
                for walk in itertools.product(range(len(rg.facets)), repeat=length - 1):
                    closed = (0,) + walk + (0,)
                    if any(b not in adj[a] for a, b in zip(closed, closed[1:])):
                        continue
                    facets = [rg.facets[i] for i in closed]
                    if loop_parity_oracle(K, facets[:-1]) == 1:
                        best = length
                        break
            z, _ = local_Z(K, rg.facets[0])
            assert z == best

    def test_not_a_top_cube(self):
        with pytest.raises(ValidationError):
            local_Z(square_ring(4), [1, 2, 3, 4])


class TestCurvature:
    def test_flat_skeleton(self):
        report = curvature_CC(cube_skeleton(4, 2))
        assert report.cc == 0 and report.z_chain == math.inf

    @pytest.mark.parametrize("m", [5, 7])
    def test_odd_rings(self, m):
        report = curvature_CC(square_ring(m))
        assert report.cc.numerator == 1 and report.cc.denominator == m
        assert report.witness_cube_count == m
        # witness is a genuine odd closed chain
        assert loop_parity_oracle(square_ring(m), report.witness[:-1]) == 1

    def test_json_shape(self):
        data = curvature_CC(square_ring(4, True)).as_json()
        assert data["I"] == 1 and data["Z_chain"] == 4 and data["CC"] == "1/4"


class TestSubcomplexZ:
    def test_ring5_exact(self):
        assert subcomplex_Z(square_ring(5)) == 5

    def test_even_ring_has_no_odd_subcomplex(self):
        assert subcomplex_Z(square_ring(6)) == math.inf

    def test_flat_skeleton(self):
        assert subcomplex_Z(cube_skeleton(3, 2)) == math.inf

    def test_size_guard(self):
        with pytest.raises(SizeLimitError):
            subcomplex_Z(cube_skeleton(5, 2))

    @pytest.mark.parametrize("m,twist", [(3, False), (4, False), (5, False), (4, True), (5, True)])
    def test_consistency_with_chain_version(self, m, twist):
        K = square_ring(m, twist)
        exact = subcomplex_Z(K)
        report = curvature_CC(K)
        assert (invariant_I(K) == 0) == (exact == math.inf) == (report.z_chain == math.inf)
        if exact != math.inf:
            assert exact <= report.z_chain


class TestEmbedObstruction:
    def test_odd_ring_into_lattice_skeleton(self):
        report = embed_obstruction(square_ring(5), cube_skeleton(6, 2))
        assert report.verdict == "obstructed"

    def test_actual_embedding_is_inconclusive(self):
        report = embed_obstruction(cube_skeleton(3, 2), cube_skeleton(4, 2))
        assert report.verdict == "inconclusive"

    def test_flat_into_curved_is_inconclusive(self):
        report = embed_obstruction(square_ring(6), square_ring(5))
        assert report.verdict == "inconclusive"

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            embed_obstruction(path_complex(3), square_ring(4))


def square_embed(K, corners):
    """Identify one ring square with the bottom facet of the 3-cube."""
    c = K.top_cube(corners)
    return {c.corners[0]: 0, c.corners[1]: 1, c.corners[2]: 2, c.corners[3]: 3}


class TestBubbleMove:
    def test_path_edge_replaced_by_three(self):
        P = path_complex(4)
        e = P.top_cube([2, 3])
        out = bubble_move(P, [e.corners], {e.corners[0]: 0, e.corners[1]: 1})
        assert len(out.cubes) == len(P.cubes) + 2
        assert invariant_I(out) == invariant_I(P) == 0

    def test_ring5_square_replaced_by_five(self):
        K = square_ring(5)
        corners = K.top_cube(["a0", "a1", "b0", "b1"]).corners
        out = bubble_move(K, [corners], square_embed(K, corners))
        assert len(out.cubes) == 9
        assert invariant_I(out) == 1

    def test_inverse_move_restores_invariant(self):
        K = square_ring(5)
        corners = K.top_cube(["a0", "a1", "b0", "b1"]).corners
        embed = square_embed(K, corners)
        out = bubble_move(K, [corners], embed)
        back = {v: k for k, v in embed.items()}
        inverse_embed = {}
        for w in range(8):
            inverse_embed[back.get(w, f"bub{w}")] = w
        bubs = [c.corners for c in out.cubes if set(c.corners) <= set(inverse_embed)]
        restored = bubble_move(out, bubs, inverse_embed)
        assert len(restored.cubes) == 5
        assert invariant_I(restored) == 1

    @pytest.mark.parametrize("m", [4, 5, 6, 7, 8])
    @pytest.mark.parametrize("twist", [False, True])
    def test_invariance_across_rings(self, m, twist):
        K = square_ring(m, twist)
        before = invariant_I(K)
        for idx in (0, len(K.cubes) // 2):
            corners = K.cubes[idx].corners
            out = bubble_move(K, [corners], square_embed(K, corners))
            assert invariant_I(out) == before

    def test_rejects_non_injective_embed(self):
        K = square_ring(4)
        corners = K.cubes[0].corners
        bad = square_embed(K, corners)
        bad[corners[1]] = bad[corners[0]]
        with pytest.raises(ValidationError):
            bubble_move(K, [corners], bad)

    def test_rejects_wrong_domain(self):
        K = square_ring(4)
        corners = K.cubes[0].corners
        embed = square_embed(K, corners)
        embed["a3"] = 7
        with pytest.raises(ValidationError):
            bubble_move(K, [corners], embed)

    def test_rejects_non_facet_image(self):
        K = square_ring(4)
        corners = K.cubes[0].corners
        # image vertices do not span a facet of the boundary cube
        bad = {corners[0]: 0, corners[1]: 1, corners[2]: 2, corners[3]: 7}
        with pytest.raises(ValidationError):
            bubble_move(K, [corners], bad)
