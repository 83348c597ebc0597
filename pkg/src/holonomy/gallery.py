"""Hand-built example complexes: triangulated bands and glued symmetric pairs.

The two-rail band over a_0..a_{m-1}, b_0..b_{m-1} closes into an annulus,
or with crossed rails at the seam into a Moebius strip.  Around the dual
cycle a Moebius band transports its base triangle by a transposition and
an annulus by a rotation; stellarly subdividing one annulus triangle adds
an interior-vertex fan whose loops are transpositions.

Glueing two copies of a band along the base triangle, with the copies
identified through a transposition pi of that triangle, produces a complex
carrying the copy-swap involution (well defined because pi * pi = id).
With matched choices these reconstruct the glued-Moebius pairs (holonomy
Z_2) and glued-annulus pairs (holonomy S_3) with their invariant triangle.
"""

from __future__ import annotations

from .complexes import build_simplicial
from .errors import ValidationError

SIGMA = ("a0", "a1", "b0")


def _band_facets(m, twist):
    if m < 3:
        raise ValidationError("band needs m >= 3")
    a = [f"a{i}" for i in range(m)]
    b = [f"b{i}" for i in range(m)]
    facets = []
    for i in range(m - 1):
        facets.append((a[i], b[i], a[i + 1]))
        facets.append((b[i], a[i + 1], b[i + 1]))
    if twist:
        facets.append((a[m - 1], b[m - 1], b[0]))
        facets.append((b[m - 1], b[0], a[0]))
    else:
        facets.append((a[m - 1], b[m - 1], a[0]))
        facets.append((b[m - 1], a[0], b[0]))
    return facets


def band(m, twist=False):
    """Triangulated band of 2m triangles; twist=True gives a Moebius strip.
    The base triangle is (a0, a1, b0)."""
    return build_simplicial(_band_facets(m, twist))


def _subdivided_annulus_facets(m):
    facets = _band_facets(m, twist=False)
    j = m // 2
    far = (f"a{j}", f"b{j}", f"a{j+1}")
    facets.remove(far)
    facets += [(far[0], far[1], "c0"), (far[0], far[2], "c0"), (far[1], far[2], "c0")]
    return facets


def loop_transposition(m):
    """The transposition of the base triangle realized by one trip around
    the Moebius band of 2m triangles (depends on m mod 3)."""
    return [
        {"a0": "b0", "b0": "a0"},
        {"a1": "b0", "b0": "a1"},
        {"a0": "a1", "a1": "a0"},
    ][m % 3]


def _glued_pair(facets, pi):
    """Two copies of a complex glued along the base triangle through the
    transposition pi, plus the copy-swap involution."""
    sigma_names = set(SIGMA)

    def qname(v):
        return pi.get(v, v) if v in sigma_names else f"q.{v}"

    def pname(v):
        return v if v in sigma_names else f"p.{v}"

    glued = [tuple(pname(v) for v in f) for f in facets]
    glued += [tuple(qname(v) for v in f) for f in facets]
    X = build_simplicial(glued)
    omega = {}
    for v in X.vertices:
        if v.startswith("p."):
            omega[v] = "q." + v[2:]
        elif v.startswith("q."):
            omega[v] = "p." + v[2:]
        else:
            omega[v] = pi.get(v, v)
    return X, omega, SIGMA


def glued_mobius_pair(m=4):
    """Two Moebius strips sharing the base triangle, glued through the
    band's own loop transposition: the invariant-triangle holonomy is Z_2
    and the copy-swap involution restricts to that transposition.
    m >= 4 keeps the clique number at 3."""
    if m < 4:
        raise ValidationError("needs m >= 4")
    return _glued_pair(_band_facets(m, twist=True), loop_transposition(m))


def glued_annulus_pair(m=4):
    """Two subdivided annuli sharing the base triangle; the fan around the
    subdivision vertex adds transposition loops, so the invariant-triangle
    holonomy is the full symmetric group on its three vertices."""
    if m < 4:
        raise ValidationError("needs m >= 4")
    return _glued_pair(_subdivided_annulus_facets(m), {"a0": "b0", "b0": "a0"})


def caterpillar(n):
    """Path of n triangles, each glued to the previous along an edge: the
    smallest interesting tree-like family."""
    if n < 1:
        raise ValidationError("needs n >= 1")
    return build_simplicial([(j + 1, j + 2, j + 3) for j in range(n)])
