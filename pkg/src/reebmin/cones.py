"""Rational polyhedral moment cones and their toric topology.

A cone is stored by its inward facet normals {v_a}: the moment cone is
C* = {y : <y, v_a> >= 0 for all a}, and its dual C is the fan of the
associated affine toric variety.  All geometry here is exact: ray
enumeration, redundancy elimination and the Gorenstein basis change run
on integers and Fractions only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from . import latcore
from .errors import (
    NonPrimitive,
    NotQGorenstein,
    NotSimplyConnected,
    NotStrictlyConvex,
    RedundantNormal,
    WrongDimension,
)
from .latcore import dot, matvec


@dataclass(frozen=True)
class MomentCone:
    """Strictly convex rational polyhedral cone given by primitive inward normals."""

    n: int
    normals: tuple[tuple[int, ...], ...]

    @property
    def d(self) -> int:
        return len(self.normals)

    def to_dict(self) -> dict:
        return {"n": self.n, "normals": [list(v) for v in self.normals]}

    @staticmethod
    def from_dict(data: dict) -> "MomentCone":
        return validate_cone(data["normals"])


@dataclass(frozen=True)
class GorensteinCone:
    """A moment cone together with a basis in which every normal is (ell, w_a)."""

    base: MomentCone
    ell: int
    covector: tuple[int, ...]
    basis_change: tuple[tuple[int, ...], ...]
    cone: MomentCone  # base transformed so normals read (ell, w_a)

    @property
    def is_gorenstein(self) -> bool:
        return self.ell == 1


@dataclass(frozen=True)
class ToricTopology:
    pi1_invariants: tuple[int, ...]  # nontrivial torsion coefficients
    pi2_rank: int

    @property
    def simply_connected(self) -> bool:
        return not self.pi1_invariants


@dataclass(frozen=True)
class SmaleType:
    k: int
    label: str


def _extreme_rays_pointed(ineqs, n):
    """Extreme rays of {y : <y, w> >= 0 for w in ineqs} for rank-n ineqs.

    Enumerates (n-1)-subsets of the inequality normals, takes the primitive
    kernel vector of each rank-(n-1) subset, and keeps it if one orientation
    satisfies every inequality.  Valid whenever the cone is pointed, which
    rank(ineqs) = n guarantees.
    """
    ineqs = [tuple(w) for w in ineqs]
    rays = set()
    for subset in itertools.combinations(range(len(ineqs)), n - 1):
        rows = [list(ineqs[i]) for i in subset]
        ker = latcore.integer_kernel(rows, ncols=n)
        if len(ker) != 1:
            continue
        z = tuple(ker[0])
        pairings = [dot(z, w) for w in ineqs]
        if all(p >= 0 for p in pairings):
            rays.add(z)
        elif all(p <= 0 for p in pairings):
            rays.add(tuple(-x for x in z))
    return tuple(sorted(rays))


def _is_redundant(normals, a):
    """Exact test whether inequality a is implied by the others."""
    others = [list(v) for i, v in enumerate(normals) if i != a]
    va = list(normals[a])
    n = len(va)
    lineality = latcore.integer_kernel(others, ncols=n)
    if any(dot(k, va) != 0 for k in lineality):
        return False
    if lineality:
        # everything is orthogonal to the lineality space; restrict to its
        # integral complement, where the relaxed cone is pointed
        basis = latcore.integer_kernel(lineality, ncols=n)
        others = [matvec(basis, w) for w in others]
        va = matvec(basis, va)
        n = len(basis)
    rays = _extreme_rays_pointed(others, n)
    return all(dot(r, va) >= 0 for r in rays)


def validate_cone(normals) -> MomentCone:
    """Check and wrap a set of inward normals.

    Raises NonPrimitive for a zero or imprimitive normal, NotStrictlyConvex
    when the cut-out cone contains a line or has empty interior, and
    RedundantNormal when some inequality does not carve a facet.
    """
    vs = [tuple(int(x) for x in v) for v in normals]
    if not vs:
        raise NotStrictlyConvex("no normals given")
    n = len(vs[0])
    if any(len(v) != n for v in vs):
        raise ValueError("normals of mixed dimension")
    for i, v in enumerate(vs):
        if not latcore.is_primitive(v):
            raise NonPrimitive(i)
    if latcore.rank([list(v) for v in vs]) < n:
        raise NotStrictlyConvex("normals do not span; the cone contains a line")
    rays = _extreme_rays_pointed(vs, n)
    if not rays or latcore.rank([list(r) for r in rays]) < n:
        raise NotStrictlyConvex("empty interior: the cone is not full-dimensional")
    for i in range(len(vs)):
        if vs.index(vs[i]) != i or _is_redundant(vs, i):
            raise RedundantNormal(i)
    return MomentCone(n=n, normals=tuple(vs))


@lru_cache(maxsize=None)
def extreme_rays(cone: MomentCone) -> tuple[tuple[int, ...], ...]:
    """Primitive extreme rays of the moment cone C* itself."""
    return _extreme_rays_pointed(cone.normals, cone.n)


def dual_cone(cone: MomentCone) -> tuple[tuple[int, ...], ...]:
    """Primitive generating rays of the dual cone C = {xi : <y, xi> >= 0 on C*}.

    Computed honestly from the generator description of C*, so for a valid
    minimal cone this recovers the normal set (sorted).
    """
    return _extreme_rays_pointed(extreme_rays(cone), cone.n)


def interior_point(cone: MomentCone) -> tuple[int, ...]:
    """An integral point strictly inside C* (the sum of its extreme rays)."""
    rays = extreme_rays(cone)
    return tuple(sum(r[i] for r in rays) for i in range(cone.n))


@lru_cache(maxsize=None)
def triangulation(cone: MomentCone) -> tuple[tuple[int, ...], ...]:
    """Simplicial decomposition of C* on its extreme rays.

    Returns n-tuples of ray indices (into extreme_rays) whose simplicial
    subcones cover C* with disjoint interiors; the pulling triangulation
    with the lexicographically first ray as apex at every level.
    """
    rays = extreme_rays(cone)
    normals = cone.normals

    def face_facets(face, k):
        found = set()
        for v in normals:
            sub = tuple(j for j in face if dot(rays[j], v) == 0)
            if sub and sub != face and latcore.rank([list(rays[j]) for j in sub]) == k - 1:
                found.add(sub)
        return found

    def rec(face, k):
        if len(face) == k:
            return [face]
        apex = face[0]
        pieces = []
        for facet in sorted(face_facets(face, k)):
            if apex in facet:
                continue
            for simplex in rec(facet, k - 1):
                pieces.append((apex,) + simplex)
        return pieces

    return tuple(rec(tuple(range(len(rays))), cone.n))


def gorenstein_normalize(cone: MomentCone) -> GorensteinCone:
    """Find the basis in which every normal has first coordinate ell >= 1.

    Solves exactly for the primitive integer covector u with <u, v_a> = ell
    common and minimal positive, then completes u to a unimodular basis
    change.  Raises NotQGorenstein if the normals lie on no common affine
    hyperplane of that kind.
    """
    vs = cone.normals
    n = cone.n
    diffs = [[v[i] - vs[0][i] for i in range(n)] for v in vs[1:]]
    kernel = latcore.integer_kernel(diffs, ncols=n) if diffs else latcore.identity(n)
    if not kernel:
        raise NotQGorenstein("normals lie on no common hyperplane <u, .> = ell")
    heights = [dot(k, vs[0]) for k in kernel]
    if all(h == 0 for h in heights):
        raise NotQGorenstein("every admissible covector annihilates the normals")
    # Bezout-combine kernel vectors to reach the minimal positive height
    g, coeffs = heights[0], [1] + [0] * (len(kernel) - 1)
    for j in range(1, len(kernel)):
        g, x, y = latcore.xgcd(g, heights[j])
        coeffs = [x * c for c in coeffs]
        coeffs[j] += y
    u = tuple(sum(c * k[i] for c, k in zip(coeffs, kernel)) for i in range(n))
    if dot(u, vs[0]) < 0:
        u = tuple(-x for x in u)
        g = -g
    ell = dot(u, vs[0])
    assert ell == abs(g) >= 1
    T = latcore.unimodular_completion(u)
    new_normals = tuple(tuple(matvec(T, list(v))) for v in vs)
    assert all(v[0] == ell for v in new_normals)
    return GorensteinCone(
        base=cone,
        ell=ell,
        covector=u,
        basis_change=tuple(tuple(row) for row in T),
        cone=MomentCone(n=n, normals=new_normals),
    )


def topology(cone: MomentCone) -> ToricTopology:
    """pi_1 torsion and pi_2 rank of the associated toric Sasakian manifold.

    pi_1 is the quotient of Z^n by the span of the normals, read off the
    Smith form; pi_2 has rank d - n.
    """
    factors = latcore.invariant_factors([list(v) for v in cone.normals])
    return ToricTopology(
        pi1_invariants=tuple(f for f in factors if f != 1),
        pi2_rank=cone.d - cone.n,
    )


def smale_type(cone: MomentCone) -> SmaleType:
    """Diffeomorphism label #k(S^2 x S^3) of a simply-connected 5-manifold."""
    if cone.n != 3:
        raise WrongDimension(f"need n = 3, got n = {cone.n}")
    top = topology(cone)
    if not top.simply_connected:
        raise NotSimplyConnected(f"pi1 invariants {top.pi1_invariants}")
    k = cone.d - 3
    return SmaleType(k=k, label="S^5" if k == 0 else f"#{k}(S^2xS^3)")


def flat_cone(n: int) -> MomentCone:
    """The flat C^n model cone in its standard height-1 basis.

    Normals are (1, 0, ..., 0) and (1, e_i); the link is the round sphere
    S^(2n-1) and the critical Reeb vector is (n, 1, ..., 1).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return validate_cone([(1,)])
    normals = [tuple([1] + [0] * (n - 1))]
    for i in range(1, n):
        v = [1] + [0] * (n - 1)
        v[i] = 1
        normals.append(tuple(v))
    return validate_cone(normals)


def conifold_cone() -> MomentCone:
    """The quadric (conifold) cone in its height-1 basis."""
    return validate_cone([(1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1)])


def unimodular_match(vectors_a, vectors_b):
    """Search for a unimodular T mapping one vector set bijectively onto another.

    Returns T as a list of rows, or None.  Brute force over images of a
    maximal independent subset; fine at the handful-of-rays scale used here.
    """
    A = [tuple(v) for v in vectors_a]
    B = [tuple(v) for v in vectors_b]
    if len(A) != len(B) or not A:
        return None
    n = len(A[0])
    picked = []
    for v in A:
        if latcore.rank([list(u) for u in picked + [v]]) > len(picked):
            picked.append(v)
        if len(picked) == n:
            break
    if len(picked) < n:
        return None
    a_cols = latcore.transpose([list(v) for v in picked])
    a_inv = latcore.rational_inverse(a_cols)
    for image in itertools.permutations(B, n):
        b_cols = latcore.transpose([list(v) for v in image])
        T = latcore.matmul(b_cols, a_inv)
        if any(x.denominator != 1 for row in T for x in row):
            continue
        T = [[int(x) for x in row] for row in T]
        if abs(latcore.int_det(T)) != 1:
            continue
        if sorted(tuple(matvec(T, list(v))) for v in A) == sorted(B):
            return T
    return None
