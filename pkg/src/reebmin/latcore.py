"""Exact integer and rational linear algebra on small dense matrices.

Matrices are plain lists of lists of Python ints (arbitrary precision),
vectors are lists or tuples of ints.  Nothing here ever rounds: every
operation on an exact path stays in ZZ or QQ.  Sizes are desk-scale
(at most a dozen rows/columns), so the classical algorithms are used
throughout; no modular or sparse tricks.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import RankError

IntMatrix = Sequence[Sequence[int]]
IntVector = Sequence[int]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, x, y) with g = a*x + b*y and g >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def vec_gcd(v: IntVector) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def is_primitive(v: IntVector) -> bool:
    return vec_gcd(v) == 1


def primitivize(v: IntVector) -> tuple[int, ...]:
    """Divide out the content; the zero vector is returned unchanged."""
    g = vec_gcd(v)
    if g <= 1:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(M: IntMatrix) -> list[list]:
    return [list(col) for col in zip(*M)]


def matmul(A, B) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, x) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def int_det(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [[int(x) for x in row] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[-1][-1]


def rational_inverse(M: IntMatrix) -> list[list[Fraction]]:
    """Exact inverse over QQ; raises RankError if singular."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            raise RankError("matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def unimodular_inverse(M: IntMatrix) -> list[list[int]]:
    """Inverse of an integer matrix with det = +-1, exact and integral."""
    inv = rational_inverse(M)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise RankError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def smith_normal_form(M: IntMatrix) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form by repeated Bezout pivoting.

    Returns (U, D, V) with U*M*V = D, U and V unimodular, D diagonal with
    non-negative entries satisfying d1 | d2 | ... .  Total function: any
    integer matrix, including zero and non-square ones, is accepted.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    for t in range(min(m, n)):
        while True:
            piv = None
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    a = A[i][j]
                    if a != 0 and (best is None or abs(a) < best):
                        piv, best = (i, j), abs(a)
            if piv is None:
                break
            if piv[0] != t:
                swap_rows(t, piv[0])
            if piv[1] != t:
                swap_cols(t, piv[1])
            if A[t][t] < 0:
                negate_row(t)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = A[i][t] // p
                    if q:
                        add_row(i, t, -q)
                    if A[i][t] != 0:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    q = A[t][j] // p
                    if q:
                        add_col(j, t, -q)
                    if A[t][j] != 0:
                        clean = False
            if not clean:
                continue
            # pivot divides its row and column; pull in any entry of the
            # trailing block it does not divide, so the final diagonal chains
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] == 0:
            break

    D = [[0] * n for _ in range(m)]
    for t in range(min(m, n)):
        D[t][t] = A[t][t]
    return U, D, V


def rank(M: IntMatrix) -> int:
    if not M or not M[0]:
        return 0
    _, D, _ = smith_normal_form(M)
    return sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i] != 0)


def invariant_factors(M: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    if not M or not M[0]:
        return []
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i] != 0]


def hermite_normal_form(M: IntMatrix) -> list[list[int]]:
    """Row-style Hermite normal form with zero rows dropped.

    Pivots are positive, entries above a pivot are reduced into [0, pivot),
    and rows are ordered by pivot column.  The result is the canonical basis
    of the row lattice of M.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[int(x) for x in row] for row in M]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, m):
            while A[i][c] != 0:
                g, x, y = xgcd(A[r][c], A[i][c])
                a, b = A[r][c] // g, A[i][c] // g
                A[r], A[i] = (
                    [x * u + y * v for u, v in zip(A[r], A[i])],
                    [-b * u + a * v for u, v in zip(A[r], A[i])],
                )
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [u - q * v for u, v in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return [row for row in A[:r]]


def integer_kernel(M: IntMatrix, ncols: int | None = None) -> list[list[int]]:
    """Canonical basis of the saturated lattice {x in ZZ^n : M x = 0}.

    The basis is returned as HNF rows; an empty list means the kernel is
    trivial.  Pass ncols for a matrix with no rows.
    """
    m = len(M)
    if m == 0:
        if ncols is None:
            raise ValueError("ncols is required for an empty matrix")
        return identity(ncols)
    n = len(M[0])
    _, D, V = smith_normal_form(M)
    r = sum(1 for i in range(min(m, n)) if D[i][i] != 0)
    basis = [[V[i][j] for i in range(n)] for j in range(r, n)]
    if not basis:
        return []
    return hermite_normal_form(basis)


def gale_dual(charges: IntMatrix, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Fan rays from a quotient charge matrix.

    For a full-row-rank k x d charge matrix Q this returns d vectors
    v_1..v_d in ZZ^(d-k) with sum_a Q[j][a] * v_a = 0 for every row j.
    The construction is deterministic: the kernel basis of Q is put in
    Hermite normal form and its columns are the rays.  A charge matrix
    whose kernel basis has an imprimitive column (possible for charges
    with a forced divisibility, e.g. (2,2,-2,-1)) is rejected since no
    primitive ray choice can then satisfy the relation exactly.
    """
    k = len(charges)
    d = len(charges[0]) if k else ncols
    if d is None:
        raise ValueError("ncols is required for an empty charge matrix")
    if k:
        if rank(charges) != k:
            raise RankError("charge matrix does not have full row rank")
        for a in range(d):
            if all(charges[j][a] == 0 for j in range(k)):
                raise ValueError(f"charge column {a} is zero")
    basis = integer_kernel(charges, ncols=d)
    rays = [tuple(row[a] for row in basis) for a in range(d)]
    for a, v in enumerate(rays):
        if not is_primitive(v):
            raise ValueError(f"gale dual ray {a} = {v} is not primitive")
    return rays


def unimodular_completion(u: IntVector) -> list[list[int]]:
    """Extend a primitive integer covector to a unimodular matrix.

    Returns T with |det T| = 1 whose first row is u, so that the first
    coordinate of T @ v equals <u, v> for every v.
    """
    if not is_primitive(u):
        raise ValueError(f"{tuple(u)} is not primitive")
    n = len(u)
    _, _, V = smith_normal_form([list(u)])
    w = matvec(transpose(V), list(u))  # u as a row times V
    if w[0] == -1:
        for row in V:
            row[0] = -row[0]
        w = matvec(transpose(V), list(u))
    assert w == [1] + [0] * (n - 1)
    T = unimodular_inverse(V)
    assert T[0] == list(u)
    return T
