"""Exact linear algebra over Q and Z.

Matrices are lists of rows; entries are ``Fraction`` (rational routines) or
``int`` (integer routines).  Nothing here mutates its arguments.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]
Vector = List[Fraction]


def as_fraction_matrix(M: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in M]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence]) -> list:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    Bt = transpose(B)
    if not Bt:
        return [[] for _ in A]
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def vecmat(v: Sequence, A: Sequence[Sequence]) -> list:
    if not A:
        return []
    return [sum((x * A[i][j] for i, x in enumerate(v)), Fraction(0)) for j in range(len(A[0]))]


def matpow(A: Sequence[Sequence], k: int) -> Matrix:
    R = identity(len(A))
    for _ in range(k):
        R = matmul(R, A)
    return R


def is_zero_matrix(M: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in M for x in row)


def rref(M: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    R = as_fraction_matrix(M)
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        prow = R[r]
        inv = 1 / prow[c]
        # entries left of c vanish in rows >= r
        nz = [j for j in range(c, cols) if prow[j]]
        for j in nz:
            prow[j] *= inv
        for i in range(rows):
            row = R[i]
            if i != r and row[c]:
                f = row[c]
                for j in nz:
                    row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def nullspace(M: Sequence[Sequence], ncols: Optional[int] = None) -> List[Vector]:
    """Basis of {v : M v = 0}; ``ncols`` is needed when M has no rows."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, pivots = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def span_basis(vectors: Sequence[Sequence]) -> List[Vector]:
    """Canonical (reduced echelon) basis of the span of ``vectors``."""
    vectors = [v for v in vectors]
    if not vectors:
        return []
    R, pivots = rref(vectors)
    return [R[i] for i in range(len(pivots))]


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if all(x == 0 for x in v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [list(v)]) == rank(basis)


def same_span(U: Sequence[Sequence], W: Sequence[Sequence]) -> bool:
    return span_basis(U) == span_basis(W)


def subspace_sum(U: Sequence[Sequence], W: Sequence[Sequence]) -> List[Vector]:
    return span_basis(list(U) + list(W))


def intersect(U: Sequence[Sequence], W: Sequence[Sequence]) -> List[Vector]:
    """Intersection of two subspaces given by spanning row vectors."""
    U = span_basis(U)
    W = span_basis(W)
    if not U or not W:
        return []
    # solve sum x_i u_i = sum y_j w_j
    cols = [list(u) for u in U] + [[-x for x in w] for w in W]
    M = transpose(cols)
    out = []
    for sol in nullspace(M):
        x = sol[: len(U)]
        out.append([sum((xi * u[k] for xi, u in zip(x, U)), Fraction(0)) for k in range(len(U[0]))])
    return span_basis(out)


def complement_in(sub: Sequence[Sequence], ambient: Sequence[Sequence]) -> List[Vector]:
    """Vectors from ``ambient`` extending a basis of ``sub`` to a basis of their sum.

    Vectors are taken greedily in the given order, so the choice is
    deterministic.
    """
    current = span_basis(sub)
    r = len(current)
    chosen: List[Vector] = []
    for v in ambient:
        trial = current + [list(v)]
        if rank(trial) > r:
            current = trial
            r += 1
            chosen.append([Fraction(x) for x in v])
    return chosen


def solve(M: Sequence[Sequence], b: Sequence) -> Optional[Vector]:
    """One solution of M x = b, or None."""
    rows = len(M)
    if rows == 0:
        return None
    n = len(M[0])
    aug = [list(M[i]) + [b[i]] for i in range(rows)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = R[i][n]
    return x


def coordinates(v: Sequence, basis: Sequence[Sequence]) -> Optional[Vector]:
    """Coefficients of ``v`` in terms of linearly independent ``basis``."""
    if not basis:
        return [] if all(x == 0 for x in v) else None
    return solve(transpose(basis), v)


def det(M: Sequence[Sequence]) -> Fraction:
    A = as_fraction_matrix(M)
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] / A[c][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return d


def inverse(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    aug = [list(M[i]) + identity(n)[i] for i in range(n)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


# ---------------------------------------------------------------------------
# integer routines


def smith_normal_form(M: Sequence[Sequence[int]]) -> Tuple[list, list, list]:
    """Return (U, D, V) with U @ M @ V == D, U and V unimodular.

    D is diagonal with nonnegative entries d_1 | d_2 | ... .
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row_dst += f * row_src
        A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for row in A:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j] != 0]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t] != 0:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j] != 0:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: d_t must divide every remaining entry
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t] != 0), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V


def integer_inverse(M: Sequence[Sequence[int]]) -> list:
    """Inverse of a unimodular integer matrix."""
    inv = inverse(M)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def integer_solve(M: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[List[int]]:
    """Integer solution x of x @ M == b (row-vector convention), or None."""
    U, D, V = smith_normal_form(M)
    # x M = b  <=>  (x U^{-1}) D = b V
    bv = [sum(b[i] * V[i][j] for i in range(len(b))) for j in range(len(V[0]))] if V else []
    m = len(M)
    y = [0] * m
    for j, val in enumerate(bv):
        d = D[j][j] if j < m else 0
        if d == 0:
            if val != 0:
                return None
            continue
        if val % d:
            return None
        y[j] = val // d
    return [sum(y[i] * U[i][k] for i in range(m)) for k in range(m)]


def primitive(v: Sequence[int]) -> List[int]:
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return [int(x) for x in v]
    return [int(x) // g for x in v]


def clear_denominators(v: Sequence[Fraction]) -> List[int]:
    """Smallest positive rescaling of a rational vector to a primitive integer vector."""
    from math import lcm

    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    return primitive([int(Fraction(x) * den) for x in v])
