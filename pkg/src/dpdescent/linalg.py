"""Exact integer linear algebra on lists of Python ints.

Matrices are lists of rows.  Everything here is arbitrary precision; no
modular shortcuts.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def as_matrix(A) -> Matrix:
    return [[int(x) for x in row] for row in A]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    Bt = list(zip(*B)) if B else []
    if len(A[0]) != len(B):
        raise ValueError(f"shape mismatch: {len(A)}x{len(A[0])} times {len(B)}x?")
    if not Bt:
        return [[] for _ in A]
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in A]


def transpose(A: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def snf(A: Sequence[Sequence[int]]):
    """Smith normal form with unimodular witnesses.

    Returns ``(D, U, V)`` with ``U * A * V == D``, ``D`` diagonal (rectangular),
    non-negative diagonal entries each dividing the next, and ``U``, ``V``
    unimodular.
    """
    D = as_matrix(A)
    m = len(D)
    n = len(D[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for row in D:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            # pivot: smallest nonzero absolute value in the trailing block
            best = None
            for i in range(t, m):
                row = D[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                return _finish(D, U, V)
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        done = False
            if not done:
                continue
            # divisibility of the remaining block by the pivot
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return _finish(D, U, V)


def _finish(D, U, V):
    m = len(D)
    n = len(D[0]) if m else 0
    for t in range(min(m, n)):
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return D, U, V


def snf_diagonal(A) -> list[int]:
    D, _, _ = snf(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def row_hnf(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Row-style Hermite normal form of the row lattice (zero rows dropped).

    Pivots are positive, entries above a pivot are reduced into ``[0, pivot)``.
    The result is unique for a given row lattice.
    """
    basis: dict[int, list[int]] = {}  # pivot column -> row
    for r in rows:
        v = [int(x) for x in r]
        if len(v) != ncols:
            raise ValueError("row length mismatch")
        _insert(basis, v)
    out = [basis[c] for c in sorted(basis)]
    for i, row in enumerate(out):
        c = _lead(row)
        for k in range(i):
            q = out[k][c] // row[c]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], row)]
    return out


def _lead(v):
    for j, x in enumerate(v):
        if x:
            return j
    return None


def _insert(basis: dict[int, list[int]], v: list[int]) -> None:
    while True:
        c = _lead(v)
        if c is None:
            return
        if v[c] < 0:
            v = [-x for x in v]
        if c not in basis:
            basis[c] = v
            return
        b = basis[c]
        # extended gcd step on the pivot column
        while v[c]:
            q = b[c] // v[c]
            b, v = v, [x - q * y for x, y in zip(b, v)]
        if b[c] < 0:
            b = [-x for x in b]
        basis[c] = b


class LatticeReducer:
    """Incremental row-HNF accumulator; cheap to feed many redundant rows."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._basis: dict[int, list[int]] = {}
        self._seen: set[tuple[int, ...]] = set()

    def add(self, row: Sequence[int]) -> None:
        t = tuple(int(x) for x in row)
        if t in self._seen or not any(t):
            return
        self._seen.add(t)
        _insert(self._basis, list(t))

    def rows(self) -> Matrix:
        return row_hnf(list(self._basis.values()), self.ncols)


def kernel_with_coords(A: Sequence[Sequence[int]], ncols: int):
    """Saturated integer kernel of ``A`` (acting on column vectors of length ``ncols``).

    Returns ``(K, P)`` where the columns of ``K`` (an ``ncols x z`` matrix, as a list
    of rows) form a Z-basis of ``{x : A x = 0}`` and ``P`` (``z x ncols``) maps
    any kernel vector to its coordinates in that basis.
    """
    rows = row_hnf(A, ncols) if A else []
    # HNF rows are independent, so rank = len(rows); U rows V = D puts the
    # kernel in the trailing columns of V
    rank = len(rows)
    _, _, V = snf(rows) if rank else (None, None, identity(ncols))
    Vinv = inverse_unimodular(V)
    K = [row[rank:] for row in V]
    P = Vinv[rank:]
    return K, P


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis vectors (as rows) of the saturated kernel, in row-HNF."""
    K, _ = kernel_with_coords(A, ncols)
    return row_hnf(transpose(K, ncols) if K and K[0] else [], ncols)


def inverse_unimodular(V: Sequence[Sequence[int]]) -> Matrix:
    """Exact inverse of a unimodular integer matrix (Gauss-Jordan over Z)."""
    n = len(V)
    M = [list(map(int, V[i])) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for c in range(n):
        # bring a unit pivot into place via gcd row operations
        for i in range(c + 1, n):
            while M[i][c]:
                q = M[c][c] // M[i][c]
                M[c] = [a - q * b for a, b in zip(M[c], M[i])]
                M[c], M[i] = M[i], M[c]
        if M[c][c] not in (1, -1):
            raise ValueError("matrix is not unimodular")
        if M[c][c] == -1:
            M[c] = [-x for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                q = M[i][c]
                M[i] = [a - q * b for a, b in zip(M[i], M[c])]
    return [row[n:] for row in M]


def quotient_invariants(ambient_rank: int, relations: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Structure of ``Z^ambient_rank / span(relations)``.

    Returns ``(torsion, free_rank)`` with ``torsion`` the invariant factors ``>= 2``.
    """
    if not relations:
        return [], ambient_rank
    if len(relations) > 2 * ambient_rank:
        red = LatticeReducer(ambient_rank)
        for r in relations:
            red.add(r)
        relations = red.rows()
        if not relations:
            return [], ambient_rank
    diag = snf_diagonal(transpose(relations, ambient_rank))
    torsion = [d for d in diag if d > 1]
    free = ambient_rank - sum(1 for d in diag if d != 0)
    return torsion, free


def det_bareiss(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    M = as_matrix(A)
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]
