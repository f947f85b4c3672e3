import sympy
from hypothesis import given, settings, strategies as st

from dpdescent.linalg import (
    det_bareiss,
    identity,
    integer_kernel,
    inverse_unimodular,
    kernel_with_coords,
    matmul,
    matvec,
    quotient_invariants,
    row_hnf,
    snf,
    snf_diagonal,
)


def matrices(max_rows=5, max_cols=5, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def det(A):
    return int(sympy.Matrix(A).det())


def test_snf_examples():
    assert snf_diagonal(identity(3)) == [1, 1, 1]
    assert snf_diagonal([[2, 0], [0, 4]]) == [2, 4]
    assert snf_diagonal([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]


@given(matrices())
def test_snf_witnesses(A):
    D, U, V = snf(A)
    assert matmul(matmul(U, A), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(x >= 0 for x in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]) if a)
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)


@given(matrices(4, 4))
def test_snf_matches_sympy_determinantal_divisors(A):
    # product of the invariant factors equals |det| for square input
    if len(A) != len(A[0]):
        return
    prod = 1
    for x in snf_diagonal(A):
        prod *= x
    assert prod == abs(det(A))


@given(matrices(5, 5))
def test_hnf_spans_same_lattice(A):
    n = len(A[0])
    H = row_hnf(A, n)
    # same row lattice: each side's rows are integer combinations of the other's
    t1, f1 = quotient_invariants(n, A)
    t2, f2 = quotient_invariants(n, H)
    assert (t1, f1) == (t2, f2)
    assert quotient_invariants(n, A + H) == (t1, f1)
    pivots = [next(j for j, x in enumerate(r) if x) for r in H]
    assert pivots == sorted(set(pivots))
    assert all(H[i][p] > 0 for i, p in enumerate(pivots))


@given(matrices(4, 6))
def test_kernel_is_saturated_basis(A):
    n = len(A[0])
    K = integer_kernel(A, n)
    for v in K:
        assert all(x == 0 for x in matvec(A, v))
    assert len(K) == n - sympy.Matrix(A).rank()
    if K:
        torsion, _ = quotient_invariants(n, K)
        assert torsion == []


@given(matrices(4, 6))
def test_kernel_coordinates(A):
    n = len(A[0])
    K, P = kernel_with_coords(A, n)
    z = len(K[0]) if K and K[0] else 0
    if z == 0:
        return
    # P maps a kernel vector to its coordinates in the columns of K
    for j in range(z):
        col = [K[i][j] for i in range(n)]
        assert matvec(P, col) == [1 if k == j else 0 for k in range(z)]


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_unimodular(A):
    _, _, V = snf(A)
    assert matmul(V, inverse_unimodular(V)) == identity(3)


@settings(max_examples=200)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_sympy(A):
    assert det_bareiss(A) == det(A)
