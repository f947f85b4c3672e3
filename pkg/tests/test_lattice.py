import itertools

import pytest
from hypothesis import given, strategies as st

from dpdescent.errors import ValidationError
from dpdescent.lattice import (
    DivClass,
    PicLattice,
    class_name,
    conic_classes,
    distinguished_classes,
    exceptional_classes,
    pair,
    parse_class,
    plane_classes,
    root_classes,
    self_intersection,
    sum_exceptional,
)

LINE_COUNTS = {1: 240, 2: 56, 3: 27, 4: 16, 5: 10, 6: 6, 7: 3, 8: 1, 9: 0}
ROOT_COUNTS = {1: 240, 2: 126, 3: 72, 4: 40, 5: 20, 6: 8, 7: 2, 8: 0, 9: 0}
CONIC_COUNTS = {1: 2160, 2: 126, 3: 27, 4: 10, 5: 5, 6: 3, 7: 2, 8: 1, 9: 0}

degrees = st.integers(min_value=1, max_value=9)


def brute_force_lines(d):
    """Classes aH - sum b_i E_i with c^2 = -1, K.c = -1, searching a <= 6."""
    n = 9 - d
    out = []
    for a in range(7):
        for b in itertools.product(range(-1, a + 1), repeat=n):
            if a * a - sum(x * x for x in b) == -1 and 3 * a - sum(b) == 1:
                out.append((a,) + tuple(-x for x in b))
    return sorted(out)


def test_gram_and_canonical():
    L = PicLattice(6)
    assert L.rank == 4
    assert self_intersection(L, L.canonical) == 6
    assert pair(L, L.h(), L.h()) == 1
    assert pair(L, L.e(1), L.e(1)) == -1
    assert pair(L, L.cls("H-E1-E2"), L.e(1)) == 1
    P = PicLattice(8, "product")
    assert P.gram == ((0, 1), (1, 0))
    assert self_intersection(P, P.canonical) == 8
    assert PicLattice(9).canonical == DivClass([-3])


@pytest.mark.parametrize("bad", [(0, "blowup"), (10, "blowup"), (7, "product"), (5, "cone")])
def test_rejects_bad_lattice(bad):
    with pytest.raises(ValidationError):
        PicLattice(*bad)


@pytest.mark.parametrize("d", range(3, 10))
def test_lines_match_brute_force(d):
    got = sorted(c.coeffs for c in exceptional_classes(PicLattice(d)))
    assert got == brute_force_lines(d)


@pytest.mark.parametrize("d", range(1, 10))
def test_family_counts(d):
    L = PicLattice(d)
    assert len(exceptional_classes(L)) == LINE_COUNTS[d]
    assert len(root_classes(L)) == ROOT_COUNTS[d]
    assert len(conic_classes(L)) == CONIC_COUNTS[d]


def test_product_families():
    P = PicLattice(8, "product")
    assert exceptional_classes(P) == ()
    assert sum_exceptional(P) == DivClass([0, 0])
    assert {class_name(P, c) for c in conic_classes(P)} == {"L1", "L2"}


def test_plane_classes_degree_6():
    L = PicLattice(6)
    names = {class_name(L, c) for c in plane_classes(L)}
    assert names == {"H", "2H-E1-E2-E3"}


@given(degrees)
def test_family_invariants(d):
    L = PicLattice(d)
    K = L.canonical
    for c in exceptional_classes(L):
        assert self_intersection(L, c) == -1 and pair(L, c, K) == -1
    for c in root_classes(L):
        assert self_intersection(L, c) == -2 and pair(L, c, K) == 0
    for c in conic_classes(L):
        assert self_intersection(L, c) == 0 and pair(L, c, K) == -2
    fam = distinguished_classes(L)
    assert list(fam) == sorted(fam, key=lambda c: c.sort_key())
    assert len(set(fam)) == len(fam)


@given(st.integers(min_value=1, max_value=6))
def test_sum_of_lines_is_multiple_of_anticanonical(d):
    # W fixes only multiples of K when d <= 6, and -K.line = 1
    L = PicLattice(d)
    n = LINE_COUNTS[d]
    assert n % d == 0
    assert sum_exceptional(L) == (n // d) * L.anticanonical


def test_sum_of_lines_large_degree():
    assert class_name(PicLattice(7), sum_exceptional(PicLattice(7))) == "H"
    assert class_name(PicLattice(8), sum_exceptional(PicLattice(8))) == "E1"
    assert sum_exceptional(PicLattice(9)) == DivClass([0])


@given(degrees, st.data())
def test_name_round_trip(d, data):
    L = PicLattice(d)
    coeffs = data.draw(st.lists(st.integers(-9, 9), min_size=L.rank, max_size=L.rank))
    c = DivClass(coeffs)
    assert parse_class(L, class_name(L, c)) == c


def test_parse_rejects_unknown_label():
    with pytest.raises(ValidationError):
        parse_class(PicLattice(6), "H-E7")


@pytest.mark.parametrize("d", range(1, 9))
def test_incidence_counts_non_negative(d):
    L = PicLattice(d)
    s = sum_exceptional(L)
    assert all(pair(L, c, s - c) >= 0 for c in exceptional_classes(L))


def test_degree_6_hexagon():
    L = PicLattice(6)
    cycle = ["E1", "H-E1-E3", "E3", "H-E2-E3", "E2", "H-E1-E2"]  # E1, E2', E3, E1', E2, E3'
    lines = [L.cls(n) for n in cycle]
    assert set(lines) == set(exceptional_classes(L))
    for i, a in enumerate(lines):
        for j, b in enumerate(lines):
            adjacent = (i - j) % 6 in (1, 5)
            assert (pair(L, a, b) == 1) == adjacent


def test_degree_5_intersection_graph_is_petersen():
    L = PicLattice(5)
    lines = exceptional_classes(L)
    meets = {(a, b) for a in lines for b in lines if a != b and pair(L, a, b) == 1}
    assert all(pair(L, a, b) in (0, 1) for a in lines for b in lines if a != b)
    assert [sum(1 for b in lines if (a, b) in meets) for a in lines] == [3] * 10
    assert len(meets) // 2 == 15
    # girth 5: no triangles and no 4-cycles
    for a in lines:
        nbrs = [b for b in lines if (a, b) in meets]
        assert not any((x, y) in meets for x in nbrs for y in nbrs)
        for c in lines:
            if c != a and (a, c) not in meets:
                assert sum(1 for x in nbrs if (x, c) in meets) == 1


def test_no_exotic_minus_one_classes_in_degree_4():
    # every class with c.c = c.K = -1 is a line, so "invariant (-1)-class" means "fixed line"
    from dpdescent.lattice import _bounded_solutions

    L = PicLattice(4)
    found = sorted(_bounded_solutions(L.n_points, -1, -1))
    assert found == sorted(c.coeffs for c in exceptional_classes(L))
