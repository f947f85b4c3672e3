import pytest
from hypothesis import assume, given, settings, strategies as st

from dpdescent.cohomology import (
    CohGroup,
    IntegerRep,
    h1,
    h1_bar,
    h1_cyclic,
    h1_sylow_bound,
    invariant_lattice,
    sylow_subgroup,
)
from dpdescent.errors import FeasibilityError, ValidationError
from dpdescent.lattice import PicLattice, class_name, pair
from dpdescent.weyl import (
    aut_from_class_map,
    conjugate,
    generate_group,
    simple_reflections,
    trivial_group,
    weyl_group,
)


def test_cohgroup_normalisation():
    assert CohGroup.from_orders([2, 3]).invariant_factors == (6,)
    assert CohGroup.from_orders([2, 2, 1, 0]).invariant_factors == (2, 2)
    assert str(CohGroup()) == "0"
    assert str(CohGroup((2, 2))) == "Z/2 x Z/2"
    assert (CohGroup((2,)) + CohGroup((3,))).order == 6
    with pytest.raises(ValidationError):
        CohGroup((2, 3))


def test_sign_action_on_z():
    M = IntegerRep(1, [[[-1]]])
    assert h1(M).invariant_factors == (2,)
    assert h1_bar(M).invariant_factors == (2,)
    assert h1_cyclic([[-1]]).invariant_factors == (2,)


def test_trivial_module_has_no_h1():
    # Hom(G, Z) = 0 for finite G
    M = IntegerRep(2, [[[1, 0], [0, 1]]])
    assert h1(M).is_trivial


def test_permutation_module_has_no_h1():
    # Shapiro: H^1 of an induced module Z[G] vanishes
    swap = [[0, 1], [1, 0]]
    assert h1(IntegerRep(2, [swap])).is_trivial
    assert h1_cyclic(swap).is_trivial


def test_augmentation_kernel():
    # Z/3 on the sum-zero part of Z^3: H^1 = Z/3
    rot = [[0, -1], [1, -1]]
    assert h1(IntegerRep(2, [rot])).invariant_factors == (3,)
    assert h1_bar(IntegerRep(2, [rot])).invariant_factors == (3,)


def test_trivial_gamma_on_picard():
    L = PicLattice(4)
    assert h1(trivial_group(L)).is_trivial
    basis, rho = invariant_lattice(trivial_group(L))
    assert rho == L.rank


def test_product_swap():
    L = PicLattice(8, "product")
    G = generate_group(simple_reflections(L), lattice=L)
    assert h1(G).is_trivial
    basis, rho = invariant_lattice(G)
    assert rho == 1 and [class_name(L, b) for b in basis] == ["L1+L2"]


def test_invariant_basis_is_fixed_and_saturated():
    L = PicLattice(6)
    G = generate_group([aut_from_class_map(L, {"E1": "E2", "E2": "E1"})], lattice=L)
    basis, rho = invariant_lattice(G)
    assert rho == 3
    for b in basis:
        assert all(g(b) == b for g in G.elements)


def test_full_weyl_invariants_are_multiples_of_k():
    for d in (3, 4, 5, 6):
        L = PicLattice(d)
        basis, rho = invariant_lattice(weyl_group(L))
        assert rho == 1
        assert basis[0] in (L.canonical, L.anticanonical)


def random_subgroup(d, rnd, k=2, bound=200):
    L = PicLattice(d)
    W = weyl_group(L)
    try:
        return generate_group([rnd.choice(W.elements) for _ in range(k)], lattice=L, max_order=bound)
    except FeasibilityError:
        assume(False)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 4, 5, 6, 7]), st.randoms(use_true_random=False))
def test_h1_agrees_with_bar_complex(d, rnd):
    G = random_subgroup(d, rnd, rnd.randint(1, 2))
    if G.order > 12:
        return
    assert h1(G) == h1_bar(G, max_order=12)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4, 5, 6]), st.randoms(use_true_random=False))
def test_h1_agrees_with_cyclic_formula(d, rnd):
    G = random_subgroup(d, rnd, 1)
    assert h1(G) == h1_cyclic(G.generators[0])


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 4]), st.randoms(use_true_random=False))
def test_h1_conjugation_invariant(d, rnd):
    G = random_subgroup(d, rnd)
    w = rnd.choice(weyl_group(G.lattice).elements)
    assert h1(G) == h1(conjugate(G, w))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 4]), st.randoms(use_true_random=False))
def test_h1_killed_by_group_order(d, rnd):
    G = random_subgroup(d, rnd)
    assert all(G.order % n == 0 for n in h1(G).invariant_factors)


def test_known_degree_4_h1():
    # Z/2 x Z/2 acting by products of pairs of commuting transpositions-with-conics
    L = PicLattice(4)
    a = aut_from_class_map(L, {"E1": "E2", "E2": "E1", "E3": "E4", "E4": "E3"})
    assert h1(generate_group([a], lattice=L)).is_trivial
    W = weyl_group(L)
    assert h1(W, max_order=None).is_trivial


def test_feasibility_bound():
    with pytest.raises(FeasibilityError):
        h1(weyl_group(PicLattice(3)))


def test_sylow_bound_contains_h1():
    # restriction to a Sylow p-subgroup is injective on the p-part
    W = weyl_group(PicLattice(4))
    exact = h1(W, max_order=None)
    bound = h1_sylow_bound(W, max_order=None)
    assert bound.order % exact.order == 0


@settings(max_examples=15, deadline=None)
@given(st.randoms(use_true_random=False))
def test_sylow_bound_on_random_subgroups(rnd):
    G = random_subgroup(4, rnd)
    assert h1_sylow_bound(G).order % h1(G).order == 0


@pytest.mark.parametrize("p,size", [(2, 128), (3, 3), (5, 5)])
def test_sylow_orders_degree_4(p, size):
    P = sylow_subgroup(weyl_group(PicLattice(4)), p)
    assert P.order == size


def test_h1_bar_refuses_large_groups():
    with pytest.raises(FeasibilityError):
        h1_bar(weyl_group(PicLattice(5)))


def test_root_reflection_module():
    # reflection in a root r on Pic: H^1 of Z/2 generated by s_r
    L = PicLattice(5)
    s = simple_reflections(L)[0]
    assert h1_cyclic(s) == h1(generate_group([s], lattice=L))
    r = L.e(1) - L.e(2)
    assert pair(L, r, r) == -2


@pytest.mark.parametrize("d,bound", [(6, 12), (5, 12), (4, 8)])
def test_h1_agrees_with_bar_complex_on_small_classes(d, bound, survey_classes):
    for G in survey_classes(d):
        if G.order <= bound:
            assert h1(G) == h1_bar(G, max_order=bound), G
