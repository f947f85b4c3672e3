import json

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dpdescent.classifier import (
    CTKM_LIST,
    amitsur_constraints,
    blowdown_dp3,
    classify,
    classify_dp6,
    conic_dp4,
    degeneracy_quintic,
    descent_dp5,
    disjoint_line_sets,
    kang_dimension,
    kang_report,
    quasi_split_dp4,
    witnesses_in_frame,
)
from dpdescent.cohomology import invariant_lattice
from dpdescent.errors import ValidationError
from dpdescent.lattice import PicLattice, exceptional_classes, pair
from dpdescent.weyl import (
    all_subgroups,
    aut_from_class_map,
    conjugate,
    generate_group,
    simple_reflections,
    trivial_group,
    weyl_group,
)

t0, t1 = sympy.symbols("t0 t1")


def group(d, *maps, kind="blowup"):
    L = PicLattice(d, kind)
    return generate_group([aut_from_class_map(L, m) for m in maps], lattice=L)


# -- degree 6 ---------------------------------------------------------------------------

def test_dp6_transposition():
    out = classify_dp6(group(6, {"E1": "E2", "E2": "E1"}))
    fed = out["field_extension_data"]
    assert out["cases"] == {"1": True, "2": True, "3": False}
    assert out["rho"] == 3
    assert fed["k_eq_K"] and fed["k_eq_L"] and not fed["k_eq_M"]
    assert out["flags"]["birational_to_product_quadric"].witness == ["E3", "H-E1-E2"]


def test_dp6_full_weyl_is_case_3():
    rep = classify(6, "blowup", weyl_group(PicLattice(6)))
    assert rep.descent_flags["minimal_rho_one"].value
    assert rep.rho == 1
    assert rep.amitsur["exact_if_known"].is_trivial


def dp6_oracles(G):
    """Lattice-level restatements independent of the hexagon bookkeeping."""
    L = G.lattice
    H = L.h()
    fixes_H = all(g(H) == H for g in G.elements)
    pairs = [L.e(1) + L.cls("H-E2-E3"), L.e(2) + L.cls("H-E1-E3"), L.e(3) + L.cls("H-E1-E2")]
    fixes_pair = any(all(g(p) == p for g in G.elements) for p in pairs)
    return fixes_H, fixes_pair


def test_dp6_cases_against_oracles():
    for G in all_subgroups(weyl_group(PicLattice(6))):
        out = classify_dp6(G)
        fixes_H, fixes_pair = dp6_oracles(G)
        assert out["cases"]["1"] == fixes_H
        assert out["cases"]["2"] == fixes_pair
        if out["cases"]["3"]:
            assert out["rho"] == 1


def test_dp6_table_holds_when_triangles_are_fixed():
    # the rank table is exact whenever phi1 is trivial
    for G in all_subgroups(weyl_group(PicLattice(6))):
        fed = classify_dp6(G)["field_extension_data"]
        if fed["k_eq_K"] and fed["k_eq_L"]:
            assert fed["table_rho_matches"], fed


# -- degrees 5, 4, 3 ---------------------------------------------------------------------

def test_trivial_gamma_flags():
    assert {k: f.value for k, f in descent_dp5(trivial_group(PicLattice(5))).items()} == {
        "F_exists": True,
        "conic_exists": True,
    }
    qs = quasi_split_dp4(trivial_group(PicLattice(4)))["E_exists"]
    assert qs.value and qs.witness == "E1"
    assert conic_dp4(trivial_group(PicLattice(4)))["conic_exists"].value
    assert blowdown_dp3(trivial_group(PicLattice(3)))["F_exists"].value


@pytest.mark.parametrize("d,size,count", [(5, 4, 5), (4, 5, 16), (3, 6, 72)])
def test_blow_down_structure_counts(d, size, count):
    L = PicLattice(d)
    sets = disjoint_line_sets(L, size)
    assert len(sets) == count
    for s in sets:
        assert all(pair(L, a, b) == 0 for i, a in enumerate(s) for b in s[i + 1 :])


def test_dp5_full_weyl_has_neither():
    flags = descent_dp5(weyl_group(PicLattice(5)))
    assert not flags["F_exists"].value and not flags["conic_exists"].value


def test_dp3_minimal_when_rho_one():
    rep = classify(3, "blowup", group(3, {"E1": "E2", "E2": "E3", "E3": "E4", "E4": "E5", "E5": "E6", "E6": "E1"}))
    assert rep.rho == 2
    assert rep.descent_flags["F_exists"].value
    assert not rep.descent_flags["minimal"].value


def test_wrong_degree_rejected():
    with pytest.raises(ValidationError):
        descent_dp5(trivial_group(PicLattice(4)))
    with pytest.raises(ValidationError):
        classify(5, "blowup", trivial_group(PicLattice(4)))


# -- classify ---------------------------------------------------------------------------

def test_product_swap_report():
    L = PicLattice(8, "product")
    rep = classify(8, "product", generate_group(simple_reflections(L), lattice=L))
    assert rep.rho == 1
    assert rep.descent_flags["twisted_self_product"].value
    assert rep.amitsur["exact_if_known"].is_trivial
    assert rep.amitsur["upper_bound"].invariant_factors in CTKM_LIST


@pytest.mark.parametrize("d", [9, 8, 7, 2, 1])
def test_trivial_gamma_everywhere(d):
    rep = classify(d, "blowup", trivial_group(PicLattice(d)))
    assert rep.rho == PicLattice(d).rank
    assert rep.h1.is_trivial
    json.dumps(rep.to_dict())


def test_degree_2_geiser_like_involution():
    # -1 on K-perp: rho = 1, classify still runs without a canonical frame
    L = PicLattice(2)
    G = generate_group(simple_reflections(L)[:1], lattice=L)
    rep = classify(2, "blowup", G)
    assert not rep.canonical_frame
    assert rep.rho == L.rank - 1


def test_h1_obstruction_flag():
    for G in subgroups_with_h1(4):
        rep = classify(4, "blowup", G)
        assert rep.descent_flags["birational_to_brauer_severi_obstructed"].value


def subgroups_with_h1(d):
    from dpdescent.weyl import subgroups_up_to_conjugacy

    out = []
    for G in subgroups_up_to_conjugacy(weyl_group(PicLattice(d)), 16):
        if not classify(d, "blowup", G).h1.is_trivial:
            out.append(G)
    assert out
    return out


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([4, 5, 6, 7]), st.randoms(use_true_random=False))
def test_amitsur_bound_properties(d, rnd):
    L = PicLattice(d)
    W = weyl_group(L)
    G = generate_group([rnd.choice(W.elements)], lattice=L)
    am = amitsur_constraints(d, "blowup", G)
    up = am["upper_bound"]
    assert am["order_divisor"] % max(up.invariant_factors or (1,)) == 0
    assert up.order <= am["order_divisor"] ** invariant_lattice(G)[1]
    if am["exact_if_known"] is not None:
        assert am["exact_if_known"].order <= up.order


def test_witnesses_follow_the_conjugator():
    L = PicLattice(6)
    G = group(6, {"E2": "E3", "E3": "E2"}, {"E1": "H-E2-E3", "H-E2-E3": "E1"})
    rep = classify(6, "blowup", G)
    back = rep.conjugator.inverse()
    assert conjugate(rep.gamma, back).element_key() == G.element_key()
    moved = witnesses_in_frame(rep, back)
    pair_w = moved["birational_to_product_quadric"]
    s = L.cls(pair_w[0]) + L.cls(pair_w[1])
    assert all(g(s) == s for g in G.elements)
    assert witnesses_in_frame(rep, None) == {k: f.witness for k, f in sorted(rep.descent_flags.items())}


# -- Kang ------------------------------------------------------------------------------

def test_kang_values():
    assert kang_dimension(1, 2) == 2
    assert [kang_dimension(n, 1) for n in range(1, 11)] == list(range(1, 11))
    assert kang_dimension(2, 3) == 9


def test_kang_report_warns():
    rep = kang_report(1, 2)
    assert rep["N"] == 2 and rep["monomial_count"] == 3
    assert any("binom" in w for w in rep["warnings"])
    assert len(kang_report(2, 2)["warnings"]) == 2


@given(st.integers(1, 8), st.integers(1, 5))
def test_kang_matches_monomial_count(dim, per):
    monomials = len(list(sympy.polys.monomials.itermonomials(sympy.symbols(f"x0:{dim + 1}"), per, per)))
    assert kang_dimension(dim, per) == monomials - 1


# -- degeneracy quintic ---------------------------------------------------------------

def diag(*xs):
    return [[xs[i] if i == j else 0 for j in range(5)] for i in range(5)]


def test_diagonal_pencils():
    I = diag(1, 1, 1, 1, 1)
    res = degeneracy_quintic(I, diag(0, 1, 2, 3, 4))
    expected = sympy.Poly(sympy.expand(t0 * (t0 + t1) * (t0 + 2 * t1) * (t0 + 3 * t1) * (t0 + 4 * t1)), t0, t1)
    assert res["quintic"] == [expected.coeff_monomial(t0 ** (5 - i) * t1**i) for i in range(6)]
    assert res["etale"] is True
    assert degeneracy_quintic(I, diag(0, 0, 1, 2, 3))["etale"] is False


def test_degeneracy_validation():
    with pytest.raises(ValidationError):
        degeneracy_quintic(diag(1, 1, 1, 1, 1), [[1, 2], [2, 1]])
    bad = diag(1, 1, 1, 1, 1)
    bad[0][1] = 3
    with pytest.raises(ValidationError, match="symmetric"):
        degeneracy_quintic(bad, diag(1, 1, 1, 1, 1))
    with pytest.raises(ValidationError, match="singular"):
        degeneracy_quintic(diag(0, 1, 1, 1, 1), diag(0, 1, 2, 3, 4))


def symmetric():
    return st.lists(st.integers(-4, 4), min_size=15, max_size=15).map(_sym)


def _sym(v):
    M = [[0] * 5 for _ in range(5)]
    k = 0
    for i in range(5):
        for j in range(i, 5):
            M[i][j] = M[j][i] = v[k]
            k += 1
    return M


def sympy_oracle(Q0, Q1):
    f = sympy.expand((t0 * sympy.Matrix(Q0) + t1 * sympy.Matrix(Q1)).det())
    coeffs = [sympy.Poly(f, t0, t1).coeff_monomial(t0 ** (5 - i) * t1**i) if f != 0 else 0 for i in range(6)]
    if f == 0:
        return coeffs, None
    # five distinct points on P^1 = squarefree binary quintic of full degree
    g = sympy.Poly(f, t0, t1)
    etale = g.total_degree() == 5 and all(m == 1 for _, m in sympy.factor_list(f)[1])
    return coeffs, etale


@settings(max_examples=40, deadline=None)
@given(symmetric(), symmetric())
def test_quintic_matches_sympy(Q0, Q1):
    coeffs, etale = sympy_oracle(Q0, Q1)
    if etale is None:
        with pytest.raises(ValidationError):
            degeneracy_quintic(Q0, Q1)
        return
    res = degeneracy_quintic(Q0, Q1)
    assert res["quintic"] == [int(c) for c in coeffs]
    assert res["etale"] == etale


def test_quasi_split_iff_singleton_orbit(survey_classes):
    from dpdescent.weyl import orbits

    L = PicLattice(4)
    for G in survey_classes(4):
        singleton = any(len(o) == 1 for o in orbits(G, exceptional_classes(L)))
        assert quasi_split_dp4(G)["E_exists"].value == singleton


def test_degree_7_full_weyl_has_point():
    doc = classify(7, "blowup", weyl_group(PicLattice(7))).to_dict()
    assert doc["descent_flags"]["has_k_rational_point"]["value"] is True


def test_every_flag_carries_a_theorem_tag(survey_classes):
    for G in survey_classes(5):
        for name, flag in classify(5, "blowup", G).descent_flags.items():
            assert isinstance(flag.theorem, str) and flag.theorem
