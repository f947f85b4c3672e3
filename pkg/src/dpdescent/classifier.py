"""Per-degree decision procedures over the Galois image Gamma in W.

Everything here is a statement about the lattice with its Gamma-action.  Facts
that need field arithmetic (a rational point, the actual Brauer class) are
never computed; where a theorem pins them down from lattice data the
conclusion is recorded as ``exact_if_known``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

import numpy as np

from .cohomology import (
    SYLOW_LABEL,
    CohGroup,
    h1,
    h1_sylow_bound,
    invariant_lattice,
)
from .errors import FeasibilityError, ValidationError
from .lattice import (
    BLOWUP,
    PRODUCT,
    DivClass,
    PicLattice,
    class_name,
    conic_classes,
    exceptional_classes,
    pair,
    plane_classes,
)
from .linalg import det_bareiss, quotient_invariants
from .weyl import (
    MAX_TABLE_ORDER,
    GaloisSubgroup,
    LatticeAut,
    canonical_conjugate,
    identity_aut,
    orbit_sums,
    weyl_order,
)

CTKM_LIST = ((), (2,), (2, 2), (3,))

# theorem tags carried by every flag
TAG_LARGE_DEGREE = "large-degree-descent"
TAG_LARGE_POINT = "large-degree-rational-point"
TAG_PRODUCT = "product-classification"
TAG_PRODUCT_AM = "product-amitsur"
TAG_DP6 = "dP6-classification"
TAG_DP6_PAIR = "dP6-cremona-pair"
TAG_DP5 = "dP5-descent"
TAG_DP4_QS = "dP4-quasi-split"
TAG_DP4_CONIC = "dP4-conic-cover"
TAG_DP3 = "dP3-descent"
TAG_DP3_MIN = "dP3-minimal"
TAG_DP1 = "dP1-base-point"
TAG_AM_ORDER = "amitsur-order-divides-degree"
TAG_BS_PERIOD = "brauer-severi-period-divides-dim+1"
TAG_CTKM = "CTKM-list"
TAG_H1_BS = "h1-birational-invariance"


@dataclass(frozen=True)
class Flag:
    value: bool
    theorem: str
    witness: Any = None

    def to_dict(self) -> dict:
        return {"value": self.value, "theorem": self.theorem, "witness": self.witness}


@dataclass
class SurfaceReport:
    """Theorem-level conclusions for one (degree, kind, Gamma) triple.

    All class names refer to the frame of ``gamma``; ``conjugator`` maps the
    caller's frame to it (``conjugator * input * conjugator^-1 == gamma``).
    """

    degree: int
    kind: str
    gamma: GaloisSubgroup
    rho: int
    invariant_basis: list[DivClass]
    h1: CohGroup
    h1_exact: bool
    h1_method: str
    descent_flags: dict[str, Flag]
    amitsur: dict[str, Any]
    case_label: str
    field_extension_data: dict[str, Any] | None = None
    notes: list[str] = field(default_factory=list)
    closure_enlarged: bool = False
    canonical_frame: bool = False
    conjugator: LatticeAut | None = None

    def to_dict(self) -> dict:
        L = self.gamma.lattice
        am = dict(self.amitsur)
        am["upper_bound"] = list(am["upper_bound"].invariant_factors)
        exact = am.get("exact_if_known")
        am["exact_if_known"] = None if exact is None else list(exact.invariant_factors)
        out = {
            "degree": self.degree,
            "kind": self.kind,
            "group": {
                "order": self.gamma.order,
                "generators": [_cycle_text(g) for g in self.gamma.generators],
                "closure_enlarged": self.closure_enlarged,
                "canonical_frame": self.canonical_frame,
            },
            "rho": self.rho,
            "invariant_basis": [class_name(L, c) for c in self.invariant_basis],
            "h1": {
                "invariant_factors": list(self.h1.invariant_factors),
                "exact": self.h1_exact,
                "method": self.h1_method,
            },
            "descent_flags": {k: v.to_dict() for k, v in sorted(self.descent_flags.items())},
            "amitsur": am,
            "case_label": self.case_label,
            "notes": list(self.notes),
        }
        if self.field_extension_data is not None:
            out["field_extension_data"] = dict(self.field_extension_data)
        return out


def _cycle_text(g: LatticeAut) -> str:
    cyc = g.cycles()
    return "".join("(" + " ".join(c) + ")" for c in cyc) or "()"


# -- shared helpers -------------------------------------------------------------------

def _fixed_mask(gamma: GaloisSubgroup, classes: Sequence[DivClass]) -> np.ndarray:
    if not classes:
        return np.zeros(0, dtype=bool)
    C = np.array([c.coeffs for c in classes], dtype=np.int64)
    mask = np.ones(len(classes), dtype=bool)
    for g in gamma.generators:
        M = np.array(g.matrix, dtype=np.int64)
        mask &= (C @ M.T == C).all(axis=1)
    return mask


def fixed_classes(gamma: GaloisSubgroup, classes: Sequence[DivClass]) -> list[DivClass]:
    mask = _fixed_mask(gamma, classes)
    return [c for c, keep in zip(classes, mask) if keep]


def _names(L: PicLattice, classes) -> list[str]:
    return [class_name(L, c) for c in classes]


def _coords(basis: Sequence[DivClass], v: Sequence[int]) -> list[int]:
    """Coordinates of ``v`` in a row-HNF basis of a saturated sublattice."""
    v = list(v)
    out = []
    for b in basis:
        c = next(j for j, x in enumerate(b.coeffs) if x)
        q = Fraction(v[c], b.coeffs[c])
        if q.denominator != 1:
            raise ValidationError(f"class {v} is not in the invariant lattice")
        q = int(q)
        out.append(q)
        v = [x - q * y for x, y in zip(v, b.coeffs)]
    if any(v):
        raise ValidationError("class is not in the invariant lattice")
    return out


@lru_cache(maxsize=None)
def _disjoint_sets(degree: int, size: int) -> tuple[tuple[int, ...], ...]:
    """Index sets of ``size`` pairwise disjoint lines."""
    L = PicLattice(degree)
    lines = exceptional_classes(L)
    n = len(lines)
    disjoint = [[pair(L, a, b) == 0 for b in lines] for a in lines]
    out = []

    def rec(start, chosen):
        if len(chosen) == size:
            out.append(tuple(chosen))
            return
        for j in range(start, n):
            if all(disjoint[i][j] for i in chosen):
                chosen.append(j)
                rec(j + 1, chosen)
                chosen.pop()

    rec(0, [])
    return tuple(out)


def disjoint_line_sets(L: PicLattice, size: int) -> list[list[DivClass]]:
    lines = exceptional_classes(L)
    return [[lines[i] for i in s] for s in _disjoint_sets(L.degree, size)]


def _invariant_sum(gamma: GaloisSubgroup, size: int):
    """First set of ``size`` disjoint lines whose sum is a Gamma-invariant class."""
    L = gamma.lattice
    for s in disjoint_line_sets(L, size):
        F = s[0]
        for c in s[1:]:
            F = F + c
        if all(g(F) == F for g in gamma.generators):
            return s, F
    return None, None


# -- degree-specific procedures ------------------------------------------------------------

def classify_dp6(gamma: GaloisSubgroup) -> dict[str, Any]:
    """Hexagon data: phi1 on the two triangles, phi2 on the three opposite pairs."""
    L = gamma.lattice
    if L.degree != 6 or L.kind != BLOWUP:
        raise ValidationError("classify_dp6 needs the degree-6 lattice")
    lines = exceptional_classes(L)
    idx = {c.coeffs: i for i, c in enumerate(lines)}
    E = [L.e(i) for i in (1, 2, 3)]
    Ep = [L.h() - L.e(j) - L.e(k) for (j, k) in ((2, 3), (1, 3), (1, 2))]
    tri = [{idx[c.coeffs] for c in E}, {idx[c.coeffs] for c in Ep}]
    pairs = [frozenset({idx[E[i].coeffs], idx[Ep[i].coeffs]}) for i in range(3)]
    phi1, phi2 = set(), set()
    for g in gamma.elements:
        img = {g.perm[i] for i in tri[0]}
        phi1.add(0 if img == tri[0] else 1)
        phi2.add(tuple(pairs.index(frozenset(g.perm[i] for i in p)) for p in pairs))
    k_eq_K = phi1 == {0}
    k_eq_L = len(phi2) % 3 != 0
    k_eq_M = len(phi2) == 1
    _, rho = invariant_lattice(gamma)
    flags: dict[str, Flag] = {}
    H, Hp = L.h(), -L.h() - L.canonical  # Hp = -K - H
    flags["descends_to_brauer_severi_surface"] = Flag(
        k_eq_K, TAG_DP6 + "(1)", _names(L, [H, Hp]) if k_eq_K else None
    )
    pair_witness = None
    if k_eq_L:
        for i in range(3):
            s = E[i] + Ep[i]
            if all(g(s) == s for g in gamma.generators):
                pair_witness = [class_name(L, E[i]), class_name(L, Ep[i])]
                break
    flags["birational_to_product_quadric"] = Flag(k_eq_L, TAG_DP6 + "(2)", pair_witness)
    case3 = not k_eq_K and not k_eq_L
    flags["minimal_rho_one"] = Flag(case3, TAG_DP6 + "(3)", [class_name(L, L.canonical)] if case3 else None)
    if k_eq_K:
        # both Cremona-paired plane classes are invariant
        pair_ok = all(g(H) == H and g(Hp) == Hp for g in gamma.generators)
        flags["cremona_pair_invariant"] = Flag(pair_ok, TAG_DP6_PAIR, _names(L, [H, Hp]) if pair_ok else None)
    table_rho = None
    Y = None
    if k_eq_L:
        table_rho = 4 if k_eq_M else 3
        Y = "P1 x P1" if k_eq_M else "Spec M ^ (P1 x P1)"
    if k_eq_K:
        label = "case (1): birational morphism to a Brauer-Severi surface"
    elif k_eq_L:
        label = "case (2): birational morphism to a product-type quadric"
    else:
        label = "case (3): rho = 1"
    if k_eq_K and k_eq_L:
        label = "cases (1) and (2)"
    return {
        "flags": flags,
        "case_label": label,
        "rho": rho,
        "field_extension_data": {
            "k_eq_K": k_eq_K,
            "k_eq_L": k_eq_L,
            "k_eq_M": k_eq_M,
            "phi1_image_order": len(phi1),
            "phi2_image_order": len(phi2),
            "table_rho": table_rho,
            "table_rho_matches": None if table_rho is None else table_rho == rho,
            "Y": Y,
        },
        "cases": {"1": k_eq_K, "2": k_eq_L, "3": case3},
    }


def descent_dp5(gamma: GaloisSubgroup) -> dict[str, Flag]:
    """Invariant blow-down class F (sum of 4 disjoint lines) versus an invariant conic class."""
    L = gamma.lattice
    if L.degree != 5 or L.kind != BLOWUP:
        raise ValidationError("descent_dp5 needs the degree-5 lattice")
    quad, F = _invariant_sum(gamma, 4)
    conics = fixed_classes(gamma, conic_classes(L))
    return {
        "F_exists": Flag(quad is not None, TAG_DP5 + "(3)", _names(L, quad) if quad else None),
        "conic_exists": Flag(bool(conics), TAG_DP5 + "(4)", class_name(L, conics[0]) if conics else None),
    }


def quasi_split_dp4(gamma: GaloisSubgroup) -> dict[str, Flag]:
    L = gamma.lattice
    if L.degree != 4 or L.kind != BLOWUP:
        raise ValidationError("quasi_split_dp4 needs the degree-4 lattice")
    fixed = fixed_classes(gamma, exceptional_classes(L))
    return {"E_exists": Flag(bool(fixed), TAG_DP4_QS + "(4)", class_name(L, fixed[0]) if fixed else None)}


def conic_dp4(gamma: GaloisSubgroup) -> dict[str, Flag]:
    """Invariant conic class; gives a degree-2 finite morphism to P' x P'' with P' = P''."""
    L = gamma.lattice
    if L.degree != 4 or L.kind != BLOWUP:
        raise ValidationError("conic_dp4 needs the degree-4 lattice")
    fixed = fixed_classes(gamma, conic_classes(L))
    return {"conic_exists": Flag(bool(fixed), TAG_DP4_CONIC + "(1)", class_name(L, fixed[0]) if fixed else None)}


def blowdown_dp3(gamma: GaloisSubgroup) -> dict[str, Flag]:
    """Invariant sixer sum (six disjoint lines), searched over all 72 sixers."""
    L = gamma.lattice
    if L.degree != 3 or L.kind != BLOWUP:
        raise ValidationError("blowdown_dp3 needs the degree-3 lattice")
    six, _ = _invariant_sum(gamma, 6)
    return {"F_exists": Flag(six is not None, TAG_DP3 + "(2)", _names(L, six) if six else None)}


# -- Amitsur constraints ------------------------------------------------------------------

def amitsur_constraints(degree: int, kind: str, gamma: GaloisSubgroup, _context: dict | None = None) -> dict:
    """Upper bound for Am(X) from the lattice.

    Am(X) is the image of ``delta: Pic^Gamma -> Br(k)``.  ``delta`` kills K and
    every Gamma-orbit sum of lines (these are divisors over k).  An invariant
    conic class maps X to a Brauer-Severi curve and an invariant plane class
    (``c^2 = 1``, ``-K.c = 3``) to a Brauer-Severi surface, so ``delta`` kills
    2c and 3c respectively (period divides dimension + 1).  Finally every
    element of Am(X) has order dividing ``order_divisor``.
    """
    L = _check_lattice(degree, kind, gamma)
    ctx = _context or {}
    basis, rho = invariant_lattice(gamma)
    notes: list[str] = []
    rels: list[list[int]] = [_coords(basis, L.canonical.coeffs)]
    if kind == PRODUCT:
        for c in fixed_classes(gamma, conic_classes(L)):
            rels.append(_coords(basis, (2 * c).coeffs))
        divisor = 2
        notes.append("Am is generated by classes of Brauer-Severi curves, which have period 2")
    else:
        for s in orbit_sums(gamma, exceptional_classes(L)):
            rels.append(_coords(basis, s.coeffs))
        for c in fixed_classes(gamma, conic_classes(L)):
            rels.append(_coords(basis, (2 * c).coeffs))
        for c in fixed_classes(gamma, plane_classes(L)):
            rels.append(_coords(basis, (3 * c).coeffs))
        divisor = degree
        notes.append(f"every element of Am has order dividing the degree {degree}")
        if degree >= 7:
            divisor = math.gcd(degree, 3)
            notes.append("X maps birationally onto a Brauer-Severi surface, so Am is cyclic of order dividing 3")
        elif degree == 6 and ctx.get("dp6_case1"):
            divisor = math.gcd(degree, 3)
            notes.append("Am(X) = Am(P) for the Brauer-Severi surface P of the descended blow-down")
        elif degree == 3 and ctx.get("dp3_F"):
            divisor = math.gcd(degree, 3)
    for i in range(rho):
        rels.append([divisor if j == i else 0 for j in range(rho)])
    torsion, free = quotient_invariants(rho, rels)
    assert free == 0
    upper = CohGroup(tuple(torsion))
    exact = None
    if kind == PRODUCT and rho == 1:
        exact = CohGroup()
        notes.append("rho = 1: the invariant class (1,1) is a hyperplane section of X in P = P^3")
    elif kind == BLOWUP and degree in (1, 5, 7, 8):
        exact = CohGroup()
        if degree == 5:
            notes.append("degree 5 surfaces always have a rational point")
    elif degree == 6 and (ctx.get("dp6_case2") or ctx.get("dp6_case3")):
        exact = CohGroup()
    elif degree == 3 and rho == 1:
        exact = CohGroup()
        notes.append("rho = 1: Pic^Gamma = Z K")
    elif degree == 4 and ctx.get("dp4_quasi_split"):
        exact = CohGroup()
        notes.append("an invariant line is a rational curve defined over k")
    if exact is None and upper.is_trivial:
        exact = CohGroup()
    return {
        "order_divisor": divisor,
        "upper_bound": upper,
        "exact_if_known": exact,
        "in_ctkm_list": upper.invariant_factors in CTKM_LIST,
        "ctkm_theorem": TAG_CTKM,
        "notes": notes,
    }


# -- Kang and the degeneracy quintic --------------------------------------------------------

def kang_dimension(dim: int, per: int) -> int:
    """Projective dimension of the target of the per-uple Veronese embedding of P^dim."""
    if dim < 1 or per < 1:
        raise ValidationError("dim and per must be positive")
    return math.comb(dim + per, per) - 1


def kang_report(dim: int, per: int) -> dict:
    value = kang_dimension(dim, per)
    warnings = [
        f"the closed form N = binom(dim+per, per) gives {value + 1}, which counts degree-{per} "
        f"monomials in {dim + 1} variables; the Veronese embedding lands in P^{value} "
        f"(a conic, dim 1 and per 2, embeds in P^2)"
    ]
    if (dim + 1) % per:
        warnings.append(f"per = {per} does not divide dim + 1 = {dim + 1}; no Brauer-Severi variety has this period")
    return {"dim": dim, "per": per, "N": value, "monomial_count": value + 1, "warnings": warnings}


def _check_pencil_matrix(Q, name: str) -> list[list[int]]:
    try:
        M = [[int(x) for x in row] for row in Q]
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be an integer matrix") from None
    if len(M) != 5 or any(len(r) != 5 for r in M):
        raise ValidationError(f"{name} must be 5x5")
    if any(M[i][j] != M[j][i] for i in range(5) for j in range(5)):
        raise ValidationError(f"{name} must be symmetric")
    return M


def degeneracy_quintic(Q0, Q1) -> dict:
    """Coefficients ``c_i`` of ``det(t0 Q0 + t1 Q1) = sum c_i t0^(5-i) t1^i`` and the etale flag.

    The degeneracy scheme is etale of length 5 iff the binary form has five
    distinct roots on P^1: the dehomogenisation ``f(1, s)`` is squarefree over Q
    and has degree at least 4 (at most a simple root at ``t0 = 0``).
    """
    A = _check_pencil_matrix(Q0, "Q0")
    B = _check_pencil_matrix(Q1, "Q1")
    xs = list(range(6))
    ys = [det_bareiss([[A[i][j] + s * B[i][j] for j in range(5)] for i in range(5)]) for s in xs]
    coeffs = _interpolate(xs, ys)
    if not any(coeffs):
        raise ValidationError("pencil everywhere singular: the quintic is identically zero")
    g = [Fraction(c) for c in coeffs]
    deg = max(i for i, c in enumerate(coeffs) if c)
    squarefree = _degree(_poly_gcd(g, _derivative(g))) == 0
    return {"quintic": coeffs, "etale": squarefree and deg >= 4}


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[int]:
    """Coefficients (low to high) of the polynomial through the points (Newton form)."""
    n = len(xs)
    dd = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        # poly = poly * (x - xs[k]) + dd[k]
        new = [Fraction(0)] * n
        for i in range(n - 1):
            new[i + 1] += poly[i]
            new[i] -= xs[k] * poly[i]
        new[0] += dd[k]
        poly = new
    if any(c.denominator != 1 for c in poly):
        raise ArithmeticError("interpolated determinant is not integral")
    return [int(c) for c in poly]


def _degree(p: Sequence[Fraction]) -> int:
    for i in range(len(p) - 1, -1, -1):
        if p[i]:
            return i
    return -1


def _derivative(p: Sequence[Fraction]) -> list[Fraction]:
    return [i * p[i] for i in range(1, len(p))] or [Fraction(0)]


def _poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = list(a), list(b)
    while _degree(b) >= 0:
        db = _degree(b)
        r = a[:]
        while _degree(r) >= db:
            dr = _degree(r)
            q = r[dr] / b[db]
            for i in range(db + 1):
                r[dr - db + i] -= q * b[i]
        a, b = b, r
    return a


# -- dispatcher --------------------------------------------------------------------------------

def _check_lattice(degree: int, kind: str, gamma: GaloisSubgroup) -> PicLattice:
    L = PicLattice(degree, kind)
    if gamma.lattice != L:
        raise ValidationError(f"Galois group acts on {gamma.lattice}, not on {L}")
    return L


def _canonical_frame_available(L: PicLattice) -> bool:
    if L.kind == PRODUCT:
        return True
    return 3 <= L.degree <= 7


def classify(degree: int, kind: str, gamma: GaloisSubgroup, canonicalize: bool = True) -> SurfaceReport:
    """Full report for the surface whose Galois image on Pic is ``gamma``.

    With ``canonicalize`` (the default, available for degree >= 3) the report
    is computed for the lexicographically least W-conjugate of ``gamma``, so
    conjugate inputs give identical reports.
    """
    L = _check_lattice(degree, kind, gamma)
    enlarged = gamma.closure_enlarged
    conj = None
    canonical = False
    if canonicalize and _canonical_frame_available(L) and weyl_order(L) <= MAX_TABLE_ORDER:
        gamma, conj = canonical_conjugate(gamma)
        canonical = True
    basis, rho = invariant_lattice(gamma)
    try:
        H1 = h1(gamma)
        h1_exact, h1_method = True, "crossed homomorphisms"
    except FeasibilityError:
        H1 = h1_sylow_bound(gamma)
        h1_exact, h1_method = False, SYLOW_LABEL
    flags: dict[str, Flag] = {}
    ctx: dict[str, bool] = {}
    notes: list[str] = []
    fed = None
    if kind == PRODUCT:
        swap = rho == 1
        label = "twisted self-product" if swap else "P' x P''"
        flags["twisted_self_product"] = Flag(swap, TAG_PRODUCT + "(2)", ["L1+L2"] if swap else None)
        flags["product_of_brauer_severi_curves"] = Flag(not swap, TAG_PRODUCT + "(1)", ["L1", "L2"] if not swap else None)
        if swap:
            notes.append("ambient Brauer-Severi threefold P = P^3")
    elif degree == 9:
        label = "Brauer-Severi surface"
    elif degree >= 7:
        label = "has k-rational point"
        H = L.h()
        flags["descends_to_brauer_severi_surface"] = Flag(True, TAG_LARGE_DEGREE, [class_name(L, H)])
        fixed = fixed_classes(gamma, exceptional_classes(L))
        flags["has_k_rational_point"] = Flag(True, TAG_LARGE_POINT, _names(L, fixed[:1]) or [class_name(L, H)])
        flags["blow_down_to_P2"] = Flag(True, TAG_LARGE_POINT, [class_name(L, H)])
    elif degree == 6:
        sub = classify_dp6(gamma)
        flags.update(sub["flags"])
        label = sub["case_label"]
        fed = sub["field_extension_data"]
        ctx = {"dp6_case1": sub["cases"]["1"], "dp6_case2": sub["cases"]["2"], "dp6_case3": sub["cases"]["3"]}
        if sub["cases"]["2"]:
            flags["has_k_rational_point"] = Flag(True, TAG_DP6 + "(2)", flags["birational_to_product_quadric"].witness)
    elif degree == 5:
        flags.update(descent_dp5(gamma))
        ok = flags["F_exists"].value
        label = "blow-down to P2 descends" if ok else "no invariant blow-down structure"
    elif degree == 4:
        flags.update(quasi_split_dp4(gamma))
        flags.update(conic_dp4(gamma))
        ctx = {"dp4_quasi_split": flags["E_exists"].value}
        if flags["E_exists"].value:
            label = "quasi-split"
        elif flags["conic_exists"].value:
            label = "degree-2 cover of P' x P' (P' = P'')"
        else:
            label = "no invariant line or conic class"
        if flags["conic_exists"].value:
            notes.append("finite morphism of degree 2 onto P' x P'' with P' = P''")
    elif degree == 3:
        flags.update(blowdown_dp3(gamma))
        ctx = {"dp3_F": flags["F_exists"].value}
        flags["minimal"] = Flag(rho == 1, TAG_DP3_MIN, [class_name(L, L.canonical)] if rho == 1 else None)
        label = "blow-down of six points descends" if flags["F_exists"].value else (
            "minimal" if rho == 1 else "not minimal, no invariant sixer"
        )
    elif degree == 2:
        label = "degree 2"
    else:
        flags["has_k_rational_point"] = Flag(True, TAG_DP1, [class_name(L, L.anticanonical)])
        label = "base point of |-K| is rational"
    if not H1.is_trivial:
        flags["birational_to_brauer_severi_obstructed"] = Flag(True, TAG_H1_BS, str(H1))
    am = amitsur_constraints(degree, kind, gamma, ctx)
    return SurfaceReport(
        degree=degree,
        kind=kind,
        gamma=gamma,
        rho=rho,
        invariant_basis=basis,
        h1=H1,
        h1_exact=h1_exact,
        h1_method=h1_method,
        descent_flags=flags,
        amitsur=am,
        case_label=label,
        field_extension_data=fed,
        notes=notes,
        closure_enlarged=enlarged,
        canonical_frame=canonical,
        conjugator=conj,
    )


def witnesses_in_frame(report: SurfaceReport, g: LatticeAut | None) -> dict[str, Any]:
    """Flag witnesses transported by ``g`` (class names in, class names out)."""
    L = report.gamma.lattice
    if g is None:
        g = identity_aut(L)

    def move(w):
        if w is None:
            return None
        if isinstance(w, list):
            return [move(x) for x in w]
        try:
            c = L.cls(w)
        except ValidationError:
            return w
        return class_name(L, g(c))

    return {k: move(v.witness) for k, v in sorted(report.descent_flags.items())}
