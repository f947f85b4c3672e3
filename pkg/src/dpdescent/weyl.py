"""Weyl groups of del Pezzo Picard lattices and their finite subgroups.

W is the group of lattice automorphisms that preserve the intersection form
and fix the canonical class.  It acts faithfully on the lines (or on the two
rulings of ``P1 x P1``) whenever that set spans the lattice, so elements are
carried both as integer matrices and as permutations of
:func:`~dpdescent.lattice.distinguished_classes`.

Subgroup surveys work inside an explicit element table of the ambient group
(numpy arrays of permutations) and are therefore limited to ambient groups of
a few tens of thousands of elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import FeasibilityError, ValidationError
from .lattice import (
    PRODUCT,
    DivClass,
    PicLattice,
    class_name,
    distinguished_classes,
    pair,
)
from .linalg import inverse_unimodular, matmul, matvec

# element tables are built only for groups up to this size
MAX_TABLE_ORDER = 60_000
# default cap on explicit closures (W(E7) has 2903040 elements and is refused)
MAX_CLOSURE_ORDER = 1_000_000
SURVEY_GROUP_BOUND = 2000
DENSE_INDEX_LIMIT = 1 << 24
SURVEY_SMALL_ORDER_BOUND = 200


# -- per-lattice frame ------------------------------------------------------------

class _Frame:
    """Lookup data tying matrices to permutations of the distinguished classes."""

    def __init__(self, L: PicLattice):
        self.lattice = L
        self.classes = distinguished_classes(L)
        self.index = {c.coeffs: i for i, c in enumerate(self.classes)}
        self.m = len(self.classes)
        # basis of the lattice made of distinguished classes, if one exists
        if L.kind == PRODUCT:
            names = [(1, 0), (0, 1)]
        elif L.n_points >= 2:
            n = L.n_points
            names = [tuple(1 if j == i else 0 for j in range(n + 1)) for i in range(1, n + 1)]
            names.append((1, -1, -1) + (0,) * (n - 2))
        else:
            names = None
        if names is None:
            self.base = None
            self.base_inv = None
        else:
            self.base = [self.index[v] for v in names]
            cols = [list(v) for v in names]
            B = [[cols[j][i] for j in range(L.rank)] for i in range(L.rank)]
            self.base_inv = inverse_unimodular(B)
        self.coeff_array = (
            np.array([c.coeffs for c in self.classes], dtype=np.int64)
            if self.m
            else np.zeros((0, L.rank), dtype=np.int64)
        )

    @property
    def faithful(self) -> bool:
        return self.base is not None

    def perm_of_matrix(self, M) -> tuple[int, ...]:
        out = []
        for c in self.classes:
            img = tuple(matvec(M, c.coeffs))
            j = self.index.get(img)
            if j is None:
                raise ValidationError(
                    f"matrix sends {class_name(self.lattice, c)} to "
                    f"{class_name(self.lattice, img)}, which is not a line"
                )
            out.append(j)
        return tuple(out)

    def matrix_of_perm(self, perm: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        r = self.lattice.rank
        if not self.faithful:
            if any(i != p for i, p in enumerate(perm)):
                raise ValidationError("only the identity acts on this lattice")
            return _identity_matrix(r)
        imgs = [self.classes[perm[b]].coeffs for b in self.base]
        Img = [[imgs[j][i] for j in range(r)] for i in range(r)]
        return tuple(tuple(row) for row in matmul(Img, self.base_inv))


@lru_cache(maxsize=None)
def _frame(L: PicLattice) -> _Frame:
    return _Frame(L)


def _identity_matrix(r: int):
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


# -- automorphisms -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LatticeAut:
    """An element of W: integer matrix (acting on column vectors) plus induced permutation."""

    lattice: PicLattice
    matrix: tuple[tuple[int, ...], ...]
    perm: tuple[int, ...]

    def __eq__(self, other):
        return isinstance(other, LatticeAut) and self.lattice == other.lattice and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __call__(self, c) -> DivClass:
        return DivClass(matvec(self.matrix, tuple(c)))

    def __mul__(self, other: "LatticeAut") -> "LatticeAut":
        """Composition: ``(g * h)(x) = g(h(x))``."""
        if other.lattice != self.lattice:
            raise ValidationError("cannot compose automorphisms of different lattices")
        M = tuple(tuple(row) for row in matmul(self.matrix, other.matrix))
        p = tuple(self.perm[i] for i in other.perm)
        return LatticeAut(self.lattice, M, p)

    def inverse(self) -> "LatticeAut":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        M = tuple(tuple(row) for row in inverse_unimodular(self.matrix))
        return LatticeAut(self.lattice, M, tuple(inv))

    @property
    def is_identity(self) -> bool:
        return self.matrix == _identity_matrix(self.lattice.rank)

    @cached_property
    def order(self) -> int:
        k, g = 1, self
        while not g.is_identity:
            g = g * self
            k += 1
        return k

    def cycles(self) -> list[list[str]]:
        """Non-trivial cycles of the permutation, by class name."""
        L = self.lattice
        cls = _frame(L).classes
        seen, out = set(), []
        for i in range(len(self.perm)):
            if i in seen or self.perm[i] == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(class_name(L, cls[j]))
                j = self.perm[j]
            out.append(cyc)
        return out

    def __repr__(self):
        return f"LatticeAut(degree={self.lattice.degree}, kind={self.lattice.kind}, cycles={self.cycles()})"


def identity_aut(L: PicLattice) -> LatticeAut:
    f = _frame(L)
    return LatticeAut(L, _identity_matrix(L.rank), tuple(range(f.m)))


def aut_from_matrix(L: PicLattice, M) -> LatticeAut:
    """Validate ``M`` as an element of W and wrap it."""
    try:
        rows = tuple(tuple(int(x) for x in row) for row in M)
    except (TypeError, ValueError):
        raise ValidationError(f"matrix must be a list of integer rows, got {M!r}") from None
    r = L.rank
    if len(rows) != r or any(len(row) != r for row in rows):
        raise ValidationError(f"matrix must be {r}x{r} for {L}, got {[len(x) for x in rows]}")
    G = L.gram
    MtGM = matmul(matmul([list(c) for c in zip(*rows)], G), rows)
    if MtGM != [list(x) for x in G]:
        raise ValidationError(f"matrix {[list(x) for x in rows]} does not preserve the intersection form")
    if tuple(matvec(rows, L.canonical.coeffs)) != L.canonical.coeffs:
        raise ValidationError(f"matrix {[list(x) for x in rows]} does not fix the canonical class")
    return LatticeAut(L, rows, _frame(L).perm_of_matrix(rows))


def aut_from_perm(L: PicLattice, perm: Sequence[int]) -> LatticeAut:
    f = _frame(L)
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(f.m)):
        raise ValidationError(f"not a permutation of {f.m} classes: {perm}")
    M = f.matrix_of_perm(perm)
    g = aut_from_matrix(L, M)
    if g.perm != perm:
        raise ValidationError("permutation is not induced by any lattice automorphism")
    return g


def aut_from_class_map(L: PicLattice, mapping: Mapping[str, str]) -> LatticeAut:
    """Extend a partial map of named lines to an element of W.

    Unnamed basis lines stay fixed unless the intersection numbers force them
    to move; the first consistent extension in that preference order is used.
    """
    f = _frame(L)
    given: dict[int, int] = {}
    for src, dst in mapping.items():
        a = f.index.get(L.cls(src).coeffs)
        b = f.index.get(L.cls(dst).coeffs)
        if a is None or b is None:
            bad = src if a is None else dst
            raise ValidationError(f"{bad!r} is not a line of {L}")
        given[a] = b
    if len(set(given.values())) != len(given):
        raise ValidationError("permutation is not injective")
    if not f.faithful:
        if any(a != b for a, b in given.items()):
            raise ValidationError("permutation not induced by any lattice automorphism")
        return identity_aut(L)

    coeffs = [c.coeffs for c in f.classes]
    G = np.array(L.gram, dtype=np.int64)
    C = f.coeff_array
    inter = C @ G @ C.T
    base = f.base
    assigned: dict[int, int] = {}

    def consistent(b, img):
        if img in assigned.values():
            return False
        for b2, img2 in assigned.items():
            if inter[b, b2] != inter[img, img2]:
                return False
        return True

    def search(k):
        if k == len(base):
            perm = [assigned[b] for b in base]
            try:
                imgs = [coeffs[p] for p in perm]
                r = L.rank
                Img = [[imgs[j][i] for j in range(r)] for i in range(r)]
                M = matmul(Img, f.base_inv)
                g = aut_from_matrix(L, M)
            except ValidationError:
                return None
            if all(g.perm[a] == b for a, b in given.items()):
                return g
            return None
        b = base[k]
        if b in given:
            options = [given[b]]
        else:
            options = [b] + [j for j in range(f.m) if j != b]
        for img in options:
            if consistent(b, img):
                assigned[b] = img
                g = search(k + 1)
                if g is not None:
                    return g
                del assigned[b]
        return None

    g = search(0)
    if g is None:
        raise ValidationError(f"permutation {dict(mapping)} is not induced by any lattice automorphism")
    return g


def reflection(L: PicLattice, r: DivClass) -> LatticeAut:
    """``s_r(x) = x + (x.r) r`` for a root ``r`` (``r.r = -2``)."""
    if pair(L, r, r) != -2:
        raise ValidationError(f"{class_name(L, r)} is not a root")
    cols = []
    for e in L.basis():
        cols.append(e + pair(L, e, r) * r)
    M = [[cols[j][i] for j in range(L.rank)] for i in range(L.rank)]
    return aut_from_matrix(L, M)


def simple_roots(L: PicLattice) -> list[DivClass]:
    if L.kind == PRODUCT:
        return [DivClass((1, -1))]
    n = L.n_points
    roots = [L.e(i) - L.e(i + 1) for i in range(1, n)]
    if n >= 3:
        roots.append(L.h() - L.e(1) - L.e(2) - L.e(3))
    return roots


def simple_reflections(L: PicLattice) -> list[LatticeAut]:
    """Generators of W: reflections in simple roots (the factor swap for ``P1 x P1``)."""
    return [reflection(L, r) for r in simple_roots(L)]


# -- subgroups ------------------------------------------------------------------------

@dataclass(frozen=True)
class GaloisSubgroup:
    """A finite subgroup of W with its full element list (sorted by permutation)."""

    lattice: PicLattice
    generators: tuple[LatticeAut, ...]
    elements: tuple[LatticeAut, ...] = field(repr=False)
    closure_enlarged: bool = False

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: LatticeAut) -> bool:
        return g in self._element_set

    @cached_property
    def _element_set(self) -> frozenset:
        return frozenset(self.elements)

    @cached_property
    def perm_array(self) -> np.ndarray:
        f = _frame(self.lattice)
        return np.array([g.perm for g in self.elements], dtype=np.int32).reshape(len(self.elements), f.m)

    def element_key(self) -> tuple:
        return tuple(g.perm for g in self.elements) if _frame(self.lattice).faithful else tuple(
            g.matrix for g in self.elements
        )

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for a in gens for b in gens)

    def __repr__(self):
        return f"GaloisSubgroup(degree={self.lattice.degree}, kind={self.lattice.kind}, order={self.order})"


def _sort_elements(L: PicLattice, elems: Iterable[LatticeAut]) -> tuple[LatticeAut, ...]:
    if _frame(L).faithful:
        return tuple(sorted(elems, key=lambda g: g.perm))
    return tuple(sorted(elems, key=lambda g: g.matrix))


def generate_group(
    gens: Sequence[LatticeAut],
    lattice: PicLattice | None = None,
    max_order: int = MAX_CLOSURE_ORDER,
) -> GaloisSubgroup:
    """Closure of ``gens`` under composition (breadth first).

    Works on permutations of the lines when that action is faithful, on
    matrices otherwise.  Raises :class:`FeasibilityError` beyond ``max_order``.
    """
    gens = tuple(gens)
    if lattice is None:
        if not gens:
            raise ValidationError("an empty generator list needs an explicit lattice")
        lattice = gens[0].lattice
    for g in gens:
        if g.lattice != lattice:
            raise ValidationError(f"generator acts on {g.lattice}, expected {lattice}")
    f = _frame(lattice)
    ident = identity_aut(lattice)
    if f.faithful:
        gp = [g.perm for g in gens]
        seen = {ident.perm}
        frontier = [ident.perm]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gp:
                    y = tuple(x[i] for i in s)  # x o s
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            if len(seen) > max_order:
                raise FeasibilityError(f"group closure exceeds {max_order} elements")
            frontier = nxt
        elems = [LatticeAut(lattice, f.matrix_of_perm(p), p) for p in seen] if len(seen) < 2000 else _bulk_auts(
            lattice, sorted(seen)
        )
    else:
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = x * s
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        elems = list(seen)
    elems = _sort_elements(lattice, elems)
    enlarged = len(elems) != len(set(gens) | {ident})
    return GaloisSubgroup(lattice, gens, elems, enlarged)


def _bulk_auts(L: PicLattice, perms: list[tuple[int, ...]]) -> list[LatticeAut]:
    f = _frame(L)
    P = np.array(perms, dtype=np.int64)
    imgs = f.coeff_array[P[:, f.base]]  # (N, r_basis, r) images of basis lines
    Binv = np.array(f.base_inv, dtype=np.int64)
    mats = np.einsum("nji,jk->nik", imgs, Binv)  # column j of M = image of basis line j
    return [
        LatticeAut(L, tuple(map(tuple, m.tolist())), p) for m, p in zip(mats, perms)
    ]


def trivial_group(L: PicLattice) -> GaloisSubgroup:
    return generate_group([], lattice=L)


def weyl_group(L: PicLattice, max_order: int = MAX_TABLE_ORDER) -> GaloisSubgroup:
    return _weyl(L, max_order)


@lru_cache(maxsize=None)
def _weyl(L: PicLattice, max_order: int) -> GaloisSubgroup:
    return generate_group(simple_reflections(L), lattice=L, max_order=max_order)


def weyl_order(L: PicLattice) -> int:
    """|W| without enumerating it, via Schreier-Sims on the permutation action."""
    f = _frame(L)
    gens = simple_reflections(L)
    if not gens or not f.faithful:
        return 1
    from sympy.combinatorics import Permutation, PermutationGroup

    return int(PermutationGroup([Permutation(list(g.perm)) for g in gens]).order())


def conjugate(G: GaloisSubgroup, g: LatticeAut) -> GaloisSubgroup:
    """``g G g^-1``."""
    gi = g.inverse()
    gens = tuple(g * x * gi for x in G.generators)
    elems = _sort_elements(G.lattice, (g * x * gi for x in G.elements))
    return GaloisSubgroup(G.lattice, gens, elems, G.closure_enlarged)


def orbits(gamma: GaloisSubgroup, classes: Sequence) -> list[list[DivClass]]:
    """Partition ``classes`` into Gamma-orbits (orbits and members in class order)."""
    L = gamma.lattice
    items = [L.cls(c) for c in classes]
    index = {c.coeffs: i for i, c in enumerate(items)}
    parent = list(range(len(items)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in gamma.generators:
        for i, c in enumerate(items):
            j = index.get(g(c).coeffs)
            if j is None:
                raise ValidationError(
                    f"set is not closed under the group: {class_name(L, c)} -> {class_name(L, g(c))}"
                )
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[DivClass]] = {}
    for i, c in enumerate(items):
        groups.setdefault(find(i), []).append(c)
    out = [sorted(v, key=DivClass.sort_key) for v in groups.values()]
    return sorted(out, key=lambda orb: orb[0].sort_key())


def orbit_sums(gamma: GaloisSubgroup, classes: Sequence) -> list[DivClass]:
    out = []
    for orb in orbits(gamma, classes):
        s = orb[0]
        for c in orb[1:]:
            s = s + c
        out.append(s)
    return out


def is_fixed(gamma: GaloisSubgroup, c) -> bool:
    c = gamma.lattice.cls(c)
    return all(g(c) == c for g in gamma.generators)


# -- element tables ---------------------------------------------------------------------

class GroupTable:
    """Indexed element table of a finite permutation group for vectorised work.

    Elements are numbered in lexicographic order of their permutations, so the
    identity is 0 and sorting index sets sorts element sets lexicographically.
    """

    def __init__(self, group: GaloisSubgroup):
        L = group.lattice
        f = _frame(L)
        if not f.faithful:
            raise FeasibilityError(f"no faithful permutation action for {L}")
        if group.order > MAX_TABLE_ORDER:
            raise FeasibilityError(f"group of order {group.order} is too large for an element table")
        self.group = group
        self.lattice = L
        self.frame = f
        self.m = f.m
        self.P = group.perm_array.astype(np.int64)  # already in lexicographic order
        self.N = len(self.P)
        self.base = np.array(f.base, dtype=np.int64)
        self._build_index()
        # inverse permutations and their indices
        Pinv = np.empty_like(self.P)
        rows = np.arange(self.N)[:, None]
        Pinv[rows, self.P] = np.arange(self.m)[None, :]
        self.Pinv = Pinv
        self.inv = self.lookup(Pinv[:, self.base])
        self._flat = self.P.ravel()
        self._Pb = self.P[:, self.base]
        self._offsets = np.arange(self.N, dtype=np.int64) * self.m
        self._table = None
        if self.N <= 2000:
            self._table = self._full_table()

    def _build_index(self):
        # shortest prefix of the base that already separates elements, indexed densely
        imgs = self.P[:, self.base]
        self._radix = self.m ** np.arange(len(self.base), dtype=np.int64)
        for k in range(1, len(self.base) + 1):
            if self.m**k > DENSE_INDEX_LIMIT:
                break
            codes = imgs[:, :k] @ self._radix[:k]
            if np.unique(codes).size == self.N:
                self._prefix = k
                self._dense = np.full(self.m**k, -1, dtype=np.int64)
                self._dense[codes] = np.arange(self.N)
                return
        self._prefix = None
        codes = imgs @ self._radix
        self._code_order = np.argsort(codes, kind="stable")
        self._codes_sorted = codes[self._code_order]

    def lookup(self, base_images: np.ndarray, check: bool = False) -> np.ndarray:
        """Indices of elements with the given images of the base points.

        Inputs are assumed to be group elements unless ``check`` is set.
        """
        base_images = np.asarray(base_images, dtype=np.int64)
        if self._prefix is not None:
            k = self._prefix
            out = self._dense[base_images[..., :k] @ self._radix[:k]]
            if check and (np.any(out < 0) or not np.array_equal(self.P[out][..., self.base], base_images)):
                raise ValidationError("permutation is not an element of the group")
            return out
        codes = base_images @ self._radix
        pos = np.minimum(np.searchsorted(self._codes_sorted, codes), self.N - 1)
        if check and not np.all(self._codes_sorted[pos] == codes):
            raise ValidationError("permutation is not an element of the group")
        return self._code_order[pos]

    def _full_table(self) -> np.ndarray:
        T = np.empty((self.N, self.N), dtype=np.int32)
        Pb = self.P[:, self.base]
        for i in range(self.N):
            # (P_i o P_j)(b) = P_i[P_j[b]]
            T[i] = self.lookup(self.P[i][Pb])
        return T

    def mul(self, a, b) -> np.ndarray:
        """Indices of ``a_k o b_k`` (broadcasting)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._table is not None:
            return self._table[a, b].astype(np.int64)
        # (a o b)(base) = a[b[base]]
        imgs = self._flat[(a * self.m)[..., None] + self._Pb[b]]
        return self.lookup(imgs)

    def conj_all(self, x: int) -> np.ndarray:
        """For every g (by index): index of ``g x g^-1``."""
        # (g x g^-1)(b) = g[x[g^-1[b]]]
        inner = self.P[x][self.Pinv[:, self.base]]
        return self.lookup(self._flat[self._offsets[:, None] + inner])

    def conj_by(self, g: int, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        return self.mul(self.mul(np.full_like(xs, g), xs), np.full_like(xs, self.inv[g]))

    def closure(self, gens: Sequence[int], limit: int | None = None) -> np.ndarray | None:
        """Sorted element indices of the subgroup generated by ``gens``; None past ``limit``."""
        gens = np.unique(np.asarray([int(g) for g in gens if int(g) != 0], dtype=np.int64))
        members = np.zeros(self.N, dtype=bool)
        members[0] = True
        count = 1
        frontier = np.array([0], dtype=np.int64)
        while frontier.size and gens.size:
            prod = self.mul(frontier[:, None], gens[None, :]).ravel()
            prod = np.unique(prod)
            new = prod[~members[prod]]
            if not new.size:
                break
            members[new] = True
            count += new.size
            if limit is not None and count > limit:
                return None
            frontier = new
        return np.flatnonzero(members)

    @cached_property
    def orders(self) -> np.ndarray:
        ords = np.zeros(self.N, dtype=np.int64)
        ords[0] = 1
        idx = np.arange(self.N)
        pw = idx.copy()
        k = 1
        while (ords == 0).any():
            pw = self.mul(pw, idx)
            k += 1
            hit = (pw == 0) & (ords == 0)
            ords[hit] = k
        return ords

    @cached_property
    def cyclic_id(self) -> np.ndarray:
        """Smallest index among the generators of the cyclic subgroup of each element."""
        idx = np.arange(self.N)
        best = idx.copy()
        pw = idx.copy()
        ords = self.orders
        for k in range(2, int(ords.max()) + 1):
            pw = self.mul(pw, idx)
            gen = np.gcd(k, ords) == 1
            best = np.where(gen & (pw < best), pw, best)
        return best

    @cached_property
    def class_id(self) -> np.ndarray:
        """Smallest index in the conjugacy class of each element."""
        gens = self.generator_indices(self.group.generators)
        maps = [self.conj_by_all(int(s)) for s in gens]
        return _orbit_min_labels(self.N, maps)

    def conj_by_all(self, g: int) -> np.ndarray:
        """Map ``x -> g x g^-1`` on all indices."""
        # (g x g^-1)(b) = g[x[g^-1[b]]]
        gib = self.Pinv[g][self.base]
        return self.lookup(self.P[g][self.P[:, gib]])

    def index_of(self, g: LatticeAut) -> int:
        return int(self.lookup(np.array([g.perm], dtype=np.int64)[:, self.base], check=True)[0])

    def generator_indices(self, gens: Iterable[LatticeAut]) -> list[int]:
        return [self.index_of(g) for g in gens]

    def subgroup_indices(self, G: GaloisSubgroup) -> np.ndarray:
        return np.sort(self.lookup(G.perm_array.astype(np.int64)[:, self.base], check=True))

    def normalizer_mask(self, sub: np.ndarray, gens: Sequence[int]) -> np.ndarray:
        mask = np.ones(self.N, dtype=bool)
        member = np.zeros(self.N, dtype=bool)
        member[sub] = True
        for h in gens:
            mask &= member[self.conj_all(int(h))]
        return mask

    def conjugator_mask(self, gens_a: Sequence[int], sub_b: np.ndarray) -> np.ndarray:
        """g with ``g a g^-1`` in B for each generator a."""
        member = np.zeros(self.N, dtype=bool)
        member[sub_b] = True
        mask = np.ones(self.N, dtype=bool)
        for a in gens_a:
            mask &= member[self.conj_all(int(a))]
            if not mask.any():
                break
        return mask

    def minimal_generators(self, sub: np.ndarray) -> list[int]:
        """Greedy generating set: scan elements in index order, keep those not yet generated."""
        gens: list[int] = []
        have = np.zeros(self.N, dtype=bool)
        have[0] = True
        for x in sub:
            if not have[x]:
                gens.append(int(x))
                have[:] = False
                have[self.closure(gens)] = True
        return gens

    def canonical(self, sub: np.ndarray) -> tuple[np.ndarray, int]:
        """Lexicographically least conjugate of a subgroup and one conjugator reaching it."""
        sub = np.asarray(sub, dtype=np.int64)
        if sub.size == 1:
            return sub, 0
        cid = self.class_id
        nontriv = sub[sub != 0]
        m2 = cid[nontriv].min()
        # conjugators putting the smallest reachable element into the set
        cand = np.zeros(self.N, dtype=bool)
        for k in nontriv[cid[nontriv] == m2]:
            cand |= self.conj_all(int(k)) == m2
        gs = np.flatnonzero(cand)
        best, best_g = None, 0
        chunk = max(1, 2_000_000 // max(1, sub.size))
        for s in range(0, gs.size, chunk):
            g = gs[s : s + chunk]
            G = np.repeat(g[:, None], sub.size, axis=1)
            X = np.repeat(sub[None, :], g.size, axis=0)
            C = self.mul(self.mul(G, X), self.inv[G])
            C.sort(axis=1)
            order = np.lexsort(C.T[::-1])
            row = C[order[0]]
            if best is None or tuple(row) < tuple(best):
                best, best_g = row, int(g[order[0]])
        return best, best_g

    def to_subgroup(self, sub: np.ndarray, gens: Sequence[int] | None = None) -> GaloisSubgroup:
        elems = self.group.elements
        if gens is None:
            gens = self.minimal_generators(sub)
        return GaloisSubgroup(
            self.lattice, tuple(elems[int(i)] for i in gens), tuple(elems[int(i)] for i in sub), False
        )


def _orbit_min_labels(n: int, maps: Sequence[np.ndarray]) -> np.ndarray:
    labels = np.arange(n)
    while True:
        old = labels.copy()
        for f in maps:
            labels = np.minimum(labels, labels[f])
            np.minimum.at(labels, f, labels)
        if np.array_equal(labels, old):
            # propagate to the root label
            labels = labels[labels]
            if np.array_equal(labels, old):
                return labels


@lru_cache(maxsize=None)
def weyl_table(L: PicLattice) -> GroupTable:
    return GroupTable(weyl_group(L))


def canonical_conjugate(gamma: GaloisSubgroup) -> tuple[GaloisSubgroup, LatticeAut]:
    """Lexicographically least W-conjugate of Gamma and ``w`` with ``w Gamma w^-1`` equal to it."""
    L = gamma.lattice
    T = weyl_table(L)
    sub = T.subgroup_indices(gamma)
    best, g = T.canonical(sub)
    return T.to_subgroup(best), T.group.elements[g]


# -- conjugacy classes of subgroups --------------------------------------------------------

def subgroups_up_to_conjugacy(
    G: GaloisSubgroup,
    max_order: int | None = None,
    group_bound: int = SURVEY_GROUP_BOUND,
    small_order_bound: int = SURVEY_SMALL_ORDER_BOUND,
    seed: int = 0,
) -> list[GaloisSubgroup]:
    """One representative per G-conjugacy class of subgroups of order <= max_order.

    Subgroups are grown from the trivial group by adjoining one cyclic subgroup of
    prime-power order at a time (a cyclic-extension scheme without the normality
    requirement, so perfect subgroups are reached too).  Candidates are taken up to
    conjugation by the normaliser, deduplicated by conjugacy, and each class is
    reported by its lexicographically least element set; the list is sorted by
    ``(order, element set)``.

    Feasible when ``|G| <= group_bound`` or ``max_order <= small_order_bound``.
    """
    if max_order is None:
        max_order = G.order
    if G.order > group_bound and max_order > small_order_bound:
        raise FeasibilityError(
            f"survey infeasible at this degree: |G| = {G.order} exceeds {group_bound} "
            f"and max_order {max_order} exceeds {small_order_bound}"
        )
    if G.order == 1 or not _frame(G.lattice).faithful:
        return [trivial_group(G.lattice)] if max_order >= 1 else []
    T = GroupTable(G)
    rng = np.random.default_rng(seed)
    ords = T.orders
    primepow = np.array([_is_prime_power(int(o)) for o in ords])
    cid = T.cyclic_id
    class_id = T.class_id

    def invariant(sub):
        return (sub.size, tuple(np.sort(class_id[sub]).tolist()))

    trivial = np.array([0], dtype=np.int64)
    reps: list[tuple[np.ndarray, list[int]]] = [(trivial, [])]
    buckets: dict[tuple, list[int]] = {invariant(trivial): [0]}
    seen: set[bytes] = {trivial.tobytes()}
    queue = [0]
    while queue:
        ri = queue.pop(0)
        H, hgens = reps[ri]
        if 2 * H.size > max_order:
            continue
        in_h = np.zeros(T.N, dtype=bool)
        in_h[H] = True
        norm = np.flatnonzero(T.normalizer_mask(H, hgens))
        # a few normaliser elements suffice: coarser orbits only cost extra closures
        picks = norm if norm.size <= 4 else rng.choice(norm, size=4, replace=False)
        maps = [cid[T.conj_by_all(int(n))] for n in picks if n != 0]
        cand_mask = primepow & (cid == np.arange(T.N)) & ~in_h & (ords > 1)
        labels = _orbit_min_labels(T.N, maps) if maps else np.arange(T.N)
        cands = np.unique(labels[cand_mask])
        cands = cands[cand_mask[cands]] if cands.size else cands
        # orbit representatives that are not themselves candidates fall back to members
        extra = np.setdiff1d(np.unique(labels[cand_mask]), cands)
        if extra.size:
            first = {}
            for x in np.flatnonzero(cand_mask):
                first.setdefault(int(labels[x]), int(x))
            cands = np.array(sorted(first.values()), dtype=np.int64)
        for x in cands:
            K = T.closure(hgens + [int(x)], limit=max_order)
            if K is None:
                continue
            key = K.tobytes()
            if key in seen:
                continue
            seen.add(key)
            inv = invariant(K)
            kgens = hgens + [int(x)]
            dup = False
            for j in buckets.get(inv, []):
                R, _ = reps[j]
                if T.conjugator_mask(kgens, R).any():
                    dup = True
                    break
            if dup:
                continue
            reps.append((K, kgens))
            buckets.setdefault(inv, []).append(len(reps) - 1)
            queue.append(len(reps) - 1)
    out = []
    for K, _ in reps:
        best, _ = T.canonical(K)
        out.append(best)
    out.sort(key=lambda s: (s.size, tuple(s.tolist())))
    return [T.to_subgroup(s) for s in out]


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True


def all_subgroups(G: GaloisSubgroup, max_order: int | None = None) -> list[GaloisSubgroup]:
    """Every subgroup (not up to conjugacy) of order <= max_order; small G only."""
    if G.order == 1 or not _frame(G.lattice).faithful:
        return [trivial_group(G.lattice)]
    T = GroupTable(G)
    found: dict[bytes, np.ndarray] = {}
    for rep in subgroups_up_to_conjugacy(G, max_order):
        sub = T.subgroup_indices(rep)
        for g in range(T.N):
            c = np.sort(T.conj_by(g, sub))
            found.setdefault(c.tobytes(), c)
    subs = sorted(found.values(), key=lambda s: (s.size, tuple(s.tolist())))
    return [T.to_subgroup(s) for s in subs]
