"""Picard lattices of del Pezzo surfaces over an algebraic closure.

Two lattice kinds are modelled:

* ``blowup``: the blow-up of the plane in ``9 - degree`` points, basis
  ``H, E1, ..., En`` with intersection form ``diag(1, -1, ..., -1)``;
* ``product``: the quadric ``P1 x P1`` (degree 8), basis ``L1 = (1,0)``,
  ``L2 = (0,1)`` with the hyperbolic form.

A class ``aH - b1 E1 - ... - bn En`` is stored as the coefficient vector
``(a, -b1, ..., -bn)``.  Enumerated families are returned in a fixed order
(sorted by ``(a, b1, ..., bn)``) so downstream reports are byte-stable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from .errors import ValidationError

BLOWUP = "blowup"
PRODUCT = "product"
KINDS = (BLOWUP, PRODUCT)


@dataclass(frozen=True, order=False)
class DivClass:
    """Integer coefficient vector of a divisor class in a fixed lattice basis."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def _check(self, other):
        if not isinstance(other, DivClass):
            return NotImplemented
        if len(other) != len(self):
            raise ValidationError(f"rank mismatch: {len(self)} vs {len(other)}")
        return None

    def __add__(self, other):
        bad = self._check(other)
        if bad is NotImplemented:
            return bad
        return DivClass(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        bad = self._check(other)
        if bad is NotImplemented:
            return bad
        return DivClass(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return DivClass(-a for a in self.coeffs)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return DivClass(k * a for a in self.coeffs)

    __rmul__ = __mul__

    def sort_key(self):
        """Key giving the order used for every enumerated family."""
        return (self.coeffs[0],) + tuple(-c for c in self.coeffs[1:])

    def __repr__(self):
        return f"DivClass({list(self.coeffs)})"


@dataclass(frozen=True)
class PicLattice:
    """Picard lattice of a geometrically split del Pezzo surface of given degree and kind."""

    degree: int
    kind: str = BLOWUP

    def __post_init__(self):
        if not isinstance(self.degree, int) or not 1 <= self.degree <= 9:
            raise ValidationError(f"degree must be an integer in 1..9, got {self.degree!r}")
        if self.kind not in KINDS:
            raise ValidationError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == PRODUCT and self.degree != 8:
            raise ValidationError(f"product kind requires degree 8, got {self.degree}")

    @property
    def rank(self) -> int:
        return 2 if self.kind == PRODUCT else 10 - self.degree

    @property
    def n_points(self) -> int:
        """Number of blown-up points (0 for the product lattice)."""
        return 0 if self.kind == PRODUCT else 9 - self.degree

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        r = self.rank
        if self.kind == PRODUCT:
            return ((0, 1), (1, 0))
        return tuple(
            tuple((1 if i == 0 else -1) if i == j else 0 for j in range(r)) for i in range(r)
        )

    @cached_property
    def canonical(self) -> DivClass:
        if self.kind == PRODUCT:
            return DivClass((-2, -2))
        return DivClass((-3,) + (1,) * self.n_points)

    @property
    def anticanonical(self) -> DivClass:
        return -self.canonical

    def basis(self) -> list[DivClass]:
        r = self.rank
        return [DivClass(1 if i == j else 0 for j in range(r)) for i in range(r)]

    def h(self) -> DivClass:
        """Pull-back of a line class (blowup kind only)."""
        if self.kind != BLOWUP:
            raise ValidationError("H is only defined for blowup lattices")
        return self.basis()[0]

    def e(self, i: int) -> DivClass:
        """Exceptional divisor over the i-th point, 1-based."""
        if self.kind != BLOWUP or not 1 <= i <= self.n_points:
            raise ValidationError(f"E{i} does not exist in {self}")
        return self.basis()[i]

    def cls(self, spec) -> DivClass:
        """Coerce a name (``"H-E1-E2"``), a DivClass or a coefficient sequence."""
        if isinstance(spec, DivClass):
            c = spec
        elif isinstance(spec, str):
            c = parse_class(self, spec)
        else:
            c = DivClass(spec)
        if len(c) != self.rank:
            raise ValidationError(f"class {c} has length {len(c)}, lattice rank is {self.rank}")
        return c

    def __str__(self):
        return f"PicLattice(degree={self.degree}, kind={self.kind})"


def make_lattice(degree: int, kind: str = BLOWUP) -> PicLattice:
    return PicLattice(degree, kind)


def pair(L: PicLattice, a: DivClass | Sequence[int], b: DivClass | Sequence[int]) -> int:
    """Intersection number ``a . b``."""
    a = tuple(a)
    b = tuple(b)
    if len(a) != L.rank or len(b) != L.rank:
        raise ValidationError(f"dimension mismatch: lattice rank {L.rank}, got {len(a)} and {len(b)}")
    if L.kind == PRODUCT:
        return a[0] * b[1] + a[1] * b[0]
    return a[0] * b[0] - sum(x * y for x, y in zip(a[1:], b[1:]))


def self_intersection(L: PicLattice, a) -> int:
    return pair(L, a, a)


# -- class names ---------------------------------------------------------------

_TERM = re.compile(r"([+-]?)(\d*)(H|E\d+|L[12]|K)")


def class_name(L: PicLattice, c: DivClass | Sequence[int]) -> str:
    """Human-readable name, e.g. ``"2H-E1-E2-E3-E4-E5"``; inverse of :func:`parse_class`."""
    c = tuple(c)
    labels = ["L1", "L2"] if L.kind == PRODUCT else ["H"] + [f"E{i}" for i in range(1, L.rank)]
    out = []
    for coef, lab in zip(c, labels):
        if coef == 0:
            continue
        sign = "-" if coef < 0 else ("+" if out else "")
        mag = "" if abs(coef) == 1 else str(abs(coef))
        out.append(f"{sign}{mag}{lab}")
    return "".join(out) or "0"


def parse_class(L: PicLattice, text: str) -> DivClass:
    s = text.replace(" ", "")
    if s == "0":
        return DivClass((0,) * L.rank)
    pos = 0
    coeffs = [0] * L.rank
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValidationError(f"cannot parse class name {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        mag = int(m.group(2)) if m.group(2) else 1
        lab = m.group(3)
        if lab == "K":
            vec = L.canonical.coeffs
        else:
            if L.kind == PRODUCT:
                idx = {"L1": 0, "L2": 1}.get(lab)
            elif lab == "H":
                idx = 0
            elif lab.startswith("E"):
                idx = int(lab[1:])
                if not 1 <= idx <= L.n_points:
                    idx = None
            else:
                idx = None
            if idx is None:
                raise ValidationError(f"unknown basis label {lab!r} in {text!r} for {L}")
            vec = tuple(1 if j == idx else 0 for j in range(L.rank))
        for j in range(L.rank):
            coeffs[j] += sign * mag * vec[j]
        pos = m.end()
    return DivClass(coeffs)


# -- enumeration of distinguished classes ----------------------------------------

def _vectors(n: int, total: int, squares: int, lo: int, hi: int):
    """All integer n-tuples in [lo, hi]^n with given sum and sum of squares.

    Non-increasing tuples are found first and then permuted.
    """
    sorted_hits = []
    cur = []

    def rec(k, t, q, top):
        if k == 0:
            if t == 0 and q == 0:
                sorted_hits.append(tuple(cur))
            return
        # Cauchy-Schwarz: t^2 <= k * q is necessary for the tail
        if q < 0 or t * t > k * q:
            return
        for v in range(min(top, hi), lo - 1, -1):
            if v * v > q:
                continue
            # remaining k-1 entries are all <= v
            if t - v > (k - 1) * v:
                break
            cur.append(v)
            rec(k - 1, t - v, q - v * v, v)
            cur.pop()

    rec(n, total, squares, hi)
    return [tuple(p) for h in sorted_hits for p in multiset_permutations(list(h))]


def _bounded_solutions(n: int, self_int: int, k_dot: int) -> list[tuple[int, ...]]:
    """All blowup classes with ``c.c = self_int`` and ``c.K = k_dot`` (n < 9 points).

    Complete: writing c = aH - sum b_i E_i, the conditions read
    ``sum b = k_dot + 3a`` and ``sum b^2 = a^2 - self_int``, and Cauchy-Schwarz
    bounds ``a`` because ``n < 9``.
    """
    sols = []
    for a in range(-60, 61):
        t = k_dot + 3 * a
        q = a * a - self_int
        if q < 0 or t * t > n * q:
            continue
        r = math.isqrt(q)
        for b in _vectors(n, t, q, -r, r):
            sols.append((a,) + tuple(-x for x in b))
    return sols


def _sorted_classes(vecs) -> tuple[DivClass, ...]:
    return tuple(sorted((DivClass(v) for v in vecs), key=DivClass.sort_key))


@lru_cache(maxsize=None)
def _exceptional(degree: int, kind: str) -> tuple[DivClass, ...]:
    L = PicLattice(degree, kind)
    if kind == PRODUCT or degree == 9:
        return ()
    n = L.n_points
    found = []
    # a <= 6 holds for every (-1)-class once n <= 8; b_i >= -1 with equality only for E_i
    for a in range(0, 7):
        for b in _vectors(n, 3 * a - 1, a * a + 1, -1, a):
            found.append((a,) + tuple(-x for x in b))
    return _sorted_classes(found)


def exceptional_classes(L: PicLattice) -> tuple[DivClass, ...]:
    """All classes with ``c.c = -1`` and ``c.K = -1`` (empty for the product lattice)."""
    return _exceptional(L.degree, L.kind)


def sum_exceptional(L: PicLattice) -> DivClass:
    total = DivClass((0,) * L.rank)
    for c in exceptional_classes(L):
        total = total + c
    return total


def _nef_mask(L: PicLattice, cands) -> np.ndarray:
    """True where the candidate meets every line non-negatively."""
    if not cands:
        return np.zeros(0, dtype=bool)
    lines = exceptional_classes(L)
    if not lines:
        return np.ones(len(cands), dtype=bool)
    C = np.array(cands, dtype=np.int64)
    E = np.array([e.coeffs for e in lines], dtype=np.int64)
    G = np.array(L.gram, dtype=np.int64)
    return ((C @ G @ E.T) >= 0).all(axis=1)


@lru_cache(maxsize=None)
def _conics(degree: int, kind: str) -> tuple[DivClass, ...]:
    L = PicLattice(degree, kind)
    if kind == PRODUCT:
        return _sorted_classes([(1, 0), (0, 1)])
    if degree == 9:
        return ()
    cands = _bounded_solutions(L.n_points, 0, -2)
    ok = _nef_mask(L, cands) & (np.array([v[0] for v in cands]) > 0)
    return _sorted_classes(v for v, keep in zip(cands, ok) if keep)


def conic_classes(L: PicLattice) -> tuple[DivClass, ...]:
    """Classes of conics: ``c.c = 0``, ``-K.c = 2``, numerically effective against all lines.

    For the product lattice these are the two rulings.
    """
    return _conics(L.degree, L.kind)


@lru_cache(maxsize=None)
def _roots(degree: int, kind: str) -> tuple[DivClass, ...]:
    if kind == PRODUCT:
        return _sorted_classes([(1, -1), (-1, 1)])
    if degree == 9:
        return ()
    return _sorted_classes(_bounded_solutions(9 - degree, -2, 0))


def root_classes(L: PicLattice) -> tuple[DivClass, ...]:
    """Classes with ``c.c = -2`` and ``c.K = 0``.

    For the product lattice the same conditions give ``+-(L1 - L2)``; the factor
    swap is the reflection in them.
    """
    return _roots(L.degree, L.kind)


@lru_cache(maxsize=None)
def _planes(degree: int, kind: str) -> tuple[DivClass, ...]:
    if kind == PRODUCT:
        return ()
    L = PicLattice(degree, kind)
    cands = _bounded_solutions(L.n_points, 1, -3)
    ok = _nef_mask(L, cands)
    return _sorted_classes(v for v, keep in zip(cands, ok) if keep)


def plane_classes(L: PicLattice) -> tuple[DivClass, ...]:
    """Nef classes with ``c.c = 1`` and ``-K.c = 3``: pull-backs of lines under a
    birational morphism to a plane (``H`` and its images under W)."""
    return _planes(L.degree, L.kind)


def distinguished_classes(L: PicLattice) -> tuple[DivClass, ...]:
    """The finite set W acts on faithfully: lines, or the two rulings for ``P1 x P1``."""
    if L.kind == PRODUCT:
        return conic_classes(L)
    return exceptional_classes(L)
