"""Invariant sublattices and first cohomology of finite groups acting on Z^r.

``h1`` computes H^1 as crossed homomorphisms modulo principal ones.  A crossed
homomorphism is pinned down by its values on the generators; walking a
Schreier tree of the (image) group turns the cocycle identity into a linear
system over Z, whose saturated kernel is Z^1.  ``h1_bar`` evaluates the
truncated bar complex literally and ``h1_cyclic`` uses ``ker N / im(g - 1)``;
both exist mainly as independent cross-checks.

Only the image of the group in GL(r, Z) matters: for a torsion-free module the
inflation from the image is an isomorphism on H^1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import FeasibilityError, ValidationError
from .lattice import DivClass
from .linalg import (
    LatticeReducer,
    identity,
    integer_kernel,
    kernel_with_coords,
    matmul,
    matvec,
    quotient_invariants,
)
from .weyl import GaloisSubgroup, LatticeAut, generate_group

H1_MAX_ORDER = 200
SYLOW_LABEL = "upper bound via Sylow restriction"

Mat = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CohGroup:
    """Finite abelian group by invariant factors (each >= 2, each dividing the next)."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(x) for x in self.invariant_factors)
        if any(x < 2 for x in f) or any(b % a for a, b in zip(f, f[1:])):
            raise ValidationError(f"not a chain of invariant factors: {list(f)}")
        object.__setattr__(self, "invariant_factors", f)

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "CohGroup":
        """Normalise an arbitrary list of cyclic orders (0 and 1 dropped)."""
        diag = [[int(o) if i == j else 0 for j in range(len(orders))] for i, o in enumerate(orders)]
        torsion, _ = quotient_invariants(len(orders), diag) if orders else ([], 0)
        return cls(tuple(torsion))

    @property
    def order(self) -> int:
        out = 1
        for x in self.invariant_factors:
            out *= x
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __add__(self, other: "CohGroup") -> "CohGroup":
        return CohGroup.from_orders(list(self.invariant_factors) + list(other.invariant_factors))

    def __str__(self):
        if self.is_trivial:
            return "0"
        return " x ".join(f"Z/{n}" for n in self.invariant_factors)


def _freeze(M) -> Mat:
    return tuple(tuple(int(x) for x in row) for row in M)


class IntegerRep:
    """A finite group of integer matrices acting on column vectors of Z^rank.

    ``generators`` line up with the generators of the Galois subgroup when
    built by :meth:`picard`.
    """

    def __init__(self, rank: int, generators: Sequence, max_order: int | None = None):
        self.rank = int(rank)
        gens = tuple(_freeze(g) for g in generators)
        for g in gens:
            if len(g) != self.rank or any(len(row) != self.rank for row in g):
                raise ValidationError(f"action matrix must be {self.rank}x{self.rank}")
        self.generators = gens
        self._max_order = max_order

    @classmethod
    def picard(cls, gamma: GaloisSubgroup) -> "IntegerRep":
        return cls(gamma.lattice.rank, [g.matrix for g in gamma.generators])

    @classmethod
    def from_generators(cls, generators: Sequence) -> "IntegerRep":
        gens = [_freeze(g) for g in generators]
        if not gens:
            raise ValidationError("need at least one generator to infer the rank")
        return cls(len(gens[0]), gens)

    @cached_property
    def elements(self) -> tuple[Mat, ...]:
        """Image group, breadth first from the identity."""
        e = _freeze(identity(self.rank))
        seen = {e}
        order = [e]
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for s in self.generators:
                    y = _freeze(matmul(s, x))
                    if y not in seen:
                        seen.add(y)
                        order.append(y)
                        nxt.append(y)
                        if self._max_order is not None and len(seen) > self._max_order:
                            raise FeasibilityError(f"matrix group exceeds {self._max_order} elements")
            frontier = nxt
        return tuple(order)

    @property
    def order(self) -> int:
        return len(self.elements)


def _module(gamma, module: IntegerRep | None) -> tuple[IntegerRep, int]:
    if isinstance(gamma, IntegerRep):
        return gamma, None
    if module is None:
        module = IntegerRep.picard(gamma)
    return module, gamma.order


# -- invariants ------------------------------------------------------------------------

def invariant_lattice(gamma, module: IntegerRep | None = None) -> tuple[list[DivClass], int]:
    """Basis (row-HNF, positive pivots) of the fixed sublattice and its rank."""
    M, _ = _module(gamma, module)
    r = M.rank
    rows = []
    for S in M.generators:
        for i in range(r):
            rows.append([S[i][j] - (1 if i == j else 0) for j in range(r)])
    basis = integer_kernel(rows, r) if rows else [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    return [DivClass(b) for b in basis], len(basis)


# -- H^1 via crossed homomorphisms -------------------------------------------------------

def h1(gamma, module: IntegerRep | None = None, max_order: int | None = H1_MAX_ORDER) -> CohGroup:
    """H^1(Gamma, M) as invariant factors.

    Raises :class:`FeasibilityError` when ``|Gamma|`` exceeds ``max_order``.
    """
    M, n = _module(gamma, module)
    if max_order is not None:
        size = n if n is not None else M.order
        if size > max_order:
            raise FeasibilityError(f"H^1 bound exceeded: |Gamma| = {size} > {max_order}")
    return _h1_crossed(M)


def _h1_crossed(M: IntegerRep) -> CohGroup:
    r = M.rank
    gens = [np.array(S, dtype=np.int64) for S in M.generators]
    k = len(gens)
    if k == 0:
        return CohGroup()
    nv = r * k
    blocks = []
    for i in range(k):
        E = np.zeros((r, nv), dtype=np.int64)
        E[:, i * r : (i + 1) * r] = np.eye(r, dtype=np.int64)
        blocks.append(E)
    # F[x] expresses f(x) linearly in the unknown generator values
    ident = _freeze(identity(r))
    F = {ident: np.zeros((r, nv), dtype=np.int64)}
    frontier = [ident]
    red = LatticeReducer(nv)
    pending = []
    while frontier:
        nxt = []
        for x in frontier:
            Fx = F[x]
            X = np.array(x, dtype=np.int64)
            for i, S in enumerate(gens):
                y = _freeze(S @ X)
                val = blocks[i] + S @ Fx
                if y in F:
                    diff = F[y] - val
                    if diff.any():
                        pending.append(diff)
                else:
                    F[y] = val
                    nxt.append(y)
        frontier = nxt
    if pending:
        C = np.unique(np.concatenate(pending), axis=0)
        if np.abs(C).max() >= 1 << 40:
            raise FeasibilityError("cocycle system entries too large for exact int64 staging")
        for row in C.tolist():
            red.add(row)
    Z, P = kernel_with_coords(red.rows(), nv)
    z = len(Z[0]) if Z and Z[0] else 0
    if z == 0:
        return CohGroup()
    # principal crossed homomorphisms: f_m(s_i) = s_i m - m
    rels = []
    for j in range(r):
        v = []
        for S in M.generators:
            v.extend(S[a][j] - (1 if a == j else 0) for a in range(r))
        rels.append(matvec(P, v))
    torsion, free = quotient_invariants(z, rels)
    if free:
        raise ValidationError("H^1 came out infinite; the action is not by a finite group")
    return CohGroup(tuple(torsion))


def h1_bar(gamma, module: IntegerRep | None = None, max_order: int = 48) -> CohGroup:
    """H^1 from the truncated bar complex ``M -> Maps(G, M) -> Maps(G x G, M)``.

    Quadratic in ``|G|``; an oracle for small groups only.
    """
    M, _ = _module(gamma, module)
    els = M.elements
    n, r = len(els), M.rank
    if n > max_order:
        raise FeasibilityError(f"bar complex bound exceeded: |G| = {n} > {max_order}")
    idx = {g: i for i, g in enumerate(els)}
    mult = [[idx[_freeze(matmul(g, h))] for h in els] for g in els]
    # d1 f (g, h) = g f(h) - f(gh) + f(g)
    red = LatticeReducer(n * r)
    for a, g in enumerate(els):
        for b in range(n):
            c = mult[a][b]
            for row in range(r):
                v = [0] * (n * r)
                for col in range(r):
                    v[b * r + col] += g[row][col]
                v[c * r + row] -= 1
                v[a * r + row] += 1
                red.add(v)
    Z, P = kernel_with_coords(red.rows(), n * r)
    z = len(Z[0]) if Z and Z[0] else 0
    if z == 0:
        return CohGroup()
    # d0 m = (g m - m)_g
    rels = []
    for j in range(r):
        v = []
        for g in els:
            v.extend(g[a][j] - (1 if a == j else 0) for a in range(r))
        rels.append(matvec(P, v))
    torsion, free = quotient_invariants(z, rels)
    return CohGroup(tuple(torsion))


def h1_cyclic(g, module: IntegerRep | None = None) -> CohGroup:
    """H^1 of the cyclic group generated by ``g``: ``ker N / im(g - 1)``."""
    if isinstance(g, LatticeAut):
        S = g.matrix
    elif isinstance(g, IntegerRep):
        if len(g.generators) != 1:
            raise ValidationError("h1_cyclic needs a single generator")
        S = g.generators[0]
    else:
        S = _freeze(g)
    r = len(S)
    powers = [_freeze(identity(r))]
    while True:
        nxt = _freeze(matmul(S, powers[-1]))
        if nxt == powers[0]:
            break
        powers.append(nxt)
        if len(powers) > 10_000:
            raise ValidationError("matrix does not have finite order")
    N = [[sum(p[i][j] for p in powers) for j in range(r)] for i in range(r)]
    K, P = kernel_with_coords(N, r)
    z = len(K[0]) if K and K[0] else 0
    if z == 0:
        return CohGroup()
    rels = []
    for j in range(r):
        col = [S[i][j] - (1 if i == j else 0) for i in range(r)]
        rels.append(matvec(P, col))
    torsion, _ = quotient_invariants(z, rels)
    return CohGroup(tuple(torsion))


# -- Sylow restriction ----------------------------------------------------------------------

def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def sylow_subgroup(gamma: GaloisSubgroup, p: int) -> GaloisSubgroup:
    """A Sylow p-subgroup, grown one normalising element of order p (mod P) at a time."""
    n = gamma.order
    target = 1
    while n % p == 0:
        n //= p
        target *= p
    ident = next(g for g in gamma.elements if g.is_identity)
    members = {ident}
    gens: list[LatticeAut] = []
    while len(members) < target:
        found = None
        for x in gamma.elements:
            if x in members:
                continue
            xi = x.inverse()
            if not all(x * h * xi in members for h in gens):
                continue
            xp = ident
            for _ in range(p):
                xp = xp * x
            if xp in members:
                found = x
                break
        if found is None:  # cannot happen by the Sylow theorems
            raise RuntimeError("failed to extend p-subgroup")
        layer = set(members)
        power = found
        for _ in range(p - 1):
            layer |= {power * m for m in members}
            power = power * found
        members = layer
        gens.append(found)
    return generate_group(gens, lattice=gamma.lattice)


def h1_sylow_bound(gamma: GaloisSubgroup, max_order: int | None = H1_MAX_ORDER) -> CohGroup:
    """Direct sum over primes of H^1 of a Sylow subgroup; H^1(Gamma) embeds in it."""
    total = CohGroup()
    for p in _prime_factors(gamma.order):
        P = sylow_subgroup(gamma, p)
        total = total + h1(P, max_order=max_order)
    return total
